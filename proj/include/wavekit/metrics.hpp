// SPDX-License-Identifier: Apache-2.0
//
// wavekit - wavenumber-domain MIMO precoding and capacity simulation
// Copyright (C) 2026 The wavekit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WAVEKIT_METRICS_H
#define WAVEKIT_METRICS_H

#include "wavekit/power_allocation.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace wavekit
{
    enum class Scheme
    {
        WD_DC,
        WD_WF,
        WD_IWF,
        WD_PSO,
        SVD_BOUND,
        SPATIAL_DIVISION
    };

    std::string_view to_string(Scheme s) noexcept;
    std::optional<Scheme> scheme_from_string(std::string_view name) noexcept;
    bool is_wavenumber_scheme(Scheme s) noexcept;

    inline constexpr double default_rank_tol = 1e-6;

    // H = U diag(sigma) V^H, thin factors, sigma descending
    struct SvdDecomposition
    {
        CMatrix left_vectors;
        RVector singular_values;
        CMatrix right_vectors;
        std::size_t rank_effective = 0; // count of sigma_i > rank_tol * sigma_1
    };

    SvdDecomposition svd_decompose(const CMatrix &h, double rank_tol = default_rank_tol, bool compute_vectors = true);

    // Analog stages are dictionary codewords, the digital stage is diag(sqrt(p))
    struct HybridPrecoder
    {
        CMatrix analog_tx;  // N_T x K
        CMatrix digital_tx; // K x K
        CMatrix analog_rx;  // K x N_R
    };

    struct ReportMetadata
    {
        double distance_m = 0.0;
        std::size_t n_x = 0;
        std::size_t n_y = 0;
        std::uint64_t seed = 0;
        double beta = 1.0;
    };

    struct CapacityReport
    {
        Scheme scheme = Scheme::SVD_BOUND;
        RVector per_stream_sinr;
        double capacity_bits = 0.0;
        std::size_t num_streams = 0;
        ReportMetadata metadata;
    };

    // Fully-digital bound: water-filling over lambda_i = sigma_i^2 of the top min(rank_effective, max_streams) modes
    CapacityReport svd_capacity(const ChannelMatrix &h, const SystemParams &params,
                                std::size_t max_streams = std::numeric_limits<std::size_t>::max(),
                                double rank_tol = default_rank_tol);

    // Whole budget on the strongest eigen-direction: log2(1 + P_T lambda_max / noise)
    CapacityReport spatial_division_capacity(const ChannelMatrix &h, const SystemParams &params);

    // Per-stream SINR with the interference of the other selected pairs treated as noise.
    // Throws IndexOutOfRange for pairs outside h_a and ShapeMismatch if p has the wrong length.
    RVector wd_sinr(const WavenumberChannel &h_a, const StreamAssignment &assign, const RVector &p, double noise);

    // F_A columns are [Psi_T]_{:, c_k}, C_A rows are [Psi_R^H]_{r_k, :}, F_D = diag(sqrt(p_k)).
    // The overload taking SystemParams throws RfChainLimit when K exceeds the RF chain count on either side.
    HybridPrecoder assemble_hybrid(const Dictionary &tx_dict, const Dictionary &rx_dict, const StreamAssignment &assign,
                                   const RVector &p);
    HybridPrecoder assemble_hybrid(const Dictionary &tx_dict, const Dictionary &rx_dict, const StreamAssignment &assign,
                                   const RVector &p, const SystemParams &params);

    // Largest |[C_A H F_A]_{k,k'} - [H_a]_{r_k, c_k'}| over all k, k'
    double keystone_error(const HybridPrecoder &hp, const ChannelMatrix &h, const WavenumberChannel &h_a,
                          const StreamAssignment &assign);

    enum class SelectionMethod
    {
        hungarian,
        greedy
    };

    struct WdOptions
    {
        double beta = 1.0;
        Scheme allocator = Scheme::WD_DC;
        SelectionMethod selection = SelectionMethod::hungarian;
        std::optional<std::size_t> max_streams;
        DcOptions dc;
        IwfOptions iwf;
        PsoOptions pso;
        bool verify_keystone = false;
        double keystone_tol = 1e-10;
    };

    // Dictionaries for both ends of a link, built once per geometry
    struct DictionaryPair
    {
        Dictionary rx;
        Dictionary tx;
    };
    DictionaryPair build_dictionaries(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params, double beta);

    // Wavenumber channel and stream selection; independent of the power allocator
    struct WdSelection
    {
        WavenumberChannel h_a;
        RMatrix gains;
        StreamAssignment assignment;
    };

    // Throws RfChainLimit when the (possibly truncated) stream count exceeds the RF chains
    WdSelection wd_select(const ChannelMatrix &h, const SystemParams &params, const DictionaryPair &dicts, const WdOptions &opts);

    struct WdResult
    {
        PowerAllocation allocation;
        CapacityReport report;
    };

    // Power allocation with opts.allocator on a fixed selection, then SINR and capacity
    WdResult wd_allocate(const WdSelection &sel, const SystemParams &params, const WdOptions &opts);

    // support -> dictionary -> H_a -> selection -> allocation -> SINR -> capacity.
    // With opts.verify_keystone the assembled hybrid precoder is checked against H_a (throws Error on mismatch).
    WdResult wd_pipeline(const ChannelMatrix &h, const SystemParams &params, const WdOptions &opts);

    CapacityReport wd_capacity_report(const ChannelMatrix &h, const SystemParams &params, double beta, Scheme solver);
    CapacityReport wd_capacity_report(const ChannelMatrix &h, const SystemParams &params, const WdOptions &opts);
}

#endif
