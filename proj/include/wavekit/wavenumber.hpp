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

#ifndef WAVEKIT_WAVENUMBER_H
#define WAVEKIT_WAVENUMBER_H

#include "wavekit/array_geometry.hpp"
#include "wavekit/channel.hpp"

#include <utility>
#include <vector>

namespace wavekit
{
    // Integer harmonic index (l_x, l_y)
    struct WavenumberIndex
    {
        int l_x = 0;
        int l_y = 0;

        auto operator<=>(const WavenumberIndex &) const = default;
    };

    // Set of harmonic indices admitted on one array:
    //   (2 pi l_x / L_x)^2 + (2 pi l_y / L_y)^2 <= beta k^2,
    // clipped per axis to the half-open range ceil(-n/2) .. ceil(n/2)-1 so that no two indices alias modulo n.
    // Sorted lexicographically by (l_x, l_y).
    class WavenumberSupport
    {
    public:
        WavenumberSupport(std::vector<WavenumberIndex> indices, double beta, ArrayGeometry geom);

        const std::vector<WavenumberIndex> &indices() const noexcept { return indices_; }
        std::size_t size() const noexcept { return indices_.size(); }
        double beta() const noexcept { return beta_; }
        const ArrayGeometry &geom() const noexcept { return geom_; }

        // Position of idx within the support, or -1
        std::ptrdiff_t find(const WavenumberIndex &idx) const noexcept;

    private:
        std::vector<WavenumberIndex> indices_;
        double beta_;
        ArrayGeometry geom_;
    };

    // Inclusive per-axis anti-aliasing range for n elements
    std::pair<int, int> alias_free_range(std::size_t n);

    // beta >= 1. Throws InvalidArgument for beta < 1, EmptySupport if nothing qualifies.
    WavenumberSupport enumerate_support(const ArrayGeometry &geom, const SystemParams &params, double beta = 1.0);

    // Fourier-harmonic codebook Psi (N x |xi|). Column for (l_x, l_y) has entries
    // exp(j 2 pi (l_x i_x / n_x + l_y i_y / n_y)) / sqrt(N) at flattened element (i_x, i_y).
    class Dictionary
    {
    public:
        explicit Dictionary(WavenumberSupport support);

        const CMatrix &matrix() const noexcept { return matrix_; }
        const WavenumberSupport &support() const noexcept { return support_; }
        Eigen::Index num_elements() const noexcept { return matrix_.rows(); }
        Eigen::Index num_codewords() const noexcept { return matrix_.cols(); }

    private:
        WavenumberSupport support_;
        CMatrix matrix_;
    };

    inline Dictionary build_dictionary(WavenumberSupport support) { return Dictionary(std::move(support)); }

    // Wavenumber-domain channel H_a (|xi_R| x |xi_T|)
    class WavenumberChannel
    {
    public:
        WavenumberChannel(CMatrix entries, WavenumberSupport rx_support, WavenumberSupport tx_support);

        const CMatrix &entries() const noexcept { return entries_; }
        const WavenumberSupport &rx_support() const noexcept { return rx_; }
        const WavenumberSupport &tx_support() const noexcept { return tx_; }
        Eigen::Index rows() const noexcept { return entries_.rows(); }
        Eigen::Index cols() const noexcept { return entries_.cols(); }

    private:
        CMatrix entries_;
        WavenumberSupport rx_;
        WavenumberSupport tx_;
    };

    // H_a = Psi_R^H H Psi_T. Throws ShapeMismatch.
    WavenumberChannel to_wavenumber(const ChannelMatrix &h, const Dictionary &rx_dict, const Dictionary &tx_dict);

    // H = Psi_R H_a Psi_T^H. Throws ShapeMismatch.
    ChannelMatrix from_wavenumber(const WavenumberChannel &h_a, const Dictionary &rx_dict, const Dictionary &tx_dict);
}

#endif
