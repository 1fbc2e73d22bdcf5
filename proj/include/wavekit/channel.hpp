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

#ifndef WAVEKIT_CHANNEL_H
#define WAVEKIT_CHANNEL_H

#include "wavekit/array_geometry.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace wavekit
{
    using cdouble = std::complex<double>;
    using CMatrix = Eigen::MatrixXcd;
    using CVector = Eigen::VectorXcd;

    // Point scatterer with its bulk complex gain g_q
    struct Scatterer
    {
        Vec3 position_m = Vec3::Zero();
        cdouble complex_gain{0.0, 0.0};
    };

    // Spatial-domain channel H (N_R x N_T) together with the arrays it connects
    class ChannelMatrix
    {
    public:
        // Throws ShapeMismatch if the shape disagrees with the geometries, NonFinite on NaN/Inf entries
        ChannelMatrix(CMatrix entries, ArrayGeometry tx_geom, ArrayGeometry rx_geom);

        const CMatrix &entries() const noexcept { return entries_; }
        const ArrayGeometry &tx_geom() const noexcept { return tx_; }
        const ArrayGeometry &rx_geom() const noexcept { return rx_; }
        Eigen::Index rows() const noexcept { return entries_.rows(); }
        Eigen::Index cols() const noexcept { return entries_.cols(); }

        ChannelMatrix operator+(const ChannelMatrix &other) const;

    private:
        CMatrix entries_;
        ArrayGeometry tx_;
        ArrayGeometry rx_;
    };

    // Where scatterers are dropped, relative to the Tx array center and expressed in the Tx frame.
    // Radius is volume-uniform in [radius_min_m, radius_max_m]; an unset maximum means "Tx-Rx distance".
    // Azimuth is measured from boresight in the local x-z plane, elevation towards local y.
    struct ScattererRegion
    {
        double radius_min_m = 1.0;
        std::optional<double> radius_max_m;
        double azimuth_min_deg = -60.0;
        double azimuth_max_deg = 60.0;
        double elevation_min_deg = -15.0;
        double elevation_max_deg = 15.0;
    };

    // Statistical channel description; gains are circularly-symmetric complex Gaussian with zero mean
    struct ChannelConfig
    {
        double los_gain_variance = 1.0;
        double nlos_gain_variance = 0.01;
        std::size_t num_scatterers = 2;
        ScattererRegion scatterer_placement;
        std::uint64_t rng_seed = 0;

        void validate() const; // Throws InvalidArgument
    };

    // Random draw behind one channel realization
    struct ChannelRealization
    {
        cdouble los_gain{0.0, 0.0};
        std::vector<Scatterer> scatterers;
    };

    // LoS spherical-wave component: H[n_R, n_T] = g0 * exp(-j k r) / r
    ChannelMatrix synthesize_los(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params, cdouble g0);

    // NLoS component: sum_q g_q a_R(q) a_T(q)^H with unit-norm, phase-only steering vectors referenced
    // to the array centers. Both legs carry the propagation phase exp(-j k (d_n - d_center)), as the LoS term does,
    // so a_R(q) has entries exp(-j k (d_n - d_center)) / sqrt(N_R) and the composite channel is reciprocal.
    ChannelMatrix synthesize_nlos(const ArrayGeometry &tx, const ArrayGeometry &rx, const SystemParams &params,
                                  const std::vector<Scatterer> &scatterers);

    // Draws LoS gain and scatterers from cfg (reproducible per rng_seed)
    ChannelRealization draw_realization(const ChannelConfig &cfg, const ArrayGeometry &tx, const ArrayGeometry &rx);

    // H = H_LoS + H_NLoS for the realization drawn with cfg.rng_seed
    ChannelMatrix synthesize_channel(const ChannelConfig &cfg, const ArrayGeometry &tx, const ArrayGeometry &rx,
                                     const SystemParams &params);

    // Matrix files. Text: header "N_R N_T", then one "real imag" pair per line, row-major.
    // Binary: two little-endian uint64 (N_R, N_T), then row-major little-endian float64 (real, imag) pairs.
    void write_matrix_text(const std::filesystem::path &path, const CMatrix &m);
    CMatrix read_matrix_text(const std::filesystem::path &path);
    void write_matrix_binary(const std::filesystem::path &path, const CMatrix &m);
    CMatrix read_matrix_binary(const std::filesystem::path &path);
}

#endif
