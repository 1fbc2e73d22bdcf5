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

#include "wavekit/array_geometry.hpp"
#include "wavekit/errors.hpp"

#include <cmath>
#include <numbers>

namespace wavekit
{
    double dbm_to_watt(double dbm)
    {
        return std::pow(10.0, (dbm - 30.0) / 10.0);
    }

    double watt_to_dbm(double watt)
    {
        return 10.0 * std::log10(watt) + 30.0;
    }

    SystemParams::SystemParams(double carrier_frequency_hz, double noise_power_w, double total_tx_power_w,
                               std::size_t num_rf_chains_tx, std::size_t num_rf_chains_rx)
        : carrier_frequency_hz_(carrier_frequency_hz), noise_power_w_(noise_power_w),
          total_tx_power_w_(total_tx_power_w), num_rf_chains_tx_(num_rf_chains_tx),
          num_rf_chains_rx_(num_rf_chains_rx)
    {
        if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
            throw InvalidArgument("carrier frequency must be positive");
        if (!(noise_power_w > 0.0) || !std::isfinite(noise_power_w))
            throw InvalidArgument("noise power must be positive");
        if (!(total_tx_power_w > 0.0) || !std::isfinite(total_tx_power_w))
            throw InvalidArgument("total transmit power must be positive");
        if (num_rf_chains_tx == 0 || num_rf_chains_rx == 0)
            throw InvalidArgument("RF chain counts must be positive");

        wavelength_m_ = speed_of_light / carrier_frequency_hz_;
        wavenumber_ = 2.0 * std::numbers::pi / wavelength_m_;
    }

    ArrayGeometry::ArrayGeometry(std::size_t n_x, std::size_t n_y, double spacing_m,
                                 const Vec3 &center_position_m, const Rotation &orientation)
        : n_x_(n_x), n_y_(n_y), spacing_m_(spacing_m), center_(center_position_m), orientation_(orientation)
    {
        if (n_x == 0 || n_y == 0)
            throw InvalidArgument("array must have at least one element per axis");
        if (!(spacing_m > 0.0) || !std::isfinite(spacing_m))
            throw InvalidArgument("element spacing must be positive");
        if (!center_.allFinite())
            throw InvalidArgument("array center must be finite");
        const double ortho_err = (orientation_.transpose() * orientation_ - Rotation::Identity()).cwiseAbs().maxCoeff();
        if (!(ortho_err < 1e-9) || std::abs(orientation_.determinant() - 1.0) > 1e-9)
            throw InvalidArgument("orientation must be a proper rotation matrix");
    }

    double ArrayGeometry::aperture_diagonal_m() const noexcept
    {
        return std::hypot(aperture_x_m(), aperture_y_m());
    }

    double ArrayGeometry::rayleigh_distance_m(double wavelength_m) const noexcept
    {
        const double d = aperture_diagonal_m();
        return 2.0 * d * d / wavelength_m;
    }

    std::vector<Vec3> element_positions(const ArrayGeometry &geom)
    {
        const double off_x = 0.5 * static_cast<double>(geom.n_x() - 1);
        const double off_y = 0.5 * static_cast<double>(geom.n_y() - 1);
        const double d = geom.spacing_m();

        std::vector<Vec3> pos;
        pos.reserve(geom.num_elements());
        for (std::size_t ix = 0; ix < geom.n_x(); ++ix)
            for (std::size_t iy = 0; iy < geom.n_y(); ++iy)
            {
                const Vec3 local((static_cast<double>(ix) - off_x) * d, (static_cast<double>(iy) - off_y) * d, 0.0);
                pos.emplace_back(geom.center_position_m() + geom.orientation() * local);
            }
        return pos;
    }

    Rotation facing_orientation()
    {
        Rotation r;
        r << -1.0, 0.0, 0.0,
            0.0, 1.0, 0.0,
            0.0, 0.0, -1.0;
        return r;
    }

    LinkGeometry facing_link(std::size_t n_x, std::size_t n_y, double spacing_m, double distance_m)
    {
        if (!(distance_m > 0.0))
            throw InvalidArgument("link distance must be positive");
        return LinkGeometry{ArrayGeometry(n_x, n_y, spacing_m),
                            ArrayGeometry(n_x, n_y, spacing_m, Vec3(0.0, 0.0, distance_m), facing_orientation())};
    }
}
