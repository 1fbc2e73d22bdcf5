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

#ifndef WAVEKIT_ARRAY_GEOMETRY_H
#define WAVEKIT_ARRAY_GEOMETRY_H

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace wavekit
{
    using Vec3 = Eigen::Vector3d;
    using Rotation = Eigen::Matrix3d;

    inline constexpr double speed_of_light = 299792458.0; // m/s

    // dBm to Watt and back
    double dbm_to_watt(double dbm);
    double watt_to_dbm(double watt);

    // Carrier and link-budget constants shared by all modules
    class SystemParams
    {
    public:
        // Throws InvalidArgument on non-positive values
        SystemParams(double carrier_frequency_hz, double noise_power_w, double total_tx_power_w,
                     std::size_t num_rf_chains_tx, std::size_t num_rf_chains_rx);

        double carrier_frequency_hz() const noexcept { return carrier_frequency_hz_; }
        double wavelength_m() const noexcept { return wavelength_m_; }
        double wavenumber_rad_per_m() const noexcept { return wavenumber_; }
        double noise_power_w() const noexcept { return noise_power_w_; }
        double total_tx_power_w() const noexcept { return total_tx_power_w_; }
        std::size_t num_rf_chains_tx() const noexcept { return num_rf_chains_tx_; }
        std::size_t num_rf_chains_rx() const noexcept { return num_rf_chains_rx_; }

        // Half-wavelength element spacing
        double half_wavelength_m() const noexcept { return 0.5 * wavelength_m_; }

    private:
        double carrier_frequency_hz_;
        double wavelength_m_;
        double wavenumber_;
        double noise_power_w_;
        double total_tx_power_w_;
        std::size_t num_rf_chains_tx_;
        std::size_t num_rf_chains_rx_;
    };

    // Uniform planar array in the local x-y plane, boresight along local +z.
    // Apertures are per-axis lengths: aperture_x = n_x * spacing, aperture_y = n_y * spacing.
    class ArrayGeometry
    {
    public:
        // Throws InvalidArgument if counts or spacing are not positive or the orientation is not a proper rotation
        ArrayGeometry(std::size_t n_x, std::size_t n_y, double spacing_m,
                      const Vec3 &center_position_m = Vec3::Zero(),
                      const Rotation &orientation = Rotation::Identity());

        std::size_t n_x() const noexcept { return n_x_; }
        std::size_t n_y() const noexcept { return n_y_; }
        std::size_t num_elements() const noexcept { return n_x_ * n_y_; }
        double spacing_m() const noexcept { return spacing_m_; }
        double aperture_x_m() const noexcept { return static_cast<double>(n_x_) * spacing_m_; }
        double aperture_y_m() const noexcept { return static_cast<double>(n_y_) * spacing_m_; }
        double aperture_diagonal_m() const noexcept;
        const Vec3 &center_position_m() const noexcept { return center_; }
        const Rotation &orientation() const noexcept { return orientation_; }

        // Flattened element index, i_y runs fastest
        std::size_t flat_index(std::size_t i_x, std::size_t i_y) const noexcept { return i_x * n_y_ + i_y; }

        // Rayleigh distance 2 D^2 / lambda with D the aperture diagonal
        double rayleigh_distance_m(double wavelength_m) const noexcept;

    private:
        std::size_t n_x_;
        std::size_t n_y_;
        double spacing_m_;
        Vec3 center_;
        Rotation orientation_;
    };

    // Element positions in world coordinates, length n_x * n_y, row-major in (i_x, i_y) with i_y fastest.
    // Element (i_x, i_y) sits at center + R * ((i_x - (n_x-1)/2) d, (i_y - (n_y-1)/2) d, 0).
    std::vector<Vec3> element_positions(const ArrayGeometry &geom);

    // Rotation by pi about the local y axis. Applied to a receive array so it faces a transmitter
    // with identity orientation across the z axis.
    Rotation facing_orientation();

    // Transmit array at the origin and a receive array of the same size at (0, 0, distance) facing it
    struct LinkGeometry
    {
        ArrayGeometry tx;
        ArrayGeometry rx;
    };
    LinkGeometry facing_link(std::size_t n_x, std::size_t n_y, double spacing_m, double distance_m);
}

#endif
