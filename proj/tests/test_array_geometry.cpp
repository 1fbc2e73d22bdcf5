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

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wavekit;

TEST_CASE("single element sits at the array center")
{
    const auto pos = element_positions(ArrayGeometry(1, 1, 0.005));
    REQUIRE(pos.size() == 1);
    CHECK(pos[0].norm() == 0.0);
}

TEST_CASE("two elements are offset by half a spacing")
{
    const auto pos = element_positions(ArrayGeometry(2, 1, 0.005));
    REQUIRE(pos.size() == 2);
    CHECK(pos[0].isApprox(Vec3(-0.0025, 0, 0), 1e-15));
    CHECK(pos[1].isApprox(Vec3(0.0025, 0, 0), 1e-15));
}

TEST_CASE("centroid matches the center for an offset, rotated array")
{
    const Vec3 center(0.3, -1.2, 4.0);
    const Rotation rot = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    const auto pos = element_positions(ArrayGeometry(3, 2, 0.005, center, rot));
    REQUIRE(pos.size() == 6);
    Vec3 mean = Vec3::Zero();
    for (const auto &p : pos)
        mean += p;
    mean /= 6.0;
    CHECK((mean - center).norm() < 1e-12);
}

TEST_CASE("ordering is row-major with i_y fastest and neighbours one spacing apart")
{
    const ArrayGeometry g(4, 3, 0.01);
    const auto pos = element_positions(g);
    CHECK(g.flat_index(1, 2) == 5);
    for (std::size_t ix = 0; ix < 4; ++ix)
        for (std::size_t iy = 0; iy + 1 < 3; ++iy)
        {
            const Vec3 step = pos[g.flat_index(ix, iy + 1)] - pos[g.flat_index(ix, iy)];
            CHECK(step.isApprox(Vec3(0, 0.01, 0), 1e-12));
        }
    const Vec3 step_x = pos[g.flat_index(1, 0)] - pos[g.flat_index(0, 0)];
    CHECK(step_x.isApprox(Vec3(0.01, 0, 0), 1e-12));
}

TEST_CASE("apertures, diagonal and Rayleigh distance")
{
    const ArrayGeometry g(129, 9, 0.005);
    CHECK(g.aperture_x_m() == doctest::Approx(0.645));
    CHECK(g.aperture_y_m() == doctest::Approx(0.045));
    const double d = std::hypot(0.645, 0.045);
    CHECK(g.aperture_diagonal_m() == doctest::Approx(d));
    CHECK(g.rayleigh_distance_m(0.01) == doctest::Approx(2 * d * d / 0.01));
}

TEST_CASE("invalid geometries are rejected")
{
    CHECK_THROWS_AS(ArrayGeometry(0, 1, 0.005), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(2, 0, 0.005), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(2, 1, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(2, 1, -1.0), InvalidArgument);
    Rotation reflect = Rotation::Identity();
    reflect(0, 0) = -1.0;
    CHECK_THROWS_AS(ArrayGeometry(2, 1, 0.005, Vec3::Zero(), reflect), InvalidArgument);
    CHECK_THROWS_AS(ArrayGeometry(2, 1, 0.005, Vec3::Zero(), 2.0 * Rotation::Identity()), InvalidArgument);
}

TEST_CASE("dBm conversion")
{
    CHECK(dbm_to_watt(23.0) == doctest::Approx(0.19953).epsilon(1e-4));
    CHECK(dbm_to_watt(-89.0) == doctest::Approx(1.2589e-12).epsilon(1e-4));
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(watt_to_dbm(dbm_to_watt(-17.5)) == doctest::Approx(-17.5));
}

TEST_CASE("system parameters")
{
    const SystemParams p(30e9, 1e-12, 0.2, 4, 4);
    CHECK(p.wavelength_m() == doctest::Approx(speed_of_light / 30e9));
    CHECK(p.wavenumber_rad_per_m() == doctest::Approx(2 * std::numbers::pi / p.wavelength_m()));
    CHECK(p.half_wavelength_m() == doctest::Approx(0.5 * p.wavelength_m()));
    CHECK_THROWS_AS(SystemParams(0.0, 1e-12, 0.2, 4, 4), InvalidArgument);
    CHECK_THROWS_AS(SystemParams(30e9, 0.0, 0.2, 4, 4), InvalidArgument);
    CHECK_THROWS_AS(SystemParams(30e9, 1e-12, -1.0, 4, 4), InvalidArgument);
    CHECK_THROWS_AS(SystemParams(30e9, 1e-12, 0.2, 0, 4), InvalidArgument);
}

TEST_CASE("facing link mirrors the receive array across the gap")
{
    const auto link = facing_link(5, 3, 0.005, 2.0);
    CHECK(link.rx.center_position_m().isApprox(Vec3(0, 0, 2.0)));
    const Rotation r = link.rx.orientation();
    CHECK((r * r.transpose() - Rotation::Identity()).norm() < 1e-14);
    CHECK(r.determinant() == doctest::Approx(1.0));
    // Boresights point at each other
    CHECK((r * Vec3::UnitZ()).isApprox(-Vec3::UnitZ()));
    const auto tx = element_positions(link.tx);
    const auto rx = element_positions(link.rx);
    for (std::size_t i = 0; i < tx.size(); ++i)
        CHECK(rx[i].z() == doctest::Approx(2.0));
}
