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

#include "wavekit/errors.hpp"
#include "wavekit/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace wavekit;

namespace
{
    SystemParams unit_params(double power, double noise, std::size_t rf = 1024)
    {
        return SystemParams(30e9, noise, power, rf, rf);
    }

    ChannelMatrix small_channel(const CMatrix &m)
    {
        const ArrayGeometry tx(static_cast<std::size_t>(m.cols()), 1, 0.005);
        const ArrayGeometry rx(static_cast<std::size_t>(m.rows()), 1, 0.005, Vec3(0, 0, 1), facing_orientation());
        return ChannelMatrix(m, tx, rx);
    }

    ChannelMatrix random_channel(std::uint64_t seed, std::size_t nx, std::size_t ny, double distance, const SystemParams &p)
    {
        const auto link = facing_link(nx, ny, p.half_wavelength_m(), distance);
        ChannelConfig cfg;
        cfg.rng_seed = seed;
        return synthesize_channel(cfg, link.tx, link.rx, p);
    }

    const SystemParams paper_params(30e9, dbm_to_watt(-89.0), dbm_to_watt(23.0), 4096, 4096);
}

TEST_CASE("scheme names round trip")
{
    for (Scheme s : {Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO, Scheme::SVD_BOUND, Scheme::SPATIAL_DIVISION})
        CHECK(scheme_from_string(to_string(s)) == s);
    CHECK_FALSE(scheme_from_string("WD_XYZ").has_value());
    CHECK(is_wavenumber_scheme(Scheme::WD_PSO));
    CHECK_FALSE(is_wavenumber_scheme(Scheme::SVD_BOUND));
}

TEST_CASE("SVD bound and spatial division on hand channels")
{
    SUBCASE("rank one")
    {
        CVector u(3), v(2);
        u << cdouble(1, 1), cdouble(0, 2), cdouble(-1, 0);
        v << cdouble(0.5, 0), cdouble(0, -1);
        const auto h = small_channel(u * v.adjoint());
        const double lambda = u.squaredNorm() * v.squaredNorm();
        const auto p = unit_params(2.0, 0.5);
        const double expect = std::log2(1.0 + 2.0 * lambda / 0.5);
        CHECK(svd_capacity(h, p).capacity_bits == doctest::Approx(expect).epsilon(1e-12));
        CHECK(svd_capacity(h, p).num_streams == 1);
        CHECK(spatial_division_capacity(h, p).capacity_bits == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("zero channel")
    {
        const auto h = small_channel(CMatrix::Zero(2, 2));
        CHECK(svd_capacity(h, unit_params(1.0, 1.0)).capacity_bits == 0.0);
        CHECK(spatial_division_capacity(h, unit_params(1.0, 1.0)).capacity_bits == 0.0);
    }
    SUBCASE("identity channel shows the Jensen gap")
    {
        const auto h = small_channel(CMatrix::Identity(2, 2));
        const auto p = unit_params(2.0, 1.0);
        const auto svd = svd_capacity(h, p);
        CHECK(svd.capacity_bits == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(svd.num_streams == 2);
        CHECK(svd.per_stream_sinr.isApprox(RVector::Ones(2)));
        CHECK(spatial_division_capacity(h, p).capacity_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
        CHECK(svd_capacity(h, p, 1).capacity_bits == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    }
}

TEST_CASE("SVD factors reproduce the channel")
{
    const auto h = random_channel(3, 8, 2, 1.0, paper_params);
    const auto d = svd_decompose(h.entries());
    const CMatrix back = d.left_vectors * d.singular_values.cast<cdouble>().asDiagonal() * d.right_vectors.adjoint();
    CHECK((back - h.entries()).norm() < 1e-12 * h.entries().norm());
    for (Eigen::Index i = 1; i < d.singular_values.size(); ++i)
        CHECK(d.singular_values[i] <= d.singular_values[i - 1]);
    CHECK(d.rank_effective >= 1);
}

TEST_CASE("wavenumber SINR")
{
    CMatrix ha(2, 2);
    ha << cdouble(2, 0), cdouble(1, 0), cdouble(0, 1), cdouble(1, 0);
    const ArrayGeometry g(2, 1, paper_params.half_wavelength_m());
    const auto sup = enumerate_support(g, paper_params);
    const WavenumberChannel w(ha, sup, sup);
    StreamAssignment diag{{{0, 0}, {1, 1}}, 0.0};

    const RVector s = wd_sinr(w, diag, RVector::Ones(2), 1.0);
    CHECK(s[0] == doctest::Approx(2.0));
    CHECK(s[1] == doctest::Approx(0.5));
    CHECK(wd_sinr(w, diag, RVector::Zero(2), 1.0) == RVector::Zero(2));

    StreamAssignment one{{{0, 1}}, 0.0};
    RVector p1(1);
    p1 << 3.0;
    CHECK(wd_sinr(w, one, p1, 0.5)[0] == doctest::Approx(1.0 * 3.0 / 0.5));

    CHECK_THROWS_AS(wd_sinr(w, StreamAssignment{{{0, 5}}, 0.0}, p1, 1.0), IndexOutOfRange);
    CHECK_THROWS_AS(wd_sinr(w, diag, p1, 1.0), ShapeMismatch);
}

TEST_CASE("hybrid precoder")
{
    const auto h = random_channel(4, 12, 3, 1.0, paper_params);
    const auto dicts = build_dictionaries(h.tx_geom(), h.rx_geom(), paper_params, 1.0);
    const auto sel = wd_select(h, paper_params, dicts, WdOptions{});
    std::mt19937_64 rng(1);
    RVector p(static_cast<Eigen::Index>(sel.assignment.size()));
    for (auto &v : p)
        v = std::uniform_real_distribution<double>(0, 1)(rng);
    const auto hp = assemble_hybrid(dicts.tx, dicts.rx, sel.assignment, p);

    const double n_t = static_cast<double>(h.tx_geom().num_elements());
    CHECK((hp.analog_tx.cwiseAbs().array() - 1.0 / std::sqrt(n_t)).abs().maxCoeff() < 1e-15);
    CHECK((hp.analog_tx * hp.digital_tx).squaredNorm() == doctest::Approx(p.sum()).epsilon(1e-12));
    CHECK(keystone_error(hp, h, sel.h_a, sel.assignment) < 1e-10 * sel.h_a.entries().cwiseAbs().maxCoeff());

    const SystemParams few(30e9, 1e-12, 0.2, 2, 2);
    CHECK_THROWS_AS(assemble_hybrid(dicts.tx, dicts.rx, sel.assignment, p, few), RfChainLimit);
    CHECK_THROWS_AS(wd_select(h, few, dicts, WdOptions{}), RfChainLimit);
    WdOptions capped;
    capped.max_streams = 2;
    CHECK(wd_select(h, few, dicts, capped).assignment.size() == 2);
}

TEST_CASE("zero channel gives zero wavenumber capacity")
{
    const auto link = facing_link(4, 1, paper_params.half_wavelength_m(), 1.0);
    const ChannelMatrix h(CMatrix::Zero(4, 4), link.tx, link.rx);
    for (Scheme s : {Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO})
    {
        const auto rep = wd_capacity_report(h, paper_params, 1.0, s);
        CHECK(rep.capacity_bits == 0.0);
        CHECK(rep.per_stream_sinr.cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("far-field wavenumber capacity stays below the SVD bound")
{
    const auto link = facing_link(16, 1, paper_params.half_wavelength_m(), 200.0);
    const auto h = synthesize_los(link.tx, link.rx, paper_params, cdouble(1.0, 0.0));
    const double svd = svd_capacity(h, paper_params).capacity_bits;
    for (Scheme s : {Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO})
        CHECK(wd_capacity_report(h, paper_params, 1.0, s).capacity_bits <= svd + 1e-9);
}

TEST_CASE("orderings on random channels")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed)
    {
        const auto h = random_channel(seed, 8 + 4 * seed, 1 + seed % 3, 0.5 + seed, paper_params);
        const double svd = svd_capacity(h, paper_params).capacity_bits;
        const double sd = spatial_division_capacity(h, paper_params).capacity_bits;
        CHECK(sd <= svd + 1e-9);
        WdOptions opts;
        opts.verify_keystone = true;
        for (Scheme s : {Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO})
        {
            opts.allocator = s;
            const auto res = wd_pipeline(h, paper_params, opts);
            CHECK(res.report.capacity_bits <= svd + 1e-9);
            CHECK(res.report.capacity_bits == doctest::Approx(res.allocation.achieved_capacity_bits).epsilon(1e-12));
            CHECK(res.report.metadata.n_x == 8 + 4 * seed);
        }
    }
}

TEST_CASE("near field at 1 m: wavenumber DC beats spatial division")
{
    const auto h = random_channel(0, 64, 1, 1.0, paper_params);
    const double wd = wd_capacity_report(h, paper_params, 1.0, Scheme::WD_DC).capacity_bits;
    const double sd = spatial_division_capacity(h, paper_params).capacity_bits;
    MESSAGE("WD_DC " << wd << " bits, spatial division " << sd << " bits");
    CHECK(wd > sd);
}
