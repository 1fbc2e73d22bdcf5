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
#include "wavekit/oracles.hpp"
#include "wavekit/stream_selection.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace wavekit;

namespace
{
    RMatrix mat(std::initializer_list<std::initializer_list<double>> rows)
    {
        RMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
        Eigen::Index i = 0;
        for (const auto &r : rows)
        {
            Eigen::Index j = 0;
            for (double v : r)
                m(i, j++) = v;
            ++i;
        }
        return m;
    }

    // One-to-one, covers the smaller side, sorted by row
    void check_valid(const StreamAssignment &a, const RMatrix &g)
    {
        CHECK(a.size() == static_cast<std::size_t>(std::min(g.rows(), g.cols())));
        std::set<std::size_t> rows, cols;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            rows.insert(a.pairs[i].r);
            cols.insert(a.pairs[i].c);
            if (i > 0)
                CHECK(a.pairs[i - 1].r < a.pairs[i].r);
        }
        CHECK(rows.size() == a.size());
        CHECK(cols.size() == a.size());
    }
}

TEST_CASE("gain matrix is |H_a|^2")
{
    CMatrix h(2, 2);
    h << cdouble(1, 0), cdouble(0, 0), cdouble(0, 0), cdouble(1, 0);
    CHECK(gain_matrix(h) == RMatrix::Identity(2, 2));
    CMatrix e(1, 1);
    e(0, 0) = cdouble(3, 4);
    CHECK(gain_matrix(e)(0, 0) == 25.0);

    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    CMatrix r(3, 3);
    for (Eigen::Index i = 0; i < 9; ++i)
        r.data()[i] = cdouble(n(rng), n(rng));
    const RMatrix g = gain_matrix(r);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            CHECK(std::abs(g(i, j) - (r(i, j).real() * r(i, j).real() + r(i, j).imag() * r(i, j).imag())) < 1e-12);
}

TEST_CASE("hand-sized assignments")
{
    auto a = select_hungarian(mat({{5, 1}, {1, 5}}));
    CHECK(a.pairs == std::vector<StreamPair>{{0, 0}, {1, 1}});
    CHECK(a.objective_value == 10.0);

    a = select_hungarian(mat({{1, 5}, {5, 1}}));
    CHECK(a.pairs == std::vector<StreamPair>{{0, 1}, {1, 0}});
    CHECK(a.objective_value == 10.0);

    a = select_hungarian(mat({{10, 9}, {9, 1}}));
    CHECK(a.objective_value == 18.0);
}

TEST_CASE("hungarian matches exhaustive enumeration")
{
    std::mt19937_64 rng(21);
    SUBCASE("6x6 integer gains")
    {
        for (int t = 0; t < 20; ++t)
        {
            const RMatrix g = oracle::random_integer_gains(rng, 6, 6);
            const auto a = select_hungarian(g);
            check_valid(a, g);
            CHECK(a.objective_value == oracle::brute_force_assignment(g));
        }
    }
    SUBCASE("2x4 and 4x2")
    {
        for (int t = 0; t < 20; ++t)
        {
            const RMatrix g = oracle::random_integer_gains(rng, 2, 4);
            const auto a = select_hungarian(g);
            check_valid(a, g);
            CHECK(a.size() == 2);
            CHECK(a.objective_value == oracle::brute_force_assignment(g));
            const RMatrix gt = g.transpose();
            const auto b = select_hungarian(gt);
            check_valid(b, gt);
            CHECK(b.objective_value == a.objective_value);
        }
    }
    SUBCASE("real-valued gains")
    {
        std::exponential_distribution<double> e;
        for (int t = 0; t < 50; ++t)
        {
            RMatrix g(1 + rng() % 7, 1 + rng() % 7);
            for (Eigen::Index i = 0; i < g.size(); ++i)
                g.data()[i] = e(rng);
            const auto a = select_hungarian(g);
            check_valid(a, g);
            const double ref = oracle::brute_force_assignment(g);
            CHECK(std::abs(a.objective_value - ref) <= 1e-12 * ref);
        }
    }
}

TEST_CASE("ties resolve the same way every time")
{
    const RMatrix g = RMatrix::Constant(4, 5, 2.0);
    const auto a = select_hungarian(g);
    const auto b = select_hungarian(g);
    CHECK(a.pairs == b.pairs);
    CHECK(a.objective_value == 8.0);
}

TEST_CASE("greedy selection")
{
    const RMatrix d = mat({{3, 0, 0}, {0, 7, 0}, {0, 0, 1}});
    CHECK(select_greedy(d).pairs == select_hungarian(d).pairs);

    const auto a = select_greedy(mat({{10, 9}, {9, 1}}));
    CHECK(a.pairs == std::vector<StreamPair>{{0, 0}, {1, 1}});
    CHECK(a.objective_value == 11.0);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t)
    {
        const RMatrix g = oracle::random_integer_gains(rng, 1 + rng() % 8, 1 + rng() % 8);
        const auto gr = select_greedy(g);
        check_valid(gr, g);
        CHECK(gr.objective_value <= select_hungarian(g).objective_value);
    }
}

TEST_CASE("invalid gain matrices")
{
    CHECK_THROWS_AS(select_hungarian(mat({{1, -1}, {0, 1}})), InvalidArgument);
    CHECK_THROWS_AS(select_hungarian(mat({{1, std::nan("")}, {0, 1}})), InvalidArgument);
    CHECK_THROWS_AS(select_greedy(mat({{1, INFINITY}, {0, 1}})), InvalidArgument);
}

TEST_CASE("truncation keeps the strongest pairs")
{
    const RMatrix g = mat({{9, 0, 0}, {0, 1, 0}, {0, 0, 4}});
    const auto full = select_hungarian(g);
    const auto t = truncate_assignment(full, g, 2);
    CHECK(t.pairs == std::vector<StreamPair>{{0, 0}, {2, 2}});
    CHECK(t.objective_value == 13.0);
    CHECK(truncate_assignment(full, g, 10).pairs == full.pairs);
    CHECK(assignment_objective(g, t) == 13.0);
    CHECK_THROWS_AS(assignment_objective(g, StreamAssignment{{{5, 0}}, 0.0}), IndexOutOfRange);
}
