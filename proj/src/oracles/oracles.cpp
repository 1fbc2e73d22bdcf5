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

#include "wavekit/oracles.hpp"

#include "wavekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace wavekit::oracle
{
    namespace
    {
        // Depth-first enumeration of injective maps row -> column (rows <= cols)
        void enumerate(const RMatrix &g, std::size_t row, std::vector<bool> &used, double acc, double &best)
        {
            if (row == static_cast<std::size_t>(g.rows()))
            {
                best = std::max(best, acc);
                return;
            }
            for (Eigen::Index c = 0; c < g.cols(); ++c)
            {
                if (used[static_cast<std::size_t>(c)])
                    continue;
                used[static_cast<std::size_t>(c)] = true;
                enumerate(g, row + 1, used, acc + g(static_cast<Eigen::Index>(row), c), best);
                used[static_cast<std::size_t>(c)] = false;
            }
        }

        double draw(std::mt19937_64 &rng)
        {
            return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        }
    }

    double brute_force_assignment(const RMatrix &gains)
    {
        const RMatrix g = gains.rows() <= gains.cols() ? gains : RMatrix(gains.transpose());
        std::vector<bool> used(static_cast<std::size_t>(g.cols()), false);
        double best = -1.0;
        enumerate(g, 0, used, 0.0, best);
        return best;
    }

    double capacity(const CouplingMatrix &coupling, const RVector &p)
    {
        const Eigen::Index k = p.size();
        double total = 0.0;
        for (Eigen::Index i = 0; i < k; ++i)
        {
            double interf = 0.0;
            for (Eigen::Index m = 0; m < k; ++m)
                if (m != i)
                    interf += coupling.cross_gains(i, m) * p[m];
            total += std::log2(1.0 + coupling.direct_gains[i] * p[i] / (interf + coupling.noise_power_w));
        }
        return total;
    }

    GridOptimum grid_search_allocation(const CouplingMatrix &coupling, std::size_t steps)
    {
        const std::size_t k = coupling.size();
        if (k != 2 && k != 3)
            throw InvalidArgument("grid search supports K = 2 or 3");
        const double h = coupling.budget_w / static_cast<double>(steps);
        GridOptimum best;
        best.objective = -1.0;
        RVector p(static_cast<Eigen::Index>(k));
        const std::size_t top = k == 3 ? steps : 0;
        for (std::size_t i = 0; i <= steps; ++i)
            for (std::size_t j = 0; i + j <= steps; ++j)
                for (std::size_t l = 0; l <= std::min(top, steps - i - j); ++l)
                {
                    p[0] = h * static_cast<double>(i);
                    p[1] = h * static_cast<double>(j);
                    if (k == 3)
                        p[2] = h * static_cast<double>(l);
                    const double f = capacity(coupling, p);
                    if (f > best.objective)
                    {
                        best.objective = f;
                        best.powers_w = p;
                    }
                }
        return best;
    }

    RMatrix random_integer_gains(std::mt19937_64 &rng, std::size_t rows, std::size_t cols)
    {
        RMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index i = 0; i < g.size(); ++i)
            g.data()[i] = std::floor(100.0 * draw(rng));
        return g;
    }

    CouplingMatrix random_coupling(std::mt19937_64 &rng, std::size_t k)
    {
        CouplingMatrix c;
        const auto n = static_cast<Eigen::Index>(k);
        c.direct_gains.resize(n);
        c.cross_gains = RMatrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            c.direct_gains[i] = std::pow(10.0, 4.0 * draw(rng));
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index m = 0; m < n; ++m)
                if (i != m)
                    c.cross_gains(i, m) = c.direct_gains[i] * std::pow(10.0, -3.0 + 4.0 * draw(rng));
        c.noise_power_w = 1.0;
        c.budget_w = 1.0;
        return c;
    }

    SuiteReport assignment_suite(std::size_t count, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        SuiteReport rep{"assignment vs brute force", 0, 0, 0.0};
        for (std::size_t t = 0; t < count; ++t)
        {
            const auto small = 1 + static_cast<std::size_t>(rng() % 7);
            const auto large = small + static_cast<std::size_t>(rng() % 3);
            const bool tall = (rng() & 1u) != 0;
            const RMatrix g = tall ? random_integer_gains(rng, large, small) : random_integer_gains(rng, small, large);
            const double expect = brute_force_assignment(g);
            const double got = select_hungarian(g).objective_value;
            ++rep.checked;
            rep.worst = std::max(rep.worst, std::abs(got - expect));
            if (got == expect)
                ++rep.passed;
        }
        return rep;
    }

    SuiteReport allocation_suite(std::size_t k, std::size_t count, std::size_t steps, double tol, std::uint64_t seed)
    {
        std::mt19937_64 rng(seed);
        SuiteReport rep{"allocation K=" + std::to_string(k) + " vs grid " + std::to_string(steps) + "^" + std::to_string(k), 0, 0, 0.0};
        for (std::size_t t = 0; t < count; ++t)
        {
            const CouplingMatrix c = random_coupling(rng, k);
            const double grid = grid_search_allocation(c, steps).objective;
            const double dc = capacity(c, allocate_dc(c).powers_w);
            const double rel = std::abs(dc - grid) / std::max(grid, 1e-300);
            ++rep.checked;
            rep.worst = std::max(rep.worst, rel);
            if (rel <= tol)
                ++rep.passed;
        }
        return rep;
    }
}
