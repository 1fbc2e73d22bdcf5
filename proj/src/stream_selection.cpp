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

#include "wavekit/stream_selection.hpp"
#include "wavekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace wavekit
{
    namespace
    {
        void check_gains(const RMatrix &gains)
        {
            for (Eigen::Index i = 0; i < gains.size(); ++i)
            {
                const double g = gains.data()[i];
                if (!std::isfinite(g))
                    throw InvalidArgument("gain matrix contains non-finite entries");
                if (g < 0.0)
                    throw InvalidArgument("gain matrix contains negative entries");
            }
        }

        // Min-cost assignment of every row of cost (n x m, n <= m) to a distinct column.
        // Returns the column assigned to each row.
        std::vector<std::size_t> min_cost_rows(const RMatrix &cost)
        {
            const auto n = static_cast<std::size_t>(cost.rows());
            const auto m = static_cast<std::size_t>(cost.cols());
            constexpr double inf = std::numeric_limits<double>::infinity();

            // 1-based arrays with a virtual column 0
            std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
            std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
            std::vector<double> minv(m + 1);
            std::vector<char> used(m + 1);

            for (std::size_t i = 1; i <= n; ++i)
            {
                match[0] = i;
                std::size_t j0 = 0;
                std::fill(minv.begin(), minv.end(), inf);
                std::fill(used.begin(), used.end(), 0);
                do
                {
                    used[j0] = 1;
                    const std::size_t i0 = match[j0];
                    double delta = inf;
                    std::size_t j1 = 0;
                    for (std::size_t j = 1; j <= m; ++j)
                    {
                        if (used[j])
                            continue;
                        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                        if (cur < minv[j])
                        {
                            minv[j] = cur;
                            way[j] = j0;
                        }
                        if (minv[j] < delta)
                        {
                            delta = minv[j];
                            j1 = j;
                        }
                    }
                    for (std::size_t j = 0; j <= m; ++j)
                    {
                        if (used[j])
                        {
                            u[match[j]] += delta;
                            v[j] -= delta;
                        }
                        else
                            minv[j] -= delta;
                    }
                    j0 = j1;
                } while (match[j0] != 0);

                do
                {
                    const std::size_t j1 = way[j0];
                    match[j0] = match[j1];
                    j0 = j1;
                } while (j0 != 0);
            }

            std::vector<std::size_t> row_to_col(n, 0);
            for (std::size_t j = 1; j <= m; ++j)
                if (match[j] != 0)
                    row_to_col[match[j] - 1] = j - 1;
            return row_to_col;
        }
    }

    RMatrix gain_matrix(const CMatrix &h_a)
    {
        return h_a.cwiseAbs2();
    }

    RMatrix gain_matrix(const WavenumberChannel &h_a)
    {
        return gain_matrix(h_a.entries());
    }

    double assignment_objective(const RMatrix &gains, const StreamAssignment &assign)
    {
        double s = 0.0;
        for (const auto &p : assign.pairs)
        {
            if (p.r >= static_cast<std::size_t>(gains.rows()) || p.c >= static_cast<std::size_t>(gains.cols()))
                throw IndexOutOfRange("assignment pair outside the gain matrix");
            s += gains(static_cast<Eigen::Index>(p.r), static_cast<Eigen::Index>(p.c));
        }
        return s;
    }

    StreamAssignment select_hungarian(const RMatrix &gains)
    {
        check_gains(gains);
        StreamAssignment out;
        if (gains.size() == 0)
            return out;

        const bool transposed = gains.rows() > gains.cols();
        const RMatrix w = transposed ? RMatrix(gains.transpose()) : gains;
        // Maximize weight == minimize (max - weight); the shift keeps costs nonnegative
        const RMatrix cost = w.maxCoeff() - w.array();

        const auto row_to_col = min_cost_rows(cost);
        out.pairs.reserve(row_to_col.size());
        for (std::size_t i = 0; i < row_to_col.size(); ++i)
            out.pairs.push_back(transposed ? StreamPair{row_to_col[i], i} : StreamPair{i, row_to_col[i]});
        std::sort(out.pairs.begin(), out.pairs.end());
        out.objective_value = assignment_objective(gains, out);
        return out;
    }

    StreamAssignment select_greedy(const RMatrix &gains)
    {
        check_gains(gains);
        StreamAssignment out;
        const auto rows = static_cast<std::size_t>(gains.rows());
        const auto cols = static_cast<std::size_t>(gains.cols());
        const std::size_t k = std::min(rows, cols);
        if (k == 0)
            return out;

        std::vector<std::size_t> order(rows * cols);
        std::iota(order.begin(), order.end(), std::size_t{0});
        // Flat index r * cols + c is lexicographic in (r, c)
        auto at = [&](std::size_t f) { return gains(static_cast<Eigen::Index>(f / cols), static_cast<Eigen::Index>(f % cols)); };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return at(a) > at(b); });

        std::vector<char> row_used(rows, 0), col_used(cols, 0);
        for (const std::size_t f : order)
        {
            const std::size_t r = f / cols, c = f % cols;
            if (row_used[r] || col_used[c])
                continue;
            row_used[r] = col_used[c] = 1;
            out.pairs.push_back({r, c});
            if (out.pairs.size() == k)
                break;
        }
        std::sort(out.pairs.begin(), out.pairs.end());
        out.objective_value = assignment_objective(gains, out);
        return out;
    }

    StreamAssignment truncate_assignment(const StreamAssignment &assign, const RMatrix &gains, std::size_t max_streams)
    {
        if (assign.size() <= max_streams)
            return assign;
        StreamAssignment out = assign;
        auto g = [&](const StreamPair &p) { return gains(static_cast<Eigen::Index>(p.r), static_cast<Eigen::Index>(p.c)); };
        std::stable_sort(out.pairs.begin(), out.pairs.end(), [&](const StreamPair &a, const StreamPair &b) { return g(a) > g(b); });
        out.pairs.resize(max_streams);
        std::sort(out.pairs.begin(), out.pairs.end());
        out.objective_value = assignment_objective(gains, out);
        return out;
    }
}
