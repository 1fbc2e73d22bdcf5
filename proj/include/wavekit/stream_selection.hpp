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

#ifndef WAVEKIT_STREAM_SELECTION_H
#define WAVEKIT_STREAM_SELECTION_H

#include "wavekit/wavenumber.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace wavekit
{
    using RMatrix = Eigen::MatrixXd;
    using RVector = Eigen::VectorXd;

    struct StreamPair
    {
        std::size_t r = 0; // receive codeword (row of H_a)
        std::size_t c = 0; // transmit codeword (column of H_a)

        auto operator<=>(const StreamPair &) const = default;
    };

    // One-to-one selection of (row, column) pairs, sorted by row.
    // objective_value is the summed gain of the selected entries.
    struct StreamAssignment
    {
        std::vector<StreamPair> pairs;
        double objective_value = 0.0;

        std::size_t size() const noexcept { return pairs.size(); }
    };

    // Entrywise |H_a|^2
    RMatrix gain_matrix(const WavenumberChannel &h_a);
    RMatrix gain_matrix(const CMatrix &h_a);

    // Exact maximum-weight assignment of size min(rows, cols) (shortest augmenting path with potentials, O(K^2 max(R, C))).
    // Among equal-weight optima the row-by-row scan keeps the first column reached, so the result is deterministic.
    // Throws InvalidArgument on negative or non-finite gains.
    StreamAssignment select_hungarian(const RMatrix &gains);

    // Largest remaining entry first, striking its row and column. Ties go to the smallest (row, column).
    StreamAssignment select_greedy(const RMatrix &gains);

    // Keeps the max_streams pairs with the largest gain (index order on ties)
    StreamAssignment truncate_assignment(const StreamAssignment &assign, const RMatrix &gains, std::size_t max_streams);

    // Sum of gains over the pairs, recomputed from scratch
    double assignment_objective(const RMatrix &gains, const StreamAssignment &assign);
}

#endif
