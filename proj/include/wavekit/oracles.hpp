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

#ifndef WAVEKIT_ORACLES_H
#define WAVEKIT_ORACLES_H

#include "wavekit/power_allocation.hpp"

#include <cstdint>
#include <random>
#include <string>

// Brute-force references that share no code with the solvers they check
namespace wavekit::oracle
{
    // Largest sum of gains over all one-to-one matchings that cover the smaller dimension
    double brute_force_assignment(const RMatrix &gains);

    // sum_k log2(1 + a_k p_k / (sum_{m != k} b_km p_m + noise)), evaluated term by term
    double capacity(const CouplingMatrix &coupling, const RVector &p);

    struct GridOptimum
    {
        RVector powers_w;
        double objective = 0.0;
    };

    // Exhaustive search over p = budget * (i_1, ..., i_K) / steps with sum i_k <= steps; K must be 2 or 3
    GridOptimum grid_search_allocation(const CouplingMatrix &coupling, std::size_t steps);

    // Integer-valued gains in [0, 99]; many ties
    RMatrix random_integer_gains(std::mt19937_64 &rng, std::size_t rows, std::size_t cols);

    // Unit noise and budget; direct SNRs spread over 0..40 dB, cross gains 30 dB below to 10 dB above
    CouplingMatrix random_coupling(std::mt19937_64 &rng, std::size_t k);

    struct SuiteReport
    {
        std::string name;
        std::size_t checked = 0;
        std::size_t passed = 0;
        double worst = 0.0; // largest observed discrepancy
        bool ok() const noexcept { return checked > 0 && passed == checked; }
    };

    // select_hungarian against brute_force_assignment on square and rectangular matrices, min dimension <= 7
    SuiteReport assignment_suite(std::size_t count, std::uint64_t seed);

    // allocate_dc against grid_search_allocation; passes when |C_dc - C_grid| <= tol * C_grid
    SuiteReport allocation_suite(std::size_t k, std::size_t count, std::size_t steps, double tol, std::uint64_t seed);
}

#endif
