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

#ifndef WAVEKIT_POWER_ALLOCATION_H
#define WAVEKIT_POWER_ALLOCATION_H

#include "wavekit/stream_selection.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

namespace wavekit
{
    using Deadline = std::optional<std::chrono::steady_clock::time_point>;

    // Per-stream power gains of the selected wavenumber pairs.
    //   direct_gains[k]   = |H_a[r_k, c_k]|^2
    //   cross_gains(k, m) = |H_a[r_k, c_m]|^2 for m != k, zero on the diagonal
    struct CouplingMatrix
    {
        RVector direct_gains;
        RMatrix cross_gains;
        double noise_power_w = 1.0;
        double budget_w = 1.0;

        std::size_t size() const noexcept { return static_cast<std::size_t>(direct_gains.size()); }

        // Throws NonFinite for NaN/Inf, InvalidArgument for negative entries, shape errors or a nonzero diagonal
        void validate() const;
    };

    CouplingMatrix build_coupling(const RMatrix &gains, const StreamAssignment &assign, double noise_power_w, double budget_w);

    struct PowerAllocation
    {
        RVector powers_w;
        RVector slacks;                 // interference seen by each stream at powers_w
        double achieved_capacity_bits = 0.0;
        bool converged = true;
        std::size_t iterations = 0;
        // Only filled when requested: true objective after every outer iteration, one list per restart
        std::vector<std::vector<double>> objective_traces;
    };

    // I_k(p) = sum_{m != k} b_{k,m} p_m
    RVector interference(const CouplingMatrix &coupling, const RVector &p);

    // SINR_k = a_k p_k / (I_k(p) + noise)
    RVector stream_sinr(const CouplingMatrix &coupling, const RVector &p);

    // sum_k log2(1 + SINR_k)
    double capacity_objective(const CouplingMatrix &coupling, const RVector &p);

    // Slack form: sum_k log2(1 + a_k p_k / (u_k + noise)). Equals capacity_objective when u = interference(p).
    double slack_objective(const CouplingMatrix &coupling, const RVector &p, const RVector &u);

    // Euclidean projection onto {x >= 0, sum x <= budget}
    RVector project_to_simplex(const RVector &x, double budget);

    // Classical water-filling p_k = max(0, mu - noise_k / gains_k), sum p = budget.
    // Streams with zero gain stay off; all-zero gains give all-zero powers.
    RVector waterfill(const RVector &gains, double budget, double noise);
    RVector waterfill(const RVector &gains, double budget, const RVector &noise);

    // Evaluates a fixed allocation (equal power, plain water-filling, ...) into a PowerAllocation
    PowerAllocation evaluate_allocation(const CouplingMatrix &coupling, RVector p);
    PowerAllocation allocate_equal(const CouplingMatrix &coupling);
    PowerAllocation allocate_waterfill(const CouplingMatrix &coupling); // ignores cross gains

    struct DcOptions
    {
        double tol_rel = 1e-8;            // outer stop on relative objective improvement
        std::size_t max_iter = 500;       // outer iterations per restart
        std::size_t restarts = 8;         // equal-power, water-filling, then seeded random simplex points
        bool vertex_start = true;         // one more start with the whole budget on the strongest stream
        std::size_t inner_max_iter = 20;  // projected-gradient steps per surrogate
        double inner_tol = 1e-10;         // projected-gradient norm
        double armijo_c = 1e-4;
        double armijo_shrink = 0.5;
        double init_step = 1.0;           // first trial step; later trials use the Barzilai-Borwein step
        std::uint64_t seed = 0;
        bool record_trace = false;
        std::vector<RVector> warm_starts; // extra starting allocations in Watts, tried after the standard restarts
        Deadline deadline;
    };

    // Difference-of-concave successive approximation: the subtracted log2(I_k + noise) terms are
    // linearized at the current iterate and the concave surrogate is maximized over the simplex by
    // projected-gradient ascent with Armijo backtracking. The true objective is nondecreasing per iteration.
    PowerAllocation allocate_dc(const CouplingMatrix &coupling, const DcOptions &opts = {});

    struct IwfOptions
    {
        std::size_t max_sweeps = 200;
        double tol = 1e-8; // max-norm change of p / budget
        Deadline deadline;
    };

    // Iterative water-filling: every sweep water-fills the full budget with the current interference
    // treated as fixed noise. Starts from equal power; returns the best iterate seen and flags
    // non-convergence in PowerAllocation::converged.
    PowerAllocation allocate_iwf(const CouplingMatrix &coupling, const IwfOptions &opts = {});

    struct PsoOptions
    {
        std::size_t particles = 50;
        double inertia = 0.72;
        double cognitive = 1.49;
        double social = 1.49;
        std::size_t iterations = 300;
        std::uint64_t seed = 0;
        Deadline deadline;
    };

    // Global-best particle swarm over {p >= 0, sum p <= budget}; positions are projected after every move
    PowerAllocation allocate_pso(const CouplingMatrix &coupling, const PsoOptions &opts = {});
}

#endif
