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

#include "wavekit/power_allocation.hpp"
#include "wavekit/errors.hpp"
#include "detail/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace wavekit
{
    namespace
    {
        constexpr double inv_ln2 = 1.0 / std::numbers::ln2;

        void check_deadline(const Deadline &deadline)
        {
            if (deadline && std::chrono::steady_clock::now() > *deadline)
                throw TimeBudgetExceeded("solver exceeded its wall-clock budget");
        }

        // Problem in units of the budget (x = p / P_T) with gains scaled by P_T / noise
        struct Scaled
        {
            RVector direct;
            RMatrix cross;
            RMatrix total; // cross + diag(direct)

            explicit Scaled(const CouplingMatrix &c)
            {
                const double s = c.budget_w / c.noise_power_w;
                direct = c.direct_gains * s;
                cross = c.cross_gains * s;
                total = cross;
                total.diagonal() += direct;
            }

            std::size_t size() const { return static_cast<std::size_t>(direct.size()); }

            double objective(const RVector &x) const
            {
                const RVector interf = cross * x;
                double f = 0.0;
                for (Eigen::Index k = 0; k < x.size(); ++k)
                    f += std::log1p(direct[k] * x[k] / (1.0 + interf[k]));
                return f * inv_ln2;
            }
        };

        RVector random_simplex_point(std::mt19937_64 &rng, std::size_t k)
        {
            // Uniform over {x >= 0, sum x <= 1}: normalized exponentials with one slack coordinate
            RVector e(static_cast<Eigen::Index>(k) + 1);
            for (Eigen::Index i = 0; i < e.size(); ++i)
                e[i] = detail::exponential(rng);
            return e.head(static_cast<Eigen::Index>(k)) / e.sum();
        }

        PowerAllocation finish(const CouplingMatrix &coupling, RVector p)
        {
            PowerAllocation out;
            out.slacks = interference(coupling, p);
            out.achieved_capacity_bits = capacity_objective(coupling, p);
            out.powers_w = std::move(p);
            return out;
        }

        // Concave surrogate at the anchor: sum log2(1 + (total x)_k) - lin . x
        struct Surrogate
        {
            const Scaled &prob;
            RVector lin;

            double value(const RVector &x) const
            {
                const RVector y = prob.total * x;
                double s = 0.0;
                for (Eigen::Index k = 0; k < y.size(); ++k)
                    s += std::log1p(y[k]);
                return s * inv_ln2 - lin.dot(x);
            }

            RVector gradient(const RVector &x) const
            {
                const RVector y = prob.total * x;
                const RVector w = (1.0 + y.array()).inverse().matrix() * inv_ln2;
                return prob.total.transpose() * w - lin;
            }
        };

        struct DcRun
        {
            RVector x;
            double objective;
            bool converged;
            std::size_t iterations;
            std::vector<double> trace;
        };

        DcRun run_dc(const Scaled &prob, RVector x, const DcOptions &opts)
        {
            DcRun run{std::move(x), 0.0, false, 0, {}};
            run.objective = prob.objective(run.x);
            if (opts.record_trace)
                run.trace.push_back(run.objective);

            // Spectral (Barzilai-Borwein) trial step carried across surrogates; Armijo backtracking keeps ascent
            double trial = opts.init_step;
            for (std::size_t it = 0; it < opts.max_iter; ++it)
            {
                check_deadline(opts.deadline);

                // Linearize the subtracted sum log2(1 + (cross x)_k) at the anchor
                const RVector interf = prob.cross * run.x;
                const RVector w = (1.0 + interf.array()).inverse().matrix() * inv_ln2;
                Surrogate sur{prob, prob.cross.transpose() * w};

                RVector xs = run.x;
                double sv = sur.value(xs);
                RVector g = sur.gradient(xs);
                for (std::size_t inner = 0; inner < opts.inner_max_iter; ++inner)
                {
                    if ((project_to_simplex(xs + g, 1.0) - xs).norm() < opts.inner_tol)
                        break;

                    double step = trial;
                    bool moved = false;
                    RVector cand;
                    double cv = sv;
                    for (int bt = 0; bt < 60; ++bt, step *= opts.armijo_shrink)
                    {
                        cand = project_to_simplex(xs + step * g, 1.0);
                        cv = sur.value(cand);
                        if (cv >= sv + opts.armijo_c * g.dot(cand - xs))
                        {
                            moved = (cand - xs).lpNorm<Eigen::Infinity>() > 0.0;
                            break;
                        }
                    }
                    if (!moved)
                        break;

                    RVector g_new = sur.gradient(cand);
                    const RVector ds = cand - xs;
                    const RVector dy = g - g_new; // concave: dy . ds >= 0
                    const double sy = ds.dot(dy);
                    trial = sy > 0.0 ? std::clamp(ds.squaredNorm() / sy, 1e-12, 1e12) : opts.init_step;

                    xs = std::move(cand);
                    sv = cv;
                    g = std::move(g_new);
                }

                const double f_new = prob.objective(xs);
                ++run.iterations;
                // The surrogate is a tight lower bound, so f_new >= f up to rounding; never accept a decrease
                if (!(f_new >= run.objective))
                {
                    run.converged = true;
                    break;
                }
                const double gain = f_new - run.objective;
                run.x = std::move(xs);
                run.objective = f_new;
                if (opts.record_trace)
                    run.trace.push_back(run.objective);
                if (gain <= opts.tol_rel * std::max(std::abs(run.objective), 1e-300))
                {
                    run.converged = true;
                    break;
                }
            }
            return run;
        }
    }

    void CouplingMatrix::validate() const
    {
        const auto k = direct_gains.size();
        if (cross_gains.rows() != k || cross_gains.cols() != k)
            throw InvalidArgument("cross gains must be K x K");
        if (!direct_gains.allFinite() || !cross_gains.allFinite() || !std::isfinite(noise_power_w) || !std::isfinite(budget_w))
            throw NonFinite("coupling contains non-finite values");
        if ((direct_gains.array() < 0.0).any() || (cross_gains.array() < 0.0).any())
            throw InvalidArgument("coupling gains must be nonnegative");
        if (!(noise_power_w > 0.0) || !(budget_w > 0.0))
            throw InvalidArgument("noise power and budget must be positive");
        for (Eigen::Index i = 0; i < k; ++i)
            if (cross_gains(i, i) != 0.0)
                throw InvalidArgument("cross gains must have a zero diagonal");
    }

    CouplingMatrix build_coupling(const RMatrix &gains, const StreamAssignment &assign, double noise_power_w, double budget_w)
    {
        const auto k = static_cast<Eigen::Index>(assign.size());
        CouplingMatrix c;
        c.direct_gains.resize(k);
        c.cross_gains = RMatrix::Zero(k, k);
        c.noise_power_w = noise_power_w;
        c.budget_w = budget_w;
        for (const auto &p : assign.pairs)
            if (p.r >= static_cast<std::size_t>(gains.rows()) || p.c >= static_cast<std::size_t>(gains.cols()))
                throw IndexOutOfRange("assignment pair outside the wavenumber channel");
        for (Eigen::Index i = 0; i < k; ++i)
        {
            const auto r = static_cast<Eigen::Index>(assign.pairs[static_cast<std::size_t>(i)].r);
            for (Eigen::Index m = 0; m < k; ++m)
            {
                const auto col = static_cast<Eigen::Index>(assign.pairs[static_cast<std::size_t>(m)].c);
                if (m == i)
                    c.direct_gains[i] = gains(r, col);
                else
                    c.cross_gains(i, m) = gains(r, col);
            }
        }
        return c;
    }

    RVector interference(const CouplingMatrix &coupling, const RVector &p)
    {
        return coupling.cross_gains * p;
    }

    RVector stream_sinr(const CouplingMatrix &coupling, const RVector &p)
    {
        const RVector interf = interference(coupling, p);
        return (coupling.direct_gains.array() * p.array() / (interf.array() + coupling.noise_power_w)).matrix();
    }

    double capacity_objective(const CouplingMatrix &coupling, const RVector &p)
    {
        const RVector sinr = stream_sinr(coupling, p);
        double c = 0.0;
        for (Eigen::Index k = 0; k < sinr.size(); ++k)
            c += std::log1p(sinr[k]);
        return c * inv_ln2;
    }

    double slack_objective(const CouplingMatrix &coupling, const RVector &p, const RVector &u)
    {
        double c = 0.0;
        for (Eigen::Index k = 0; k < p.size(); ++k)
            c += std::log1p(coupling.direct_gains[k] * p[k] / (u[k] + coupling.noise_power_w));
        return c * inv_ln2;
    }

    RVector project_to_simplex(const RVector &x, double budget)
    {
        RVector y = x.cwiseMax(0.0);
        if (y.sum() <= budget)
            return y;

        std::vector<double> u(x.data(), x.data() + x.size());
        std::sort(u.begin(), u.end(), std::greater<>());
        double cumsum = 0.0, theta = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
        {
            cumsum += u[j];
            const double t = (cumsum - budget) / static_cast<double>(j + 1);
            if (u[j] - t > 0.0)
                theta = t;
        }
        return (x.array() - theta).cwiseMax(0.0).matrix();
    }

    RVector waterfill(const RVector &gains, double budget, double noise)
    {
        return waterfill(gains, budget, RVector::Constant(gains.size(), noise));
    }

    RVector waterfill(const RVector &gains, double budget, const RVector &noise)
    {
        const auto k = gains.size();
        if (noise.size() != k)
            throw ShapeMismatch("waterfill: gains and noise differ in length");

        // Floor noise_k / gain_k; dead streams never become active
        std::vector<std::pair<double, Eigen::Index>> floors;
        floors.reserve(static_cast<std::size_t>(k));
        for (Eigen::Index i = 0; i < k; ++i)
            if (gains[i] > 0.0)
                floors.emplace_back(noise[i] / gains[i], i);

        RVector p = RVector::Zero(k);
        if (floors.empty() || !(budget > 0.0))
            return p;
        std::sort(floors.begin(), floors.end());

        // Largest active set whose water level clears its highest floor
        double prefix = 0.0, level = 0.0;
        std::size_t active = 0;
        for (std::size_t n = 1; n <= floors.size(); ++n)
        {
            prefix += floors[n - 1].first;
            const double mu = (budget + prefix) / static_cast<double>(n);
            if (mu > floors[n - 1].first)
            {
                active = n;
                level = mu;
            }
            else
                break;
        }
        for (std::size_t n = 0; n < active; ++n)
            p[floors[n].second] = std::max(0.0, level - floors[n].first);
        return p;
    }

    PowerAllocation evaluate_allocation(const CouplingMatrix &coupling, RVector p)
    {
        coupling.validate();
        return finish(coupling, std::move(p));
    }

    PowerAllocation allocate_equal(const CouplingMatrix &coupling)
    {
        const auto k = static_cast<Eigen::Index>(coupling.size());
        if (k == 0)
            return evaluate_allocation(coupling, RVector());
        return evaluate_allocation(coupling, RVector::Constant(k, coupling.budget_w / static_cast<double>(k)));
    }

    PowerAllocation allocate_waterfill(const CouplingMatrix &coupling)
    {
        return evaluate_allocation(coupling, waterfill(coupling.direct_gains, coupling.budget_w, coupling.noise_power_w));
    }

    PowerAllocation allocate_dc(const CouplingMatrix &coupling, const DcOptions &opts)
    {
        coupling.validate();
        const std::size_t k = coupling.size();
        if (k == 0)
            return finish(coupling, RVector());

        const Scaled prob(coupling);
        std::mt19937_64 rng(opts.seed);

        std::vector<RVector> starts;
        const std::size_t restarts = std::max<std::size_t>(opts.restarts, 1);
        starts.push_back(RVector::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k)));
        if (restarts > 1)
            starts.push_back(waterfill(coupling.direct_gains, coupling.budget_w, coupling.noise_power_w) / coupling.budget_w);
        while (starts.size() < restarts)
            starts.push_back(random_simplex_point(rng, k));
        if (opts.vertex_start)
        {
            // Whole budget on the strongest stream; interior starts stall when interference dominates noise
            Eigen::Index strongest = 0;
            coupling.direct_gains.maxCoeff(&strongest);
            RVector v = RVector::Zero(static_cast<Eigen::Index>(k));
            v[strongest] = 1.0;
            starts.push_back(std::move(v));
        }
        for (const auto &w : opts.warm_starts)
        {
            if (w.size() != static_cast<Eigen::Index>(k))
                throw ShapeMismatch("warm start length differs from the stream count");
            starts.push_back(w / coupling.budget_w);
        }

        PowerAllocation out;
        std::optional<DcRun> best;
        std::size_t total_iter = 0;
        bool all_converged = true;
        for (auto &x0 : starts)
        {
            auto run = run_dc(prob, project_to_simplex(x0, 1.0), opts);
            total_iter += run.iterations;
            all_converged = all_converged && run.converged;
            if (opts.record_trace)
                out.objective_traces.push_back(run.trace);
            if (!best || run.objective > best->objective)
                best = std::move(run);
        }

        PowerAllocation res = finish(coupling, best->x * coupling.budget_w);
        res.converged = all_converged;
        res.iterations = total_iter;
        res.objective_traces = std::move(out.objective_traces);
        return res;
    }

    PowerAllocation allocate_iwf(const CouplingMatrix &coupling, const IwfOptions &opts)
    {
        coupling.validate();
        const auto k = static_cast<Eigen::Index>(coupling.size());
        if (k == 0)
            return finish(coupling, RVector());

        RVector p = RVector::Constant(k, coupling.budget_w / static_cast<double>(k));
        RVector best_p = p;
        double best_f = capacity_objective(coupling, p);
        bool converged = false;
        std::size_t sweeps = 0;

        for (; sweeps < opts.max_sweeps && !converged;)
        {
            check_deadline(opts.deadline);
            const RVector noise = (interference(coupling, p).array() + coupling.noise_power_w).matrix();
            RVector next = waterfill(coupling.direct_gains, coupling.budget_w, noise);
            // Sum-power rescale; waterfill already spends the budget unless every stream is dead
            const double total = next.sum();
            if (total > 0.0)
                next *= coupling.budget_w / total;

            ++sweeps;
            converged = (next - p).lpNorm<Eigen::Infinity>() < opts.tol * coupling.budget_w;
            p = std::move(next);
            const double f = capacity_objective(coupling, p);
            if (f > best_f)
            {
                best_f = f;
                best_p = p;
            }
        }

        PowerAllocation out = finish(coupling, best_p);
        out.converged = converged;
        out.iterations = sweeps;
        return out;
    }

    PowerAllocation allocate_pso(const CouplingMatrix &coupling, const PsoOptions &opts)
    {
        coupling.validate();
        const std::size_t k = coupling.size();
        if (k == 0)
            return finish(coupling, RVector());
        if (opts.particles == 0)
            throw InvalidArgument("PSO needs at least one particle");

        const Scaled prob(coupling);
        std::mt19937_64 rng(opts.seed);
        const auto dim = static_cast<Eigen::Index>(k);

        struct Particle
        {
            RVector x, v, best_x;
            double best_f;
        };
        std::vector<Particle> swarm(opts.particles);
        std::size_t g = 0;
        for (std::size_t i = 0; i < swarm.size(); ++i)
        {
            auto &pt = swarm[i];
            pt.x = random_simplex_point(rng, k);
            pt.v = 0.5 * (random_simplex_point(rng, k) - pt.x);
            pt.best_x = pt.x;
            pt.best_f = prob.objective(pt.x);
            if (pt.best_f > swarm[g].best_f || i == 0)
                g = i;
        }
        RVector gbest = swarm[g].best_x;
        double gbest_f = swarm[g].best_f;

        for (std::size_t it = 0; it < opts.iterations; ++it)
        {
            check_deadline(opts.deadline);
            for (auto &pt : swarm)
            {
                for (Eigen::Index d = 0; d < dim; ++d)
                {
                    const double r1 = detail::uniform01(rng);
                    const double r2 = detail::uniform01(rng);
                    double v = opts.inertia * pt.v[d] + opts.cognitive * r1 * (pt.best_x[d] - pt.x[d]) +
                               opts.social * r2 * (gbest[d] - pt.x[d]);
                    pt.v[d] = std::clamp(v, -1.0, 1.0);
                }
                pt.x = project_to_simplex(pt.x + pt.v, 1.0);
                const double f = prob.objective(pt.x);
                if (f > pt.best_f)
                {
                    pt.best_f = f;
                    pt.best_x = pt.x;
                    if (f > gbest_f)
                    {
                        gbest_f = f;
                        gbest = pt.x;
                    }
                }
            }
        }

        PowerAllocation out = finish(coupling, gbest * coupling.budget_w);
        out.iterations = opts.iterations;
        return out;
    }
}
