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

#include "wavekit/harness.hpp"

#include "detail/random.hpp"
#include "wavekit/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#ifndef WAVEKIT_VERSION
#define WAVEKIT_VERSION "0.1.0-unknown"
#endif

namespace wavekit
{
    namespace
    {
        using nlohmann::json;

        std::string join(const std::string &path, const std::string &key)
        {
            return path.empty() ? key : path + "." + key;
        }

        const json &require_object(const json &j, const std::string &path)
        {
            if (!j.is_object())
                throw ConfigError(path, "expected an object");
            return j;
        }

        void reject_unknown(const json &obj, const std::string &path, std::initializer_list<const char *> allowed)
        {
            for (const auto &[key, value] : obj.items())
            {
                (void)value;
                if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
                    throw ConfigError(join(path, key), "unknown field");
            }
        }

        double as_number(const json &j, const std::string &path)
        {
            if (!j.is_number())
                throw ConfigError(path, "expected a number");
            const double v = j.get<double>();
            if (!std::isfinite(v))
                throw ConfigError(path, "must be finite");
            return v;
        }

        double as_positive(const json &j, const std::string &path)
        {
            const double v = as_number(j, path);
            if (!(v > 0.0))
                throw ConfigError(path, "must be positive");
            return v;
        }

        std::uint64_t as_unsigned(const json &j, const std::string &path)
        {
            if (j.is_number_unsigned())
                return j.get<std::uint64_t>();
            if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
                return static_cast<std::uint64_t>(j.get<std::int64_t>());
            throw ConfigError(path, "expected a nonnegative integer");
        }

        std::size_t as_count(const json &j, const std::string &path)
        {
            const auto v = as_unsigned(j, path);
            if (v == 0)
                throw ConfigError(path, "must be at least 1");
            return static_cast<std::size_t>(v);
        }

        bool as_bool(const json &j, const std::string &path)
        {
            if (!j.is_boolean())
                throw ConfigError(path, "expected true or false");
            return j.get<bool>();
        }

        template <typename T, typename F>
        void read(const json &obj, const std::string &path, const char *key, T &out, F convert)
        {
            auto it = obj.find(key);
            if (it != obj.end())
                out = convert(*it, join(path, key));
        }

        template <typename T, typename F>
        void read_optional(const json &obj, const std::string &path, const char *key, std::optional<T> &out, F convert)
        {
            auto it = obj.find(key);
            if (it == obj.end() || it->is_null())
                return;
            out = convert(*it, join(path, key));
        }

        std::vector<std::uint64_t> parse_seeds(const json &j, const std::string &path)
        {
            std::vector<std::uint64_t> seeds;
            if (j.is_array())
            {
                for (std::size_t i = 0; i < j.size(); ++i)
                    seeds.push_back(as_unsigned(j[i], path + "[" + std::to_string(i) + "]"));
            }
            else if (j.is_object())
            {
                reject_unknown(j, path, {"first", "count"});
                std::uint64_t first = 0;
                std::size_t count = 0;
                read(j, path, "first", first, as_unsigned);
                if (!j.contains("count"))
                    throw ConfigError(join(path, "count"), "missing");
                count = as_count(j["count"], join(path, "count"));
                for (std::size_t i = 0; i < count; ++i)
                    seeds.push_back(first + i);
            }
            else
                throw ConfigError(path, "expected a list of integers or {first, count}");
            if (seeds.empty())
                throw ConfigError(path, "must not be empty");
            if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
                throw ConfigError(path, "seeds must be distinct");
            return seeds;
        }

        void parse_system(const json &j, const std::string &path, ExperimentConfig &cfg)
        {
            require_object(j, path);
            reject_unknown(j, path, {"carrier_frequency_hz", "total_tx_power_dbm", "noise_power_dbm", "spacing_m",
                                     "num_rf_chains_tx", "num_rf_chains_rx"});
            read(j, path, "carrier_frequency_hz", cfg.carrier_frequency_hz, as_positive);
            read(j, path, "total_tx_power_dbm", cfg.total_tx_power_dbm, as_number);
            read(j, path, "noise_power_dbm", cfg.noise_power_dbm, as_number);
            read_optional(j, path, "spacing_m", cfg.spacing_m, as_positive);
            read_optional(j, path, "num_rf_chains_tx", cfg.num_rf_chains_tx, as_count);
            read_optional(j, path, "num_rf_chains_rx", cfg.num_rf_chains_rx, as_count);
        }

        void parse_channel(const json &j, const std::string &path, ChannelConfig &ch)
        {
            require_object(j, path);
            reject_unknown(j, path, {"los_gain_variance", "nlos_gain_variance", "num_scatterers", "scatterer_placement", "rng_seed"});
            read(j, path, "los_gain_variance", ch.los_gain_variance, as_number);
            read(j, path, "nlos_gain_variance", ch.nlos_gain_variance, as_number);
            read(j, path, "num_scatterers", ch.num_scatterers, [](const json &v, const std::string &p) {
                return static_cast<std::size_t>(as_unsigned(v, p));
            });
            read(j, path, "rng_seed", ch.rng_seed, as_unsigned);
            if (auto it = j.find("scatterer_placement"); it != j.end())
            {
                const std::string sp = join(path, "scatterer_placement");
                require_object(*it, sp);
                reject_unknown(*it, sp, {"radius_min_m", "radius_max_m", "azimuth_min_deg", "azimuth_max_deg",
                                         "elevation_min_deg", "elevation_max_deg"});
                auto &r = ch.scatterer_placement;
                read(*it, sp, "radius_min_m", r.radius_min_m, as_positive);
                read_optional(*it, sp, "radius_max_m", r.radius_max_m, as_positive);
                read(*it, sp, "azimuth_min_deg", r.azimuth_min_deg, as_number);
                read(*it, sp, "azimuth_max_deg", r.azimuth_max_deg, as_number);
                read(*it, sp, "elevation_min_deg", r.elevation_min_deg, as_number);
                read(*it, sp, "elevation_max_deg", r.elevation_max_deg, as_number);
            }
            try
            {
                ch.validate();
            }
            catch (const InvalidArgument &e)
            {
                throw ConfigError(path, e.what());
            }
        }

        void parse_solver(const json &j, const std::string &path, SolverConfig &s)
        {
            require_object(j, path);
            reject_unknown(j, path, {"selection", "max_streams", "dc", "iwf", "pso"});
            if (auto it = j.find("selection"); it != j.end())
            {
                if (*it == "hungarian")
                    s.selection = SelectionMethod::hungarian;
                else if (*it == "greedy")
                    s.selection = SelectionMethod::greedy;
                else
                    throw ConfigError(join(path, "selection"), "expected \"hungarian\" or \"greedy\"");
            }
            read_optional(j, path, "max_streams", s.max_streams, as_count);

            if (auto it = j.find("dc"); it != j.end())
            {
                const std::string p = join(path, "dc");
                require_object(*it, p);
                reject_unknown(*it, p, {"tol_rel", "max_iter", "restarts", "vertex_start", "inner_max_iter", "inner_tol",
                                        "armijo_c", "armijo_shrink", "init_step", "seed"});
                auto &o = s.dc;
                read(*it, p, "tol_rel", o.tol_rel, as_positive);
                read(*it, p, "max_iter", o.max_iter, as_count);
                read(*it, p, "restarts", o.restarts, as_count);
                read(*it, p, "vertex_start", o.vertex_start, as_bool);
                read(*it, p, "inner_max_iter", o.inner_max_iter, as_count);
                read(*it, p, "inner_tol", o.inner_tol, as_positive);
                read(*it, p, "armijo_c", o.armijo_c, as_positive);
                read(*it, p, "armijo_shrink", o.armijo_shrink, as_positive);
                read(*it, p, "init_step", o.init_step, as_positive);
                read(*it, p, "seed", o.seed, as_unsigned);
                if (o.armijo_c >= 1.0)
                    throw ConfigError(join(p, "armijo_c"), "must be below 1");
                if (o.armijo_shrink >= 1.0)
                    throw ConfigError(join(p, "armijo_shrink"), "must be below 1");
            }
            if (auto it = j.find("iwf"); it != j.end())
            {
                const std::string p = join(path, "iwf");
                require_object(*it, p);
                reject_unknown(*it, p, {"max_sweeps", "tol"});
                read(*it, p, "max_sweeps", s.iwf.max_sweeps, as_count);
                read(*it, p, "tol", s.iwf.tol, as_positive);
            }
            if (auto it = j.find("pso"); it != j.end())
            {
                const std::string p = join(path, "pso");
                require_object(*it, p);
                reject_unknown(*it, p, {"particles", "inertia", "cognitive", "social", "iterations", "seed"});
                auto &o = s.pso;
                read(*it, p, "particles", o.particles, as_count);
                read(*it, p, "inertia", o.inertia, as_number);
                read(*it, p, "cognitive", o.cognitive, as_number);
                read(*it, p, "social", o.social, as_number);
                read(*it, p, "iterations", o.iterations, as_count);
                read(*it, p, "seed", o.seed, as_unsigned);
            }
        }

        json optional_json(const auto &v)
        {
            return v ? json(*v) : json(nullptr);
        }

        // One unit of work: a single channel realization evaluated under every scheme
        struct Job
        {
            std::size_t value_index;
            std::size_t ny_index;
            std::size_t seed_index;
        };

        struct PointGeometry
        {
            std::size_t n_x;
            std::size_t n_y;
            double distance_m;
        };

        PointGeometry point_geometry(const ExperimentConfig &cfg, std::size_t value_index, std::size_t ny_index)
        {
            const double v = cfg.sweep_values[value_index];
            if (cfg.sweep == SweepKind::array_size)
                return {static_cast<std::size_t>(v), cfg.n_y[ny_index], cfg.fixed_distance_m};
            return {cfg.fixed_n_x, cfg.n_y[ny_index], v};
        }

        SystemParams system_params(const ExperimentConfig &cfg, std::size_t num_elements)
        {
            return SystemParams(cfg.carrier_frequency_hz, dbm_to_watt(cfg.noise_power_dbm), dbm_to_watt(cfg.total_tx_power_dbm),
                                cfg.num_rf_chains_tx.value_or(num_elements), cfg.num_rf_chains_rx.value_or(num_elements));
        }

        double seconds_since(std::chrono::steady_clock::time_point t0)
        {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }

        std::vector<ResultRecord> run_point(const ExperimentConfig &cfg, const Job &job)
        {
            using clock = std::chrono::steady_clock;
            const auto t_start = clock::now();
            const auto deadline = t_start + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(cfg.point_time_budget_s));
            const PointGeometry pg = point_geometry(cfg, job.value_index, job.ny_index);
            const std::uint64_t seed = cfg.seeds[job.seed_index];

            std::vector<ResultRecord> out;
            out.reserve(cfg.schemes.size());
            for (Scheme s : cfg.schemes)
            {
                ResultRecord r;
                r.scheme = s;
                r.n_x = pg.n_x;
                r.n_y = pg.n_y;
                r.distance_m = pg.distance_m;
                r.seed = seed;
                r.beta = cfg.beta;
                r.status = "pending";
                out.push_back(std::move(r));
            }

            auto fail_pending = [&](const std::string &status, const std::string &message) {
                for (auto &r : out)
                    if (r.status == "pending")
                    {
                        r.status = status;
                        r.message = message;
                    }
            };

            std::optional<SystemParams> params;
            std::optional<ChannelMatrix> h;
            double shared_s = 0.0;
            try
            {
                const auto link = facing_link(pg.n_x, pg.n_y, cfg.spacing_m.value_or(0.5 * speed_of_light / cfg.carrier_frequency_hz), pg.distance_m);
                params.emplace(system_params(cfg, link.tx.num_elements()));
                ChannelConfig ch = cfg.channel;
                ch.rng_seed = detail::mix_seed(cfg.channel.rng_seed, seed);
                h.emplace(synthesize_channel(ch, link.tx, link.rx, *params));
                shared_s = seconds_since(t_start);
            }
            catch (const std::exception &e)
            {
                fail_pending("error", e.what());
                return out;
            }

            WdOptions wd;
            wd.beta = cfg.beta;
            wd.selection = cfg.solver.selection;
            wd.max_streams = cfg.solver.max_streams;
            wd.dc = cfg.solver.dc;
            wd.dc.seed = detail::mix_seed(cfg.solver.dc.seed, seed);
            wd.dc.deadline = deadline;
            wd.iwf = cfg.solver.iwf;
            wd.iwf.deadline = deadline;
            wd.pso = cfg.solver.pso;
            wd.pso.seed = detail::mix_seed(cfg.solver.pso.seed, seed);
            wd.pso.deadline = deadline;

            std::optional<WdSelection> sel;
            std::string sel_error;
            double sel_s = 0.0;
            bool selected_here = false;

            for (auto &rec : out)
            {
                if (rec.status != "pending")
                    continue;
                const auto t0 = clock::now();
                try
                {
                    if (t0 > deadline)
                        throw TimeBudgetExceeded("point exceeded its time budget");

                    CapacityReport rep;
                    if (rec.scheme == Scheme::SVD_BOUND)
                        rep = svd_capacity(*h, *params, cfg.solver.max_streams.value_or(std::numeric_limits<std::size_t>::max()));
                    else if (rec.scheme == Scheme::SPATIAL_DIVISION)
                        rep = spatial_division_capacity(*h, *params);
                    else
                    {
                        if (!sel && sel_error.empty())
                        {
                            try
                            {
                                const auto dicts = build_dictionaries(h->tx_geom(), h->rx_geom(), *params, cfg.beta);
                                sel.emplace(wd_select(*h, *params, dicts, wd));
                            }
                            catch (const TimeBudgetExceeded &)
                            {
                                throw;
                            }
                            catch (const std::exception &e)
                            {
                                sel_error = e.what();
                            }
                            sel_s = seconds_since(t0);
                            selected_here = true;
                        }
                        if (!sel)
                            throw Error(sel_error);
                        wd.allocator = rec.scheme;
                        rep = wd_allocate(*sel, *params, wd).report;
                        if (cfg.include_assignments)
                            for (const auto &pr : sel->assignment.pairs)
                                rec.assignment.push_back({pr.r, pr.c, sel->gains(static_cast<Eigen::Index>(pr.r), static_cast<Eigen::Index>(pr.c))});
                    }
                    if (!std::isfinite(rep.capacity_bits))
                        throw NonFinite("capacity is not finite");
                    rec.capacity_bits = rep.capacity_bits;
                    rec.num_streams = static_cast<double>(rep.num_streams);
                    rec.status = "ok";
                }
                catch (const TimeBudgetExceeded &e)
                {
                    rec.status = "timeout";
                    rec.message = e.what();
                    fail_pending("timeout", e.what());
                }
                catch (const std::exception &e)
                {
                    rec.status = "error";
                    rec.message = e.what();
                }
                // Channel synthesis is charged to every scheme, wavenumber selection to every WD scheme
                rec.duration_s = seconds_since(t0) + shared_s;
                if (is_wavenumber_scheme(rec.scheme) && !selected_here)
                    rec.duration_s += sel_s;
                selected_here = false;
            }
            return out;
        }

        std::string fmt_real(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string_view sweep_name(SweepKind k)
        {
            return k == SweepKind::array_size ? "array_size" : "distance";
        }
    }

    ExperimentConfig parse_config(const nlohmann::json &doc)
    {
        require_object(doc, "");
        reject_unknown(doc, "", {"sweep", "fixed", "n_y", "schemes", "seeds", "beta", "system", "channel", "solver", "run",
                                 "report", "output_path"});
        ExperimentConfig cfg;

        if (!doc.contains("sweep"))
            throw ConfigError("sweep", "missing");
        const json &sw = require_object(doc["sweep"], "sweep");
        reject_unknown(sw, "sweep", {"kind", "values"});
        if (!sw.contains("kind"))
            throw ConfigError("sweep.kind", "missing");
        if (sw["kind"] == "array_size")
            cfg.sweep = SweepKind::array_size;
        else if (sw["kind"] == "distance")
            cfg.sweep = SweepKind::distance;
        else
            throw ConfigError("sweep.kind", "expected \"array_size\" or \"distance\"");
        if (!sw.contains("values") || !sw["values"].is_array() || sw["values"].empty())
            throw ConfigError("sweep.values", "expected a nonempty list");
        for (std::size_t i = 0; i < sw["values"].size(); ++i)
        {
            const std::string p = "sweep.values[" + std::to_string(i) + "]";
            if (cfg.sweep == SweepKind::array_size)
                cfg.sweep_values.push_back(static_cast<double>(as_count(sw["values"][i], p)));
            else
                cfg.sweep_values.push_back(as_positive(sw["values"][i], p));
        }

        if (!doc.contains("fixed"))
            throw ConfigError("fixed", "missing");
        const json &fx = require_object(doc["fixed"], "fixed");
        if (cfg.sweep == SweepKind::array_size)
        {
            reject_unknown(fx, "fixed", {"distance_m"});
            if (!fx.contains("distance_m"))
                throw ConfigError("fixed.distance_m", "missing");
            cfg.fixed_distance_m = as_positive(fx["distance_m"], "fixed.distance_m");
        }
        else
        {
            reject_unknown(fx, "fixed", {"n_x"});
            if (!fx.contains("n_x"))
                throw ConfigError("fixed.n_x", "missing");
            cfg.fixed_n_x = as_count(fx["n_x"], "fixed.n_x");
        }

        if (!doc.contains("n_y"))
            throw ConfigError("n_y", "missing");
        cfg.n_y.clear();
        if (doc["n_y"].is_array())
        {
            for (std::size_t i = 0; i < doc["n_y"].size(); ++i)
                cfg.n_y.push_back(as_count(doc["n_y"][i], "n_y[" + std::to_string(i) + "]"));
            if (cfg.n_y.empty())
                throw ConfigError("n_y", "must not be empty");
        }
        else
            cfg.n_y.push_back(as_count(doc["n_y"], "n_y"));

        if (!doc.contains("schemes") || !doc["schemes"].is_array() || doc["schemes"].empty())
            throw ConfigError("schemes", "expected a nonempty list");
        for (std::size_t i = 0; i < doc["schemes"].size(); ++i)
        {
            const std::string p = "schemes[" + std::to_string(i) + "]";
            const json &s = doc["schemes"][i];
            if (!s.is_string())
                throw ConfigError(p, "expected a scheme name");
            auto sc = scheme_from_string(s.get<std::string>());
            if (!sc)
                throw ConfigError(p, "unknown scheme \"" + s.get<std::string>() + "\"");
            if (std::find(cfg.schemes.begin(), cfg.schemes.end(), *sc) != cfg.schemes.end())
                throw ConfigError(p, "duplicate scheme");
            cfg.schemes.push_back(*sc);
        }

        if (!doc.contains("seeds"))
            throw ConfigError("seeds", "missing");
        cfg.seeds = parse_seeds(doc["seeds"], "seeds");

        read(doc, "", "beta", cfg.beta, as_number);
        if (!(cfg.beta >= 1.0))
            throw ConfigError("beta", "must be at least 1");

        if (doc.contains("system"))
            parse_system(doc["system"], "system", cfg);
        if (doc.contains("channel"))
            parse_channel(doc["channel"], "channel", cfg.channel);
        if (doc.contains("solver"))
            parse_solver(doc["solver"], "solver", cfg.solver);

        if (doc.contains("run"))
        {
            const json &r = require_object(doc["run"], "run");
            reject_unknown(r, "run", {"point_time_budget_s", "threads"});
            read(r, "run", "point_time_budget_s", cfg.point_time_budget_s, as_positive);
            read_optional(r, "run", "threads", cfg.threads, as_count);
        }
        if (doc.contains("report"))
        {
            const json &r = require_object(doc["report"], "report");
            reject_unknown(r, "report", {"include_assignments", "include_supports"});
            read(r, "report", "include_assignments", cfg.include_assignments, as_bool);
            read(r, "report", "include_supports", cfg.include_supports, as_bool);
        }
        if (doc.contains("output_path"))
        {
            if (!doc["output_path"].is_string() || doc["output_path"].get<std::string>().empty())
                throw ConfigError("output_path", "expected a nonempty string");
            cfg.output_path = doc["output_path"].get<std::string>();
        }

        try
        {
            (void)system_params(cfg, 1);
        }
        catch (const InvalidArgument &e)
        {
            throw ConfigError("system", e.what());
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("", "cannot open config file " + path.string());
        json doc;
        try
        {
            doc = json::parse(in, nullptr, true, true);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("", std::string("malformed config: ") + e.what());
        }
        return parse_config(doc);
    }

    nlohmann::json config_to_json(const ExperimentConfig &cfg)
    {
        json j;
        json values = json::array();
        for (double v : cfg.sweep_values)
        {
            if (cfg.sweep == SweepKind::array_size)
                values.push_back(static_cast<std::uint64_t>(v));
            else
                values.push_back(v);
        }
        j["sweep"] = {{"kind", sweep_name(cfg.sweep)}, {"values", values}};
        if (cfg.sweep == SweepKind::array_size)
            j["fixed"] = {{"distance_m", cfg.fixed_distance_m}};
        else
            j["fixed"] = {{"n_x", cfg.fixed_n_x}};
        j["n_y"] = cfg.n_y.size() == 1 ? json(cfg.n_y.front()) : json(cfg.n_y);
        json schemes = json::array();
        for (Scheme s : cfg.schemes)
            schemes.push_back(std::string(to_string(s)));
        j["schemes"] = schemes;
        j["seeds"] = cfg.seeds;
        j["beta"] = cfg.beta;
        j["system"] = {{"carrier_frequency_hz", cfg.carrier_frequency_hz},
                       {"total_tx_power_dbm", cfg.total_tx_power_dbm},
                       {"noise_power_dbm", cfg.noise_power_dbm},
                       {"spacing_m", optional_json(cfg.spacing_m)},
                       {"num_rf_chains_tx", optional_json(cfg.num_rf_chains_tx)},
                       {"num_rf_chains_rx", optional_json(cfg.num_rf_chains_rx)}};
        const auto &sp = cfg.channel.scatterer_placement;
        j["channel"] = {{"los_gain_variance", cfg.channel.los_gain_variance},
                        {"nlos_gain_variance", cfg.channel.nlos_gain_variance},
                        {"num_scatterers", cfg.channel.num_scatterers},
                        {"rng_seed", cfg.channel.rng_seed},
                        {"scatterer_placement",
                         {{"radius_min_m", sp.radius_min_m},
                          {"radius_max_m", optional_json(sp.radius_max_m)},
                          {"azimuth_min_deg", sp.azimuth_min_deg},
                          {"azimuth_max_deg", sp.azimuth_max_deg},
                          {"elevation_min_deg", sp.elevation_min_deg},
                          {"elevation_max_deg", sp.elevation_max_deg}}}};
        const auto &s = cfg.solver;
        j["solver"] = {{"selection", s.selection == SelectionMethod::greedy ? "greedy" : "hungarian"},
                       {"max_streams", optional_json(s.max_streams)},
                       {"dc",
                        {{"tol_rel", s.dc.tol_rel},
                         {"max_iter", s.dc.max_iter},
                         {"restarts", s.dc.restarts},
                         {"vertex_start", s.dc.vertex_start},
                         {"inner_max_iter", s.dc.inner_max_iter},
                         {"inner_tol", s.dc.inner_tol},
                         {"armijo_c", s.dc.armijo_c},
                         {"armijo_shrink", s.dc.armijo_shrink},
                         {"init_step", s.dc.init_step},
                         {"seed", s.dc.seed}}},
                       {"iwf", {{"max_sweeps", s.iwf.max_sweeps}, {"tol", s.iwf.tol}}},
                       {"pso",
                        {{"particles", s.pso.particles},
                         {"inertia", s.pso.inertia},
                         {"cognitive", s.pso.cognitive},
                         {"social", s.pso.social},
                         {"iterations", s.pso.iterations},
                         {"seed", s.pso.seed}}}};
        j["run"] = {{"point_time_budget_s", cfg.point_time_budget_s}, {"threads", optional_json(cfg.threads)}};
        j["report"] = {{"include_assignments", cfg.include_assignments}, {"include_supports", cfg.include_supports}};
        j["output_path"] = cfg.output_path;
        return j;
    }

    ExperimentConfig default_config()
    {
        ExperimentConfig cfg;
        cfg.sweep = SweepKind::array_size;
        cfg.sweep_values = {16, 32, 48, 64, 80, 96, 112, 129};
        cfg.fixed_distance_m = 1.0;
        cfg.n_y = {9};
        cfg.schemes = {Scheme::SVD_BOUND, Scheme::SPATIAL_DIVISION, Scheme::WD_DC, Scheme::WD_WF, Scheme::WD_IWF, Scheme::WD_PSO};
        for (std::uint64_t s = 0; s < 20; ++s)
            cfg.seeds.push_back(s);
        cfg.output_path = "results/fig2a_full";
        return cfg;
    }

    std::size_t worker_count(const ExperimentConfig &cfg)
    {
        std::size_t n = cfg.threads.value_or(std::max(1u, std::thread::hardware_concurrency()));
        if (const char *env = std::getenv("WAVEKIT_THREADS"); env && *env)
        {
            char *end = nullptr;
            const unsigned long long cap = std::strtoull(env, &end, 10);
            if (*end != '\0' || cap == 0)
                throw ConfigError("WAVEKIT_THREADS", "expected a positive integer");
            n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
        }
        return std::max<std::size_t>(n, 1);
    }

    SweepResult run_sweep(const ExperimentConfig &cfg)
    {
        if (cfg.sweep_values.empty())
            throw ConfigError("sweep.values", "must not be empty");
        if (cfg.seeds.empty())
            throw ConfigError("seeds", "must not be empty");
        if (cfg.schemes.empty())
            throw ConfigError("schemes", "must not be empty");
        if (cfg.n_y.empty())
            throw ConfigError("n_y", "must not be empty");

        std::vector<Job> jobs;
        for (std::size_t v = 0; v < cfg.sweep_values.size(); ++v)
            for (std::size_t y = 0; y < cfg.n_y.size(); ++y)
                for (std::size_t s = 0; s < cfg.seeds.size(); ++s)
                    jobs.push_back({v, y, s});

        std::vector<std::vector<ResultRecord>> slots(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t i = next++; i < jobs.size(); i = next++)
                slots[i] = run_point(cfg, jobs[i]);
        };
        const std::size_t nthreads = std::min(worker_count(cfg), jobs.size());
        if (nthreads <= 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < nthreads; ++t)
                pool.emplace_back(worker);
        }

        SweepResult result;
        for (const auto &slot : slots)
            result.records.insert(result.records.end(), slot.begin(), slot.end());

        // Aggregates per (sweep value, n_y, scheme), in configuration order
        for (std::size_t v = 0; v < cfg.sweep_values.size(); ++v)
            for (std::size_t y = 0; y < cfg.n_y.size(); ++y)
            {
                const PointGeometry pg = point_geometry(cfg, v, y);
                for (std::size_t si = 0; si < cfg.schemes.size(); ++si)
                {
                    ResultRecord agg;
                    agg.scheme = cfg.schemes[si];
                    agg.n_x = pg.n_x;
                    agg.n_y = pg.n_y;
                    agg.distance_m = pg.distance_m;
                    agg.beta = cfg.beta;
                    std::vector<double> caps;
                    double streams = 0.0;
                    for (std::size_t k = 0; k < cfg.seeds.size(); ++k)
                    {
                        const ResultRecord &r = slots[(v * cfg.n_y.size() + y) * cfg.seeds.size() + k][si];
                        agg.duration_s += r.duration_s;
                        if (r.status != "ok")
                            continue;
                        caps.push_back(r.capacity_bits);
                        streams += r.num_streams;
                    }
                    agg.samples = caps.size();
                    if (caps.empty())
                    {
                        agg.status = "error";
                        agg.message = "no successful samples";
                        agg.capacity_bits = std::numeric_limits<double>::quiet_NaN();
                        agg.capacity_stderr_bits = std::numeric_limits<double>::quiet_NaN();
                    }
                    else
                    {
                        const double n = static_cast<double>(caps.size());
                        double mean = 0.0;
                        for (double c : caps)
                            mean += c;
                        mean /= n;
                        double ss = 0.0;
                        for (double c : caps)
                            ss += (c - mean) * (c - mean);
                        agg.capacity_bits = mean;
                        agg.capacity_stderr_bits = caps.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
                        agg.num_streams = streams / n;
                    }
                    result.records.push_back(std::move(agg));
                }
            }

        if (cfg.include_supports)
        {
            result.supports = json::array();
            for (std::size_t v = 0; v < cfg.sweep_values.size(); ++v)
                for (std::size_t y = 0; y < cfg.n_y.size(); ++y)
                {
                    const PointGeometry pg = point_geometry(cfg, v, y);
                    const auto link = facing_link(pg.n_x, pg.n_y, cfg.spacing_m.value_or(0.5 * speed_of_light / cfg.carrier_frequency_hz), pg.distance_m);
                    const auto params = system_params(cfg, link.tx.num_elements());
                    auto indices = [](const WavenumberSupport &sup) {
                        json a = json::array();
                        for (const auto &w : sup.indices())
                            a.push_back({w.l_x, w.l_y});
                        return a;
                    };
                    result.supports.push_back({{"n_x", pg.n_x},
                                               {"n_y", pg.n_y},
                                               {"distance_m", pg.distance_m},
                                               {"tx", indices(enumerate_support(link.tx, params, cfg.beta))},
                                               {"rx", indices(enumerate_support(link.rx, params, cfg.beta))}});
                }
        }
        return result;
    }

    std::string csv_header()
    {
        return "scheme,n_x,n_y,distance_m,seed,beta,num_streams,capacity_bits,capacity_stderr_bits,status,duration_s";
    }

    std::string to_csv(const std::vector<ResultRecord> &records)
    {
        std::ostringstream out;
        out << csv_header() << '\n';
        for (const auto &r : records)
        {
            char dur[40];
            std::snprintf(dur, sizeof dur, "%.6f", r.duration_s);
            out << to_string(r.scheme) << ',' << r.n_x << ',' << r.n_y << ',' << fmt_real(r.distance_m) << ','
                << (r.seed ? std::to_string(*r.seed) : std::string("mean")) << ',' << fmt_real(r.beta) << ','
                << fmt_real(r.num_streams) << ',' << fmt_real(r.capacity_bits) << ',' << fmt_real(r.capacity_stderr_bits) << ','
                << r.status << ',' << dur << '\n';
        }
        return out.str();
    }

    nlohmann::json to_json(const ExperimentConfig &cfg, const SweepResult &result)
    {
        json j;
        j["version"] = version_string();
        j["config"] = config_to_json(cfg);
        json data = json::array();
        json aggregates = json::array();
        // (n_x, n_y, distance) -> scheme -> mean capacity
        std::map<std::tuple<std::size_t, std::size_t, double>, std::map<Scheme, double>> means;
        for (const auto &r : result.records)
        {
            json e = {{"scheme", to_string(r.scheme)},
                      {"n_x", r.n_x},
                      {"n_y", r.n_y},
                      {"distance_m", r.distance_m},
                      {"beta", r.beta},
                      {"num_streams", r.num_streams},
                      {"capacity_bits", std::isfinite(r.capacity_bits) ? json(r.capacity_bits) : json(nullptr)},
                      {"status", r.status},
                      {"duration_s", r.duration_s}};
            if (!r.message.empty())
                e["message"] = r.message;
            if (r.aggregate())
            {
                e["capacity_stderr_bits"] = std::isfinite(r.capacity_stderr_bits) ? json(r.capacity_stderr_bits) : json(nullptr);
                e["samples"] = r.samples;
                aggregates.push_back(e);
                if (r.status == "ok")
                    means[{r.n_x, r.n_y, r.distance_m}][r.scheme] = r.capacity_bits;
            }
            else
            {
                e["seed"] = *r.seed;
                if (cfg.include_assignments && is_wavenumber_scheme(r.scheme))
                {
                    json a = json::array();
                    for (const auto &p : r.assignment)
                        a.push_back({{"r", p.r}, {"c", p.c}, {"gain", p.gain}});
                    e["assignment"] = a;
                }
                data.push_back(e);
            }
        }
        json ratios = json::array();
        for (const auto &[key, m] : means)
        {
            auto wd = m.find(Scheme::WD_DC);
            auto sd = m.find(Scheme::SPATIAL_DIVISION);
            if (wd == m.end() || sd == m.end() || !(wd->second > 0.0) || !(sd->second > 0.0))
                continue;
            ratios.push_back({{"n_x", std::get<0>(key)},
                              {"n_y", std::get<1>(key)},
                              {"distance_m", std::get<2>(key)},
                              {"wd_dc_over_sd_db", 10.0 * std::log10(wd->second / sd->second)}});
        }
        j["records"] = data;
        j["aggregates"] = aggregates;
        j["capacity_ratio"] = ratios;
        if (cfg.include_supports)
            j["supports"] = result.supports;
        return j;
    }

    std::filesystem::path write_outputs(const ExperimentConfig &cfg, const SweepResult &result, const std::filesystem::path &stem)
    {
        if (stem.has_parent_path())
            std::filesystem::create_directories(stem.parent_path());
        std::filesystem::path csv = stem;
        csv += ".csv";
        std::filesystem::path js = stem;
        js += ".json";
        {
            std::ofstream out(csv, std::ios::binary);
            out << to_csv(result.records);
            if (!out)
                throw Error("cannot write " + csv.string());
        }
        {
            std::ofstream out(js, std::ios::binary);
            out << to_json(cfg, result).dump(2) << '\n';
            if (!out)
                throw Error("cannot write " + js.string());
        }
        return csv;
    }

    const char *version_string() noexcept
    {
        return WAVEKIT_VERSION;
    }
}
