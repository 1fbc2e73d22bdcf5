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

// Command-line driver: run / validate / oracle

#include "wavekit/errors.hpp"
#include "wavekit/harness.hpp"
#include "wavekit/oracles.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_config = 1;
    constexpr int exit_runtime = 2;

    int cmd_run(const std::string &config_path, const std::string &out_dir, const std::optional<std::uint64_t> &seed_override)
    {
        wavekit::ExperimentConfig cfg = wavekit::load_config(config_path);
        if (seed_override)
        {
            // Keeps the seed count, shifts the list to start at the override
            const std::size_t n = cfg.seeds.size();
            cfg.seeds.clear();
            for (std::size_t i = 0; i < n; ++i)
                cfg.seeds.push_back(*seed_override + i);
        }
        std::filesystem::path stem = cfg.output_path;
        if (!out_dir.empty())
            stem = std::filesystem::path(out_dir) / stem.filename();

        std::cerr << "wavekit " << wavekit::version_string() << ": " << cfg.sweep_values.size() * cfg.n_y.size() << " sweep points x "
                  << cfg.seeds.size() << " seeds x " << cfg.schemes.size() << " schemes on " << wavekit::worker_count(cfg)
                  << " workers\n";
        const auto result = wavekit::run_sweep(cfg);
        const auto csv = wavekit::write_outputs(cfg, result, stem);

        std::size_t failed = 0;
        for (const auto &r : result.records)
            if (!r.aggregate() && r.status != "ok")
                ++failed;
        if (failed > 0)
            std::cerr << "warning: " << failed << " point(s) failed; see the status column\n";
        std::cout << csv.string() << '\n';
        return exit_ok;
    }

    int cmd_validate(const std::string &config_path)
    {
        const auto cfg = wavekit::load_config(config_path);
        std::cout << config_path << ": ok (" << cfg.sweep_values.size() * cfg.n_y.size() << " sweep points, " << cfg.seeds.size()
                  << " seeds, " << cfg.schemes.size() << " schemes)\n";
        return exit_ok;
    }

    int cmd_oracle(std::uint64_t seed)
    {
        using namespace wavekit::oracle;
        const SuiteReport suites[] = {
            assignment_suite(200, seed),
            allocation_suite(2, 20, 1000, 1e-3, seed + 1),
            allocation_suite(3, 10, 100, 1e-2, seed + 2),
        };
        bool all = true;
        for (const auto &s : suites)
        {
            std::printf("%-36s %zu/%zu passed (worst discrepancy %.3g) %s\n", s.name.c_str(), s.passed, s.checked, s.worst,
                        s.ok() ? "PASS" : "FAIL");
            all = all && s.ok();
        }
        return all ? exit_ok : exit_runtime;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"wavenumber-domain MIMO capacity experiments"};
    app.set_version_flag("--version", std::string(wavekit::version_string()));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed_override;
    auto *run = app.add_subcommand("run", "run a sweep and write <stem>.csv and <stem>.json");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (default: the config's output_path)");
    run->add_option("--seed-override", seed_override, "first seed; the seed count is kept");

    auto *validate = app.add_subcommand("validate", "schema check only");
    validate->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);

    std::uint64_t oracle_seed = 1;
    auto *oracle = app.add_subcommand("oracle", "brute-force checks of the assignment and allocation solvers");
    oracle->add_option("--seed", oracle_seed, "seed for the random instances");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try
    {
        if (*run)
            return cmd_run(config_path, out_dir, seed_override);
        if (*validate)
            return cmd_validate(config_path);
        return cmd_oracle(oracle_seed);
    }
    catch (const wavekit::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}
