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

#ifndef WAVEKIT_HARNESS_H
#define WAVEKIT_HARNESS_H

#include "wavekit/metrics.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wavekit
{
    enum class SweepKind
    {
        array_size,
        distance
    };

    struct SolverConfig
    {
        SelectionMethod selection = SelectionMethod::hungarian;
        std::optional<std::size_t> max_streams;
        DcOptions dc;
        IwfOptions iwf;
        PsoOptions pso;
    };

    struct ExperimentConfig
    {
        SweepKind sweep = SweepKind::array_size;
        std::vector<double> sweep_values;      // N_x values or distances in metres
        double fixed_distance_m = 1.0;         // used by array_size sweeps
        std::size_t fixed_n_x = 48;            // used by distance sweeps
        std::vector<std::size_t> n_y{9};       // one sweep per entry
        std::vector<Scheme> schemes;
        std::vector<std::uint64_t> seeds;
        double beta = 1.0;

        double carrier_frequency_hz = 30e9;
        double total_tx_power_dbm = 23.0;
        double noise_power_dbm = -89.0;
        std::optional<double> spacing_m;       // half wavelength when unset
        std::optional<std::size_t> num_rf_chains_tx; // element count when unset
        std::optional<std::size_t> num_rf_chains_rx;

        ChannelConfig channel;
        SolverConfig solver;

        double point_time_budget_s = 120.0;
        std::optional<std::size_t> threads;    // capped by WAVEKIT_THREADS

        bool include_assignments = true;
        bool include_supports = false;

        std::string output_path = "results/experiment";
    };

    // Throws ConfigError carrying the offending field path (e.g. "solver.dc.max_iter")
    ExperimentConfig parse_config(const nlohmann::json &doc);
    ExperimentConfig load_config(const std::filesystem::path &path);
    nlohmann::json config_to_json(const ExperimentConfig &cfg);

    // Full-scale 1 m array-size sweep with the paper's link budget
    ExperimentConfig default_config();

    struct AssignedPair
    {
        std::size_t r = 0;
        std::size_t c = 0;
        double gain = 0.0;
    };

    struct ResultRecord
    {
        Scheme scheme = Scheme::SVD_BOUND;
        std::size_t n_x = 0;
        std::size_t n_y = 0;
        double distance_m = 0.0;
        std::optional<std::uint64_t> seed; // empty for aggregate rows
        double beta = 1.0;
        double num_streams = 0.0;          // mean over seeds on aggregate rows
        double capacity_bits = 0.0;        // mean over seeds on aggregate rows
        double capacity_stderr_bits = 0.0; // zero on data rows
        std::string status = "ok";         // ok, error or timeout; aggregates count ok rows only
        std::string message;
        std::size_t samples = 1;
        double duration_s = 0.0;
        std::vector<AssignedPair> assignment;
        bool aggregate() const noexcept { return !seed.has_value(); }
    };

    struct SweepResult
    {
        std::vector<ResultRecord> records; // data rows per point then aggregate rows per (sweep value, n_y)
        nlohmann::json supports;           // filled when include_supports is set
    };

    // Worker count: cfg.threads (or hardware concurrency) capped by WAVEKIT_THREADS
    std::size_t worker_count(const ExperimentConfig &cfg);

    SweepResult run_sweep(const ExperimentConfig &cfg);

    std::string csv_header();
    std::string to_csv(const std::vector<ResultRecord> &records);
    nlohmann::json to_json(const ExperimentConfig &cfg, const SweepResult &result);

    // Writes <stem>.csv and <stem>.json; returns the CSV path
    std::filesystem::path write_outputs(const ExperimentConfig &cfg, const SweepResult &result,
                                        const std::filesystem::path &stem);

    const char *version_string() noexcept;
}

#endif
