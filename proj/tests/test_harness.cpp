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
#include "wavekit/harness.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace wavekit;
using nlohmann::json;

namespace
{
    json tiny_doc()
    {
        return json::parse(R"({
            "sweep": {"kind": "array_size", "values": [4, 6]},
            "fixed": {"distance_m": 1.0},
            "n_y": 2,
            "schemes": ["SVD_BOUND", "SPATIAL_DIVISION", "WD_DC", "WD_IWF"],
            "seeds": [3, 4, 5],
            "solver": {"dc": {"restarts": 3}},
            "output_path": "tiny"
        })");
    }

    std::string config_error_field(const json &doc)
    {
        try
        {
            (void)parse_config(doc);
        }
        catch (const ConfigError &e)
        {
            return e.field();
        }
        return "<no error>";
    }

    std::string strip_duration(const std::string &csv)
    {
        std::istringstream in(csv);
        std::ostringstream out;
        for (std::string line; std::getline(in, line);)
            out << line.substr(0, line.rfind(',')) << '\n';
        return out.str();
    }

    struct EnvGuard
    {
        explicit EnvGuard(const char *value) { setenv("WAVEKIT_THREADS", value, 1); }
        ~EnvGuard() { unsetenv("WAVEKIT_THREADS"); }
    };
}

TEST_CASE("default config mirrors the paper's set-up")
{
    const auto cfg = default_config();
    CHECK(cfg.carrier_frequency_hz == 30e9);
    CHECK(cfg.channel.num_scatterers == 2);
    CHECK(cfg.n_y == std::vector<std::size_t>{9});
    CHECK(cfg.sweep_values.back() == 129.0);
    CHECK(cfg.total_tx_power_dbm == 23.0);
    CHECK(cfg.noise_power_dbm == -89.0);
    CHECK(cfg.seeds.size() >= 20);
    CHECK(cfg.schemes.size() == 6);
}

TEST_CASE("shipped configs parse and the default file equals default_config")
{
    const std::filesystem::path dir = WAVEKIT_SOURCE_DIR "/configs";
    std::size_t n = 0;
    for (const auto &entry : std::filesystem::directory_iterator(dir))
    {
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_config(entry.path()));
        ++n;
    }
    CHECK(n >= 7);
    const auto from_file = config_to_json(load_config(dir / "default.json"));
    CHECK(from_file == config_to_json(default_config()));
}

TEST_CASE("config round trips through JSON")
{
    const auto cfg = parse_config(tiny_doc());
    CHECK(config_to_json(parse_config(config_to_json(cfg))) == config_to_json(cfg));
    CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4, 5});
    CHECK(cfg.solver.dc.restarts == 3);

    auto doc = tiny_doc();
    doc["seeds"] = json{{"first", 10}, {"count", 3}};
    doc["n_y"] = json::array({1, 3});
    const auto c2 = parse_config(doc);
    CHECK(c2.seeds == std::vector<std::uint64_t>{10, 11, 12});
    CHECK(c2.n_y == std::vector<std::size_t>{1, 3});
}

TEST_CASE("config errors name the offending field")
{
    auto doc = tiny_doc();
    doc["sweep"]["values"] = json::array();
    CHECK(config_error_field(doc) == "sweep.values");

    doc = tiny_doc();
    doc["seeds"] = json::array();
    CHECK(config_error_field(doc) == "seeds");

    doc = tiny_doc();
    doc["schemes"][1] = "WD_MAGIC";
    CHECK(config_error_field(doc) == "schemes[1]");

    doc = tiny_doc();
    doc["solver"]["dc"]["max_iter"] = "many";
    CHECK(config_error_field(doc) == "solver.dc.max_iter");

    doc = tiny_doc();
    doc["solver"]["pso"] = {{"particels", 10}};
    CHECK(config_error_field(doc) == "solver.pso.particels");

    doc = tiny_doc();
    doc["beta"] = 0.5;
    CHECK(config_error_field(doc) == "beta");

    doc = tiny_doc();
    doc["fixed"] = {{"n_x", 4}};
    CHECK(config_error_field(doc) == "fixed.n_x");

    doc = tiny_doc();
    doc["channel"] = {{"scatterer_placement", {{"radius_min_m", -1}}}};
    CHECK(config_error_field(doc) == "channel.scatterer_placement.radius_min_m");

    doc = tiny_doc();
    doc["system"] = {{"carrier_frequency_hz", 0}};
    CHECK(config_error_field(doc) == "system.carrier_frequency_hz");

    doc = tiny_doc();
    doc.erase("sweep");
    CHECK(config_error_field(doc) == "sweep");
}

TEST_CASE("one value, one seed, one scheme gives one data row and one aggregate")
{
    auto doc = tiny_doc();
    doc["sweep"]["values"] = {4};
    doc["seeds"] = {0};
    doc["schemes"] = {"SVD_BOUND"};
    const auto res = run_sweep(parse_config(doc));
    REQUIRE(res.records.size() == 2);
    CHECK_FALSE(res.records[0].aggregate());
    CHECK(res.records[1].aggregate());
    CHECK(res.records[1].capacity_bits == res.records[0].capacity_bits);
    CHECK(res.records[1].capacity_stderr_bits == 0.0);
}

TEST_CASE("sweep ordering, aggregates and CSV layout")
{
    const auto cfg = parse_config(tiny_doc());
    const auto res = run_sweep(cfg);
    // 2 values x 3 seeds x 4 schemes, then 2 x 4 aggregates
    REQUIRE(res.records.size() == 24 + 8);
    CHECK(res.records[0].n_x == 4);
    CHECK(res.records[0].seed == 3u);
    CHECK(res.records[0].scheme == Scheme::SVD_BOUND);
    CHECK(res.records[3].scheme == Scheme::WD_IWF);
    CHECK(res.records[4].seed == 4u);
    CHECK(res.records[12].n_x == 6);
    for (std::size_t i = 0; i < 24; ++i)
        CHECK(res.records[i].status == "ok");

    const auto &agg = res.records[24 + 2]; // n_x = 4, WD_DC
    CHECK(agg.aggregate());
    CHECK(agg.scheme == Scheme::WD_DC);
    double mean = 0.0;
    for (std::size_t s = 0; s < 3; ++s)
        mean += res.records[s * 4 + 2].capacity_bits / 3.0;
    CHECK(agg.capacity_bits == doctest::Approx(mean).epsilon(1e-14));
    CHECK(agg.samples == 3);

    const std::string csv = to_csv(res.records);
    CHECK(csv.rfind(csv_header() + "\n", 0) == 0);
    CHECK(csv.find(",mean,") != std::string::npos);
    std::istringstream in(csv);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line))
    {
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
        ++lines;
    }
    CHECK(lines == 33);

    const json j = to_json(cfg, res);
    CHECK(j["version"].get<std::string>() == version_string());
    CHECK(j["config"] == config_to_json(cfg));
    CHECK(j["records"].size() == 24);
    CHECK(j["aggregates"].size() == 8);
    CHECK(j["capacity_ratio"].size() == 2);
    CHECK(j["records"][2].contains("assignment"));
    CHECK(j["records"][2]["assignment"][0].contains("gain"));
}

TEST_CASE("results do not depend on the worker count")
{
    auto doc = tiny_doc();
    doc["run"] = {{"threads", 4}};
    const auto cfg = parse_config(doc);
    std::string one, four;
    {
        EnvGuard env("1");
        CHECK(worker_count(cfg) == 1);
        one = strip_duration(to_csv(run_sweep(cfg).records));
    }
    {
        EnvGuard env("8");
        CHECK(worker_count(cfg) == 4);
        four = strip_duration(to_csv(run_sweep(cfg).records));
    }
    CHECK(one == four);
    EnvGuard bad("zero");
    CHECK_THROWS_AS(worker_count(cfg), ConfigError);
}

TEST_CASE("per-point failures are recorded, not fatal")
{
    auto doc = tiny_doc();
    doc["system"] = {{"num_rf_chains_tx", 1}};
    const auto res = run_sweep(parse_config(doc));
    for (const auto &r : res.records)
    {
        if (r.aggregate())
            continue;
        if (is_wavenumber_scheme(r.scheme))
        {
            CHECK(r.status == "error");
            CHECK(r.message.find("RF") != std::string::npos);
        }
        else
            CHECK(r.status == "ok");
    }
    const auto &agg = res.records[24 + 2];
    CHECK(agg.status == "error");

    doc = tiny_doc();
    doc["run"] = {{"point_time_budget_s", 1e-9}};
    const auto slow = run_sweep(parse_config(doc));
    CHECK(slow.records[0].status == "timeout");
}

TEST_CASE("outputs land next to the requested stem")
{
    auto doc = tiny_doc();
    doc["report"] = {{"include_supports", true}};
    const auto cfg = parse_config(doc);
    const auto res = run_sweep(cfg);
    REQUIRE(res.supports.size() == 2);
    const auto dir = std::filesystem::temp_directory_path() / "wavekit_harness_test";
    std::filesystem::remove_all(dir);
    const auto csv = write_outputs(cfg, res, dir / "sub" / "tiny");
    CHECK(std::filesystem::exists(csv));
    CHECK(std::filesystem::exists(dir / "sub" / "tiny.json"));
    std::ifstream js(dir / "sub" / "tiny.json");
    const json j = json::parse(js);
    CHECK(j["supports"][0]["tx"].size() > 0);
    std::filesystem::remove_all(dir);
}
