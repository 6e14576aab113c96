// SPDX-License-Identifier: Apache-2.0
//
// mmfb - feedback-aware hybrid precoding for mmWave massive MIMO
// Copyright (C) 2026 The mmfb Authors
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

#include <catch2/catch_amalgamated.hpp>

#include "mmfb/experiment.hpp"

#include <cmath>
#include <sstream>

using namespace mmfb;
using Catch::Matchers::WithinAbs;

namespace
{

ExperimentConfig small_config()
{
    ExperimentConfig cfg = default_config();
    cfg.trials = 6;
    cfg.symbols_per_trial = 200;
    cfg.snr_db_grid = {-15.0, -5.0, 5.0};
    return cfg;
}

template <typename Rows>
std::string csv(const ExperimentConfig &cfg, const Rows &rows)
{
    std::ostringstream os;
    write_csv(os, cfg, rows);
    return os.str();
}

SchemeSpec proposed(std::size_t k)
{
    SchemeSpec s;
    s.kind = SchemeKind::proposed;
    s.k = k;
    return s;
}

} // namespace

TEST_CASE("config - defaults")
{
    const ExperimentConfig cfg = default_config();
    CHECK(cfg.channel.tx.num_elements == 128);
    CHECK(cfg.channel.rx.num_elements == 16);
    CHECK(cfg.streams == 4);
    CHECK(cfg.channel.num_clusters == 12);
    CHECK(cfg.channel.rays_per_cluster == 20);
    CHECK(cfg.snr_db_grid.size() == 13);
    CHECK(cfg.snr_db_grid.front() == -20.0);
    CHECK(cfg.snr_db_grid.back() == 10.0);
    REQUIRE(cfg.schemes.size() == 6);
    CHECK(cfg.schemes[0].name() == "optimal");
    CHECK(cfg.schemes[1].name() == "proposed_K6_G1_C256");
    CHECK(cfg.schemes[4].name() == "sparse_Q8_C256");
    CHECK(cfg.schemes[5].name() == "multilevel_K8_C256");
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("config - JSON round trip and overrides")
{
    ExperimentConfig cfg = default_config();
    cfg.schemes.push_back(proposed(4));
    cfg.schemes.back().gamma = 2;
    cfg.schemes.back().coefficients = ComplexCodebook::uniform_polar(8, 8);
    cfg.schemes.back().structure = CombiningStructure::selection;
    const nlohmann::json j = to_json(cfg);
    const ExperimentConfig back = config_from_json(j);
    CHECK(to_json(back) == j);

    nlohmann::json tree = j;
    apply_override(tree, "channel.tx_antennas=64");
    apply_override(tree, "seed=17");
    apply_override(tree, "allocation=water_filling");
    apply_override(tree, "snr_db={\"start\":-10,\"stop\":0,\"step\":5}");
    const ExperimentConfig o = config_from_json(tree);
    CHECK(o.channel.tx.num_elements == 64);
    CHECK(o.seed == 17);
    CHECK(o.allocation == AllocationMode::water_filling);
    CHECK(o.snr_db_grid == std::vector<double>{-10.0, -5.0, 0.0});
}

TEST_CASE("config - errors name the field")
{
    auto message = [](const nlohmann::json &j) -> std::string {
        try
        {
            validate(config_from_json(j));
        }
        catch (const ConfigError &e)
        {
            return e.what();
        }
        return {};
    };
    CHECK_THAT(message({{"trials", 0}}), Catch::Matchers::ContainsSubstring("trials"));
    CHECK_THAT(message({{"snr_db", nlohmann::json::array()}}), Catch::Matchers::ContainsSubstring("snr_db"));
    CHECK_THAT(message({{"bogus", 1}}), Catch::Matchers::ContainsSubstring("bogus"));
    CHECK_THAT(message({{"channel", {{"tx_antennas", -3}}}}), Catch::Matchers::ContainsSubstring("channel.tx_antennas"));
    CHECK_THAT(message({{"schemes", {{{"type", "proposed"}, {"K", 300}}}}}), Catch::Matchers::ContainsSubstring("schemes[0]"));
    CHECK_THAT(message({{"schemes", {{{"type", "proposed"}, {"angle_codebook", 100}}}}}),
               Catch::Matchers::ContainsSubstring("angle_codebook"));
    CHECK_THAT(message({{"schemes", {{{"type", "sparse"}, {"Q", 2}}}}}), Catch::Matchers::ContainsSubstring("schemes[0]"));
    CHECK_THAT(message({{"streams", 20}}), Catch::Matchers::ContainsSubstring("streams"));
    nlohmann::json tree = to_json(default_config());
    CHECK_THROWS_AS(apply_override(tree, "no_equals_sign"), ConfigError);
}

TEST_CASE("rate sweep - deterministic across worker counts")
{
    ExperimentConfig cfg = small_config();
    cfg.workers = 1;
    const std::string one = csv(cfg, run_rate_sweep(cfg));
    cfg.workers = 3;
    CHECK(csv(cfg, run_rate_sweep(cfg)) == one);
    cfg.workers = 0;
    CHECK(csv(cfg, run_rate_sweep(cfg)) == one);
}

TEST_CASE("rate sweep - ordering and equivalent schemes")
{
    ExperimentConfig cfg = small_config();
    const auto rows = run_rate_sweep(cfg);
    CHECK(rows.size() == cfg.schemes.size() * cfg.snr_db_grid.size());
    const auto opt = rate_curve(rows, "optimal");
    for (const auto &s : cfg.schemes)
    {
        const auto c = rate_curve(rows, s.name());
        for (std::size_t i = 0; i < c.size(); ++i)
            CHECK(opt[i] >= c[i] - 1e-12);
    }
    const auto k8 = rate_curve(rows, "proposed_K8_G1_C256");
    const auto q8 = rate_curve(rows, "sparse_Q8_C256");
    for (std::size_t i = 0; i < k8.size(); ++i)
        CHECK_THAT(k8[i], WithinAbs(q8[i], 1e-12 * q8[i]));
    for (const auto &r : rows)
        if (r.scheme == "proposed_K16_G1_C256")
            CHECK(r.feedback == OverheadBits{128, 0});
}

TEST_CASE("rate sweep - stderr follows the square-root law")
{
    ExperimentConfig cfg = default_config();
    cfg.schemes = {SchemeSpec{}};
    cfg.snr_db_grid = {0.0};
    cfg.trials = 100;
    const double s1 = run_rate_sweep(cfg)[0].stderr_rate;
    cfg.trials = 200;
    const double s2 = run_rate_sweep(cfg)[0].stderr_rate;
    cfg.trials = 400;
    const double s4 = run_rate_sweep(cfg)[0].stderr_rate;
    CHECK(std::abs(s1 / s2 - std::sqrt(2.0)) <= 0.2 * std::sqrt(2.0));
    CHECK(std::abs(s4 / s1 - 0.5) <= 0.2 * 0.5);
}

TEST_CASE("ber sweep - sentinel, ordering and counts")
{
    ExperimentConfig cfg = small_config();
    cfg.schemes = {SchemeSpec{}, proposed(8), proposed(16)};
    cfg.snr_db_grid = {-10.0, -5.0, 0.0, 100.0};
    cfg.trials = 20;
    const auto rows = run_ber_sweep(cfg);
    for (const auto &r : rows)
    {
        CHECK(r.bits_sent == 20 * 200 * 2 * 4);
        if (r.snr_db == 100.0)
            CHECK(r.ber == 0.0);
    }
    const auto k8 = ber_curve(rows, "proposed_K8_G1_C256");
    const auto k16 = ber_curve(rows, "proposed_K16_G1_C256");
    for (std::size_t i = 0; i < k8.size(); ++i)
        if (k8[i] < 0.1 && k8[i] > 0.0)
            CHECK(k16[i] < k8[i]);

    const std::string serial = csv(cfg, rows);
    cfg.workers = 2;
    CHECK(csv(cfg, run_ber_sweep(cfg)) == serial);
}

TEST_CASE("beam pattern table")
{
    ExperimentConfig cfg = default_config();
    cfg.beam_pattern.grid_size = 512;
    const BeamPatternTable t = run_beam_pattern(cfg);
    CHECK(t.angles.size() == 512);
    REQUIRE(t.gains.size() == 3);
    double peak1 = 0, peak4 = 0;
    for (std::size_t i = 0; i < t.angles.size(); ++i)
    {
        peak1 = std::max(peak1, t.gains[0][i]);
        peak4 = std::max(peak4, t.gains[2][i]);
    }
    CHECK(peak1 > peak4);
    for (const auto &col : t.gains)
    {
        double area = 0.0;
        for (std::size_t i = 1; i < col.size(); ++i)
            area += 0.5 * (t.angles[i] - t.angles[i - 1]) * (col[i] + col[i - 1]);
        CHECK_THAT(area, WithinAbs(1.0, 1e-3));
    }
    std::istringstream in(csv(cfg, t));
    std::string line;
    std::size_t data = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#')
            ++data;
    CHECK(data == 512 + 1);
}

TEST_CASE("overhead table")
{
    const auto rows = run_overhead_table(default_config());
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].bits == OverheadBits{0, 16384});
    CHECK(rows[1].bits == OverheadBits{0, 4096});
    CHECK(rows[2].bits == OverheadBits{64, 256});
    CHECK(rows.back().scheme == "proposed");
    CHECK(rows.back().bits == OverheadBits{128, 512});
    const std::string text = csv(default_config(), rows);
    CHECK(text.rfind("# mmfb", 0) == 0);
    CHECK(text.find("# config: {") != std::string::npos);
    CHECK(text.find("# seed: 1") != std::string::npos);
}

TEST_CASE("crossing_snr_db")
{
    const std::vector<double> snr{0.0, 10.0, 20.0};
    CHECK_THAT(*crossing_snr_db(snr, {1.0, 3.0, 5.0}, 2.0, false), WithinAbs(5.0, 1e-12));
    CHECK_THAT(*crossing_snr_db(snr, {1e-1, 1e-3, 1e-5}, 1e-2, true), WithinAbs(5.0, 1e-12));
    CHECK_FALSE(crossing_snr_db(snr, {1.0, 1.5, 1.8}, 2.0, false).has_value());
    CHECK_THAT(*crossing_snr_db(snr, {1.0, 2.0, 3.0}, 2.0, false), WithinAbs(10.0, 1e-12));
}
