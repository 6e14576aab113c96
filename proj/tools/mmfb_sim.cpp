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

// Simulation front end: rate and BER sweeps, beam patterns and the feedback
// overhead table. Exit codes: 0 ok, 1 bad configuration or arguments,
// 2 numerical failure.

#include "mmfb/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct Options
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> symbols;
    std::optional<std::size_t> workers;
    std::vector<std::string> overrides;
    std::string out;
    bool quiet = false;
};

mmfb::ExperimentConfig resolve(const Options &o)
{
    nlohmann::json tree = mmfb::to_json(mmfb::default_config());
    if (!o.config_path.empty())
        tree = mmfb::load_json_file(o.config_path);
    for (const auto &a : o.overrides)
        mmfb::apply_override(tree, a);
    if (o.seed)
        tree["seed"] = *o.seed;
    if (o.trials)
        tree["trials"] = *o.trials;
    if (o.symbols)
        tree["symbols_per_trial"] = *o.symbols;
    if (o.workers)
        tree["workers"] = *o.workers;
    mmfb::ExperimentConfig cfg = mmfb::config_from_json(tree);
    mmfb::validate(cfg);
    return cfg;
}

template <typename Table>
void emit(const Options &o, const mmfb::ExperimentConfig &cfg, const Table &table)
{
    if (o.out.empty() || o.out == "-")
    {
        mmfb::write_csv(std::cout, cfg, table);
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f)
        throw mmfb::ConfigError("out: cannot open " + o.out);
    mmfb::write_csv(f, cfg, table);
    if (!f)
        throw std::runtime_error("write failed: " + o.out);
}

void add_common(CLI::App *cmd, Options &o)
{
    cmd->add_option("-c,--config", o.config_path, "JSON experiment config");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--trials", o.trials, "channel realizations");
    cmd->add_option("--symbols", o.symbols, "QPSK symbol vectors per trial (ber)");
    cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores");
    cmd->add_option("--set", o.overrides, "override a config key, e.g. channel.tx_antennas=64");
    cmd->add_option("-o,--out", o.out, "CSV output file (default stdout)");
    cmd->add_flag("-q,--quiet", o.quiet, "no summary on stderr");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mmfb_sim: feedback-aware hybrid precoding simulations"};
    app.require_subcommand(1);
    Options o;

    auto *rate = app.add_subcommand("rate", "achievable rate versus SNR");
    auto *ber = app.add_subcommand("ber", "uncoded QPSK BER versus SNR");
    auto *beam = app.add_subcommand("beam-pattern", "normalized beam pattern of one basis element");
    auto *overhead = app.add_subcommand("overhead", "feedback overhead table");
    auto *dump = app.add_subcommand("print-config", "print the resolved config as JSON");
    for (auto *cmd : {rate, ber, beam, overhead, dump})
        add_common(cmd, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        const mmfb::ExperimentConfig cfg = resolve(o);
        if (rate->parsed())
        {
            const auto rows = mmfb::run_rate_sweep(cfg);
            emit(o, cfg, rows);
            if (!o.quiet)
                mmfb::write_summary(std::cerr, rows);
        }
        else if (ber->parsed())
        {
            const auto rows = mmfb::run_ber_sweep(cfg);
            emit(o, cfg, rows);
            if (!o.quiet)
                mmfb::write_summary(std::cerr, rows);
        }
        else if (beam->parsed())
            emit(o, cfg, mmfb::run_beam_pattern(cfg));
        else if (overhead->parsed())
            emit(o, cfg, mmfb::run_overhead_table(cfg));
        else
            std::cout << mmfb::to_json(cfg).dump(2) << '\n';
    }
    catch (const mmfb::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
