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

#pragma once

#include "mmfb/experiment_config.hpp"
#include "mmfb/feedback.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mmfb
{

/// One (scheme, SNR) cell of a rate sweep.
struct RateRow
{
    std::string scheme;
    double snr_db = 0.0;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    OverheadBits feedback;
};

/// One (scheme, SNR) cell of a BER sweep; counts are summed over trials and
/// stderr is the standard error of the per-trial BER.
struct BerRow
{
    std::string scheme;
    double snr_db = 0.0;
    double ber = 0.0;
    double stderr_ber = 0.0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_sent = 0;
    OverheadBits feedback;
};

struct BeamPatternTable
{
    std::vector<double> angles;
    std::vector<std::size_t> gammas;
    std::vector<std::vector<double>> gains;   // one column per gamma
    AngleInterval sub_sector;                 // sub-sector covered by the element
};

struct OverheadRow
{
    std::string scheme;
    std::string parameter;
    OverheadBits bits;
};

/// Nominal feedback of one scheme under the configured codebooks.
OverheadBits scheme_feedback_bits(const SchemeSpec &scheme, std::size_t streams);

/// Monte-Carlo sweeps. Trial t draws its channel from sub-stream (seed, t);
/// all schemes see the same channels, and the BER sweep additionally shares
/// symbol and noise streams across schemes. Per-trial results are reduced in
/// trial order, so the output does not depend on cfg.workers.
std::vector<RateRow> run_rate_sweep(const ExperimentConfig &cfg);
std::vector<BerRow> run_ber_sweep(const ExperimentConfig &cfg);
BeamPatternTable run_beam_pattern(const ExperimentConfig &cfg);
std::vector<OverheadRow> run_overhead_table(const ExperimentConfig &cfg);

/// CSV writers. Every table starts with '#' comment lines carrying the tool
/// name, the seed and the fully resolved config as one-line JSON.
void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<RateRow> &rows);
void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<BerRow> &rows);
void write_csv(std::ostream &os, const ExperimentConfig &cfg, const BeamPatternTable &table);
void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<OverheadRow> &rows);

/// Human-readable scheme x SNR summary.
void write_summary(std::ostream &os, const std::vector<RateRow> &rows);
void write_summary(std::ostream &os, const std::vector<BerRow> &rows);

/// Curve of one scheme, ordered as in the SNR grid.
std::vector<double> rate_curve(const std::vector<RateRow> &rows, const std::string &scheme);
std::vector<double> ber_curve(const std::vector<BerRow> &rows, const std::string &scheme);

/// SNR at which a sampled curve first crosses `target`, by linear
/// interpolation between grid points (on log10 of the values when
/// log_scale is set). Returns nullopt if the curve never crosses.
std::optional<double> crossing_snr_db(const std::vector<double> &snr_db, const std::vector<double> &values,
                                      double target, bool log_scale);

} // namespace mmfb
