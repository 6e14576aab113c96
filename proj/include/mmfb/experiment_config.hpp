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

#include "mmfb/channel.hpp"
#include "mmfb/feedback.hpp"
#include "mmfb/precoding.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmfb
{

/// Invalid experiment configuration; the message names the offending key.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class SchemeKind
{
    optimal,     // SVD precoder from perfect CSI (upper bound)
    proposed,    // OMP over the (multi-beam) basis, fed back as (phi*, G*)
    sparse,      // spatially sparse precoding with Q RF chains
    multilevel   // K strongest quantized paths fed back, SVD at the transmitter
};

struct SchemeSpec
{
    SchemeKind kind = SchemeKind::optimal;
    std::size_t k = 8;                 // K for proposed/multilevel, Q for sparse
    std::size_t gamma = 1;
    std::size_t angle_codebook_size = 256;
    ComplexCodebook coefficients = ComplexCodebook::ideal();
    CombiningStructure structure = CombiningStructure::general;
    bool unitary_baseband = false;     // sparse only
    std::string label;                 // defaults to a name built from the parameters

    std::string name() const;
};

struct BeamPatternConfig
{
    std::vector<std::size_t> gammas{1, 2, 4};
    std::size_t grid_size = 2048;
    std::size_t angle_codebook_size = 16;
    AngleInterval sector{-std::numbers::pi / 6.0, std::numbers::pi / 6.0};
    double center_angle = 0.0;
};

struct OverheadTableConfig
{
    std::size_t rf_chains = 8;
    std::vector<std::size_t> k_values{6, 8, 16};
    std::size_t angle_codebook_size = 256;
    std::size_t coeff_codebook_size = 256;
};

struct ExperimentConfig
{
    ChannelConfig channel;
    std::size_t streams = 4;
    AllocationMode allocation = AllocationMode::unitary;
    std::vector<SchemeSpec> schemes;
    std::vector<double> snr_db_grid;
    std::size_t trials = 200;
    std::size_t symbols_per_trial = 1000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    BeamPatternConfig beam_pattern;
    OverheadTableConfig overhead;
};

/// The reference setup: M = 128, N = 16, S = 4, L = 12, J = 20, d = lambda / 2,
/// 90 degree transmit and 360 degree receive sectors, |C_phi| = 2^8, ideal
/// amplitudes, gamma = 1, schemes optimal / proposed K in {6, 8, 16} /
/// sparse Q = 8 / multilevel K = 8, SNR -20 ... 10 dB in 2.5 dB steps.
ExperimentConfig default_config();

/// Throws ConfigError naming the first invalid field.
void validate(const ExperimentConfig &cfg);

nlohmann::json to_json(const ExperimentConfig &cfg);

/// Missing keys keep their default_config() value. Throws ConfigError on
/// unknown keys, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json &j);

nlohmann::json load_json_file(const std::string &path);

/// Applies "dotted.key=value" to a config tree. The value is parsed as JSON
/// when possible and taken as a plain string otherwise.
void apply_override(nlohmann::json &tree, const std::string &assignment);

} // namespace mmfb
