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

#include <cstddef>
#include <vector>

namespace mmfb
{

/// Spatially sparse precoding on a fully-connected array with Q RF chains.
struct SparsePrecoderConfig
{
    std::size_t num_rf_chains = 8;  // Q
    AngleCodebook codebook;
    ArrayGeometry tx;
    // Replace F_bb by its polar factor before the final normalization.
    bool unitary_baseband = false;
};

struct SparsePrecoder
{
    ComplexMatrix rf;                    // M x Q, array-response columns
    ComplexMatrix baseband;              // Q x S, ||rf * baseband||_F = 1
    std::vector<std::size_t> angle_indices;

    Precoder precoder() const { return {rf * baseband}; }
};

/// Greedy RF/baseband split of F_opt over the single-beam array-response
/// dictionary. With Q equal to the proposed scheme's K and gamma = 1 this is
/// the same computation as the proposed precoder.
SparsePrecoder sparse_precoder(const Precoder &f_opt, const SparsePrecoderConfig &cfg);
SparsePrecoder sparse_precoder(const Precoder &f_opt, const SparsePrecoderConfig &cfg, const Dictionary &dict);

/// Feedback of the K strongest paths (quantized AoD, AoA and gain).
struct MultilevelCsiConfig
{
    std::size_t num_paths = 16;  // K
    AngleCodebook aod_codebook;
    AngleCodebook aoa_codebook;  // same size as aod_codebook, spans the receive sector
    ComplexCodebook coefficients = ComplexCodebook::ideal();
    ArrayGeometry tx;
    ArrayGeometry rx;
};

/// Builds a config whose AoD and AoA codebooks share |C_phi| = codebook_size.
MultilevelCsiConfig make_multilevel_config(const ChannelConfig &channel, std::size_t num_paths,
                                           std::size_t codebook_size, ComplexCodebook coefficients);

/// Channel estimate rebuilt at the transmitter from the K strongest true
/// paths, with the generating model's sqrt(M N / (L J)) scaling.
/// Throws std::invalid_argument if K is zero or exceeds the path count.
ComplexMatrix multilevel_csi_feedback(const ChannelRealization &ch, const MultilevelCsiConfig &cfg);

} // namespace mmfb
