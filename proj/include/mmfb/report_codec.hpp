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

#include "mmfb/feedback.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mmfb
{

/// Binary feedback message.
///
/// Layout (multi-byte fields little-endian):
///   u16 K | u8 gamma | u8 flags | u8 S
///   flags bit 0: quantized coefficients, bits 1-2: CombiningStructure
///   quantized only: f64 magnitude scale (not counted as feedback payload)
///   bit-packed payload, MSB first within each byte, zero padded to a byte:
///     K angle indices of ceil(log2 |C_phi|) bits
///     quantized general/unitary: K*S coefficient codes of log2 |C_c| bits, row-major
///     quantized selection: per row, ceil(log2 S) column bits then one code
///   ideal only: K*S (re, im) f64 pairs, row-major, outside the bit accounting
std::vector<std::uint8_t> serialize_report(const FeedbackReport &report, const BasisSpec &spec);

/// Inverse of serialize_report. The codebooks are not on the wire; both
/// ends take them from the shared configuration. Throws std::invalid_argument
/// on truncated or inconsistent input.
FeedbackReport deserialize_report(std::span<const std::uint8_t> bytes, const BasisSpec &spec,
                                  const ComplexCodebook &coefficients);

/// Number of payload bits the report occupies on the wire (before padding).
/// In quantized mode this equals bits_angles + bits_amplitudes.
std::size_t payload_bits(const FeedbackReport &report, const BasisSpec &spec);

} // namespace mmfb
