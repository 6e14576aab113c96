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

#include "mmfb/report_codec.hpp"

#include <bit>
#include <stdexcept>

namespace mmfb
{

namespace
{

constexpr std::size_t header_bytes = 5;

class BitWriter
{
  public:
    explicit BitWriter(std::vector<std::uint8_t> &out) : out_(out) {}

    void put(std::uint64_t value, std::size_t width)
    {
        for (std::size_t i = width; i-- > 0;)
        {
            if (used_ % 8 == 0)
                out_.push_back(0);
            if ((value >> i) & 1U)
                out_.back() |= static_cast<std::uint8_t>(0x80U >> (used_ % 8));
            ++used_;
        }
    }

    std::size_t bits() const { return used_; }

  private:
    std::vector<std::uint8_t> &out_;
    std::size_t used_ = 0;
};

class BitReader
{
  public:
    BitReader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint64_t get(std::size_t width)
    {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i)
        {
            const std::size_t byte = pos_ / 8;
            if (byte >= in_.size())
                throw std::invalid_argument("feedback message truncated");
            v = (v << 1) | ((in_[byte] >> (7 - pos_ % 8)) & 1U);
            ++pos_;
        }
        return v;
    }

    std::size_t bytes_consumed() const { return (pos_ + 7) / 8; }

  private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void put_u64_le(std::vector<std::uint8_t> &out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64_le(std::vector<std::uint8_t> &out, double v)
{
    put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

double get_f64_le(std::span<const std::uint8_t> in, std::size_t offset)
{
    if (offset + 8 > in.size())
        throw std::invalid_argument("feedback message truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(in[offset + static_cast<std::size_t>(i)]) << (8 * i);
    return std::bit_cast<double>(v);
}

std::size_t angle_index_bits(const BasisSpec &spec)
{
    return index_bits(spec.codebook.size());
}

} // namespace

static std::size_t write_payload(const FeedbackReport &report, const BasisSpec &spec, std::vector<std::uint8_t> &out);

std::vector<std::uint8_t> serialize_report(const FeedbackReport &report, const BasisSpec &spec)
{
    const std::size_t K = report.k();
    const std::size_t S = report.streams();
    if (K > 0xFFFF || report.gamma > 0xFF || S > 0xFF)
        throw std::invalid_argument("serialize_report: K, gamma or S exceed the header field width");

    std::vector<std::uint8_t> out;
    out.push_back(static_cast<std::uint8_t>(K & 0xFF));
    out.push_back(static_cast<std::uint8_t>(K >> 8));
    out.push_back(static_cast<std::uint8_t>(report.gamma));
    out.push_back(static_cast<std::uint8_t>((report.quantized ? 1U : 0U) |
                                            (static_cast<unsigned>(report.structure) << 1)));
    out.push_back(static_cast<std::uint8_t>(S));
    if (report.quantized)
        put_f64_le(out, report.magnitude_scale);

    write_payload(report, spec, out);
    if (!report.quantized)
    {
        for (Eigen::Index r = 0; r < report.combining.rows(); ++r)
            for (Eigen::Index s = 0; s < report.combining.cols(); ++s)
            {
                put_f64_le(out, report.combining(r, s).real());
                put_f64_le(out, report.combining(r, s).imag());
            }
    }
    return out;
}

static std::size_t write_payload(const FeedbackReport &report, const BasisSpec &spec, std::vector<std::uint8_t> &out)
{
    const std::size_t K = report.k();
    const std::size_t S = report.streams();
    BitWriter bw(out);
    const std::size_t ib = angle_index_bits(spec);
    for (std::size_t idx : report.angle_indices)
    {
        if (idx >= spec.codebook.size())
            throw std::invalid_argument("serialize_report: angle index outside codebook");
        bw.put(idx, ib);
    }

    if (report.quantized)
    {
        const std::size_t codes = report.coefficient_codes.size();
        if (report.structure == CombiningStructure::selection)
        {
            if (codes != K || report.positions.size() != K)
                throw std::invalid_argument("serialize_report: selection report needs one code per row");
            const std::size_t code_bits = report.bits_amplitudes / K - index_bits(S);
            for (std::size_t r = 0; r < K; ++r)
            {
                bw.put(report.positions[r], index_bits(S));
                bw.put(report.coefficient_codes[r], code_bits);
            }
        }
        else
        {
            if (codes != K * S)
                throw std::invalid_argument("serialize_report: expected K*S coefficient codes");
            const std::size_t code_bits = report.bits_amplitudes / codes;
            for (auto c : report.coefficient_codes)
                bw.put(c, code_bits);
        }
    }
    return bw.bits();
}

std::size_t payload_bits(const FeedbackReport &report, const BasisSpec &spec)
{
    std::vector<std::uint8_t> scratch;
    return write_payload(report, spec, scratch);
}

FeedbackReport deserialize_report(std::span<const std::uint8_t> bytes, const BasisSpec &spec,
                                  const ComplexCodebook &coefficients)
{
    if (bytes.size() < header_bytes)
        throw std::invalid_argument("feedback message shorter than its header");

    FeedbackReport report;
    const std::size_t K = static_cast<std::size_t>(bytes[0]) | (static_cast<std::size_t>(bytes[1]) << 8);
    report.gamma = bytes[2];
    const std::uint8_t flags = bytes[3];
    const std::size_t S = bytes[4];
    report.quantized = (flags & 1U) != 0;
    const unsigned structure = (flags >> 1) & 3U;
    if (structure > 2)
        throw std::invalid_argument("feedback message has an unknown combining structure");
    report.structure = static_cast<CombiningStructure>(structure);
    if (report.gamma != spec.gamma)
        throw std::invalid_argument("feedback message gamma does not match the shared basis");
    if (report.quantized == coefficients.is_ideal())
        throw std::invalid_argument("feedback message quantization mode does not match the shared codebook");
    if (K == 0 || S == 0)
        throw std::invalid_argument("feedback message carries no angles or streams");

    std::size_t offset = header_bytes;
    if (report.quantized)
    {
        report.magnitude_scale = get_f64_le(bytes, offset);
        offset += 8;
    }

    BitReader br(bytes.subspan(offset));
    const std::size_t ib = angle_index_bits(spec);
    for (std::size_t k = 0; k < K; ++k)
    {
        const auto idx = static_cast<std::size_t>(br.get(ib));
        if (idx >= spec.codebook.size())
            throw std::invalid_argument("feedback message angle index outside codebook");
        report.angle_indices.push_back(idx);
    }
    report.bits_angles = K * spec.codebook.bits();

    report.combining = ComplexMatrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(S));
    if (report.quantized)
    {
        const std::size_t code_bits = coefficients.bits();
        if (report.structure == CombiningStructure::selection)
        {
            for (std::size_t r = 0; r < K; ++r)
            {
                const auto pos = static_cast<std::uint32_t>(br.get(index_bits(S)));
                const auto code = static_cast<std::uint32_t>(br.get(code_bits));
                if (pos >= S)
                    throw std::invalid_argument("feedback message stream position out of range");
                report.positions.push_back(pos);
                report.coefficient_codes.push_back(code);
                report.combining(static_cast<Eigen::Index>(r), pos) = coefficients.decode(code, report.magnitude_scale);
            }
            report.bits_amplitudes = K * (index_bits(S) + code_bits);
        }
        else
        {
            for (std::size_t r = 0; r < K; ++r)
                for (std::size_t s = 0; s < S; ++s)
                {
                    const auto code = static_cast<std::uint32_t>(br.get(code_bits));
                    report.coefficient_codes.push_back(code);
                    report.combining(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
                        coefficients.decode(code, report.magnitude_scale);
                }
            report.bits_amplitudes = K * S * code_bits;
        }
    }
    else
    {
        offset += br.bytes_consumed();
        for (std::size_t r = 0; r < K; ++r)
            for (std::size_t s = 0; s < S; ++s)
            {
                const double re = get_f64_le(bytes, offset);
                const double im = get_f64_le(bytes, offset + 8);
                offset += 16;
                report.combining(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = Complex(re, im);
            }
    }
    return report;
}

} // namespace mmfb
