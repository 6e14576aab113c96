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
#include "mmfb/numerics.hpp"
#include "mmfb/precoding.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace mmfb
{

/// Returns log2(n) for a power of two; throws std::invalid_argument otherwise.
std::size_t exact_log2(std::size_t n);

/// Number of bits needed to index n distinct values (0 for n == 1).
std::size_t index_bits(std::size_t n);

/// Discrete angle-of-departure set shared by transmitter and receiver.
///
/// The sector is split into `size` equal sub-sectors; the codebook elements
/// are the sub-sector midpoints, in ascending order.
class AngleCodebook
{
  public:
    AngleCodebook(AngleInterval sector, std::size_t size);

    const AngleInterval &sector() const { return sector_; }
    std::size_t size() const { return size_; }
    std::size_t bits() const { return exact_log2(size_); }
    double resolution() const { return sector_.width() / static_cast<double>(size_); }
    double center(std::size_t index) const;
    std::vector<double> centers() const;

    /// Nearest center to the (clamped) angle; exact ties go to the lower index.
    std::size_t quantize(double angle) const;

  private:
    AngleInterval sector_;
    std::size_t size_;
};

inline std::size_t quantize_angle(const AngleCodebook &cb, double angle)
{
    return cb.quantize(angle);
}

enum class CoefficientQuantization
{
    ideal,
    uniform_polar
};

/// Quantizer for complex feedback coefficients (the set C_c).
///
/// uniform_polar: magnitude levels i * scale / (levels - 1) over [0, scale]
/// and phase levels -pi + p * 2 pi / levels over [-pi, pi). The scale is the
/// largest magnitude of the quantized set and travels with the message.
struct ComplexCodebook
{
    CoefficientQuantization mode = CoefficientQuantization::ideal;
    std::size_t magnitude_levels = 16;
    std::size_t phase_levels = 16;

    static ComplexCodebook ideal() { return {}; }
    static ComplexCodebook uniform_polar(std::size_t magnitude_levels, std::size_t phase_levels);

    bool is_ideal() const { return mode == CoefficientQuantization::ideal; }
    std::size_t size() const { return magnitude_levels * phase_levels; }
    /// log2 |C_c|; needs power-of-two level counts.
    std::size_t bits() const;

    std::uint32_t encode(Complex z, double scale) const;
    Complex decode(std::uint32_t code, double scale) const;
};

void validate(const ComplexCodebook &cc);

struct BasisSpec
{
    AngleCodebook codebook;
    std::size_t gamma = 1;
    ArrayGeometry tx;
};

void validate(const BasisSpec &spec);

/// Multi-beam basis element for an angle: (1/sqrt(G)) sum_g h_t(angle - d/2 + g d / (G + 1)).
/// For gamma == 1 this is exactly array_response(tx, angle).
ComplexVector basis_vector(const BasisSpec &spec, double angle);

/// M x K matrix with one basis_vector column per angle.
ComplexMatrix basis_matrix(const BasisSpec &spec, const std::vector<double> &angles);

/// Basis columns for codebook indices; throws std::invalid_argument on an
/// out-of-range index.
ComplexMatrix basis_matrix_for_indices(const BasisSpec &spec, const std::vector<std::size_t> &indices);

/// Basis matrix over the whole codebook, built once and shared read-only.
class Dictionary
{
  public:
    explicit Dictionary(BasisSpec spec);

    const BasisSpec &spec() const { return spec_; }
    const ComplexMatrix &atoms() const { return atoms_; }
    ComplexMatrix columns(const std::vector<std::size_t> &indices) const;

  private:
    BasisSpec spec_;
    ComplexMatrix atoms_;
};

struct OmpResult
{
    std::vector<std::size_t> indices;        // selected codebook indices, in selection order
    ComplexMatrix combining;                 // G*, scaled so ||Psi(phi*) G*||_F = 1
    std::vector<double> residual_history;    // ||F_opt - Psi(phi) G||_F after each selection
};

/// Greedy approximation of F_opt by k basis columns (orthogonal matching pursuit).
///
/// Each iteration correlates the normalized residual with every codebook
/// column, picks the column with the largest correlation energy (ties go
/// to the lowest index, already selected columns are skipped), re-solves
/// the least-squares combining matrix against F_opt and normalizes the new
/// residual. Stops early, with fewer indices, once the residual vanishes.
///
/// Throws std::invalid_argument for k == 0, k > |C_phi|, a zero F_opt or a
/// row-count mismatch between F_opt and the dictionary.
OmpResult omp_approximate(const Precoder &f_opt, const Dictionary &dict, std::size_t k);
OmpResult omp_approximate(const Precoder &f_opt, const BasisSpec &spec, std::size_t k);

/// Structure imposed on G* before it is quantized.
enum class CombiningStructure
{
    general,    // arbitrary K x S matrix
    unitary,    // polar factor of G*, G^H G = I
    selection   // one non-zero per row: each selected angle serves a single stream
};

struct FeedbackOptions
{
    ComplexCodebook coefficients = ComplexCodebook::ideal();
    CombiningStructure structure = CombiningStructure::general;
};

/// Everything the receiver sends back. Together with the shared BasisSpec
/// this is sufficient to rebuild the precoder at the transmitter.
struct FeedbackReport
{
    std::vector<std::size_t> angle_indices;
    ComplexMatrix combining;                    // K x S, dequantized values
    std::size_t gamma = 1;
    CombiningStructure structure = CombiningStructure::general;
    bool quantized = false;

    // Quantized mode only. Codes are row-major over combining; in selection
    // mode there is one code per row and `positions` holds its column.
    double magnitude_scale = 0.0;
    std::vector<std::uint32_t> coefficient_codes;
    std::vector<std::uint32_t> positions;

    std::size_t bits_angles = 0;
    std::size_t bits_amplitudes = 0;

    std::size_t k() const { return angle_indices.size(); }
    std::size_t streams() const { return static_cast<std::size_t>(combining.cols()); }
    std::size_t total_bits() const { return bits_angles + bits_amplitudes; }
};

/// Applies the combining structure to G* (K x S). unitary needs K >= S.
ComplexMatrix structure_combining(const ComplexMatrix &G, CombiningStructure structure);

FeedbackReport build_report(const Precoder &f_opt, const Dictionary &dict, std::size_t k,
                            const FeedbackOptions &options = {});
FeedbackReport build_report(const Precoder &f_opt, const BasisSpec &spec, std::size_t k,
                            const FeedbackOptions &options = {});

/// F_hat = Psi(phi*) G, renormalized to unit Frobenius norm.
Precoder reconstruct_precoder(const FeedbackReport &report, const BasisSpec &spec);

enum class FeedbackScheme
{
    direct_H,
    direct_F,
    sparse_precoder,
    multilevel_csi,
    proposed
};

const char *to_string(FeedbackScheme scheme);

struct OverheadParams
{
    std::optional<std::size_t> tx_antennas;          // M
    std::optional<std::size_t> rx_antennas;          // N
    std::optional<std::size_t> streams;              // S
    std::optional<std::size_t> rf_chains;            // Q
    std::optional<std::size_t> num_angles;           // K
    std::optional<std::size_t> angle_codebook_size;  // |C_phi|
    std::optional<std::size_t> coeff_codebook_size;  // |C_c|
};

struct OverheadBits
{
    std::size_t angle_bits = 0;
    std::size_t amplitude_bits = 0;

    std::size_t total() const { return angle_bits + amplitude_bits; }
    bool operator==(const OverheadBits &) const = default;
};

/// Feedback overhead per scheme:
///   direct_H        (0, M N log2|Cc|)
///   direct_F        (0, M S log2|Cc|)
///   sparse_precoder (Q log2|Cphi|, Q S log2|Cc|)
///   multilevel_csi  (2 K log2|Cphi|, K log2|Cc|)
///   proposed        (K log2|Cphi|, K S log2|Cc|)
/// Throws std::invalid_argument when a parameter the row needs is missing.
OverheadBits overhead_bits(FeedbackScheme scheme, const OverheadParams &params);

} // namespace mmfb
