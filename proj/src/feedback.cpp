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

#include "mmfb/feedback.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mmfb
{

std::size_t exact_log2(std::size_t n)
{
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument("codebook size " + std::to_string(n) + " is not a power of two");
    return static_cast<std::size_t>(std::countr_zero(n));
}

std::size_t index_bits(std::size_t n)
{
    if (n <= 1)
        return 0;
    return static_cast<std::size_t>(std::bit_width(n - 1));
}

// ------------------------------------------------------------------------
// AngleCodebook

AngleCodebook::AngleCodebook(AngleInterval sector, std::size_t size) : sector_(sector), size_(size)
{
    if (!std::isfinite(sector.lo) || !std::isfinite(sector.hi) || !(sector.hi > sector.lo))
        throw std::invalid_argument("angle codebook sector must be a non-empty interval");
    exact_log2(size);
}

double AngleCodebook::center(std::size_t index) const
{
    return sector_.lo + (static_cast<double>(index) + 0.5) * resolution();
}

std::vector<double> AngleCodebook::centers() const
{
    std::vector<double> out(size_);
    for (std::size_t i = 0; i < size_; ++i)
        out[i] = center(i);
    return out;
}

std::size_t AngleCodebook::quantize(double angle) const
{
    const double a = sector_.clamp(angle);
    const double t = (a - sector_.lo) / resolution() - 0.5;
    const auto last = static_cast<long long>(size_) - 1;
    const long long guess = std::clamp(static_cast<long long>(std::ceil(t - 0.5)), 0LL, last);

    // The closed-form guess can be off by one through rounding; settle it on
    // the actual distances, scanning upward so ties keep the lower index.
    std::size_t best = static_cast<std::size_t>(std::max(0LL, guess - 1));
    double best_dist = std::abs(a - center(best));
    for (long long i = std::max(0LL, guess - 1) + 1; i <= std::min(last, guess + 1); ++i)
    {
        const double d = std::abs(a - center(static_cast<std::size_t>(i)));
        if (d < best_dist)
        {
            best = static_cast<std::size_t>(i);
            best_dist = d;
        }
    }
    return best;
}

// ------------------------------------------------------------------------
// ComplexCodebook

ComplexCodebook ComplexCodebook::uniform_polar(std::size_t magnitude_levels, std::size_t phase_levels)
{
    ComplexCodebook cc{CoefficientQuantization::uniform_polar, magnitude_levels, phase_levels};
    validate(cc);
    return cc;
}

void validate(const ComplexCodebook &cc)
{
    if (cc.is_ideal())
        return;
    exact_log2(cc.magnitude_levels);
    exact_log2(cc.phase_levels);
    if (cc.bits() > 32)
        throw std::invalid_argument("complex codebook larger than 2^32 entries");
}

std::size_t ComplexCodebook::bits() const
{
    return exact_log2(magnitude_levels) + exact_log2(phase_levels);
}

std::uint32_t ComplexCodebook::encode(Complex z, double scale) const
{
    const double two_pi = 2.0 * std::numbers::pi;
    std::size_t mag_code = 0;
    const double r = std::abs(z);
    if (magnitude_levels > 1 && scale > 0.0)
    {
        const double step = scale / static_cast<double>(magnitude_levels - 1);
        mag_code = static_cast<std::size_t>(std::clamp(std::round(r / step), 0.0,
                                                       static_cast<double>(magnitude_levels - 1)));
    }
    const double phase_step = two_pi / static_cast<double>(phase_levels);
    double p = std::round((std::arg(z) + std::numbers::pi) / phase_step);
    auto phase_code = static_cast<std::size_t>(p) % phase_levels;
    return static_cast<std::uint32_t>(mag_code * phase_levels + phase_code);
}

Complex ComplexCodebook::decode(std::uint32_t code, double scale) const
{
    const std::size_t mag_code = code / phase_levels;
    const std::size_t phase_code = code % phase_levels;
    const double r = magnitude_levels > 1
                         ? scale * static_cast<double>(mag_code) / static_cast<double>(magnitude_levels - 1)
                         : scale;
    const double phase = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(phase_code) /
                                                 static_cast<double>(phase_levels);
    return std::polar(r, phase);
}

// ------------------------------------------------------------------------
// Basis

void validate(const BasisSpec &spec)
{
    validate(spec.tx);
    if (spec.gamma < 1)
        throw std::invalid_argument("multi-beam factor gamma must be at least 1");
}

ComplexVector basis_vector(const BasisSpec &spec, double angle)
{
    if (spec.gamma == 1)
        return array_response(spec.tx, angle);

    const double delta = spec.codebook.resolution();
    const double g = static_cast<double>(spec.gamma);
    ComplexVector acc = ComplexVector::Zero(static_cast<Eigen::Index>(spec.tx.num_elements));
    for (std::size_t gamma = 1; gamma <= spec.gamma; ++gamma)
        acc += array_response(spec.tx, angle - 0.5 * delta + static_cast<double>(gamma) * delta / (g + 1.0));
    return acc / std::sqrt(g);
}

ComplexMatrix basis_matrix(const BasisSpec &spec, const std::vector<double> &angles)
{
    validate(spec);
    if (angles.empty())
        throw std::invalid_argument("basis_matrix: empty angle list");
    ComplexMatrix out(static_cast<Eigen::Index>(spec.tx.num_elements), static_cast<Eigen::Index>(angles.size()));
    for (std::size_t k = 0; k < angles.size(); ++k)
        out.col(static_cast<Eigen::Index>(k)) = basis_vector(spec, angles[k]);
    return out;
}

ComplexMatrix basis_matrix_for_indices(const BasisSpec &spec, const std::vector<std::size_t> &indices)
{
    std::vector<double> angles;
    angles.reserve(indices.size());
    for (std::size_t i : indices)
    {
        if (i >= spec.codebook.size())
            throw std::invalid_argument("angle index " + std::to_string(i) + " outside codebook of size " +
                                        std::to_string(spec.codebook.size()));
        angles.push_back(spec.codebook.center(i));
    }
    return basis_matrix(spec, angles);
}

Dictionary::Dictionary(BasisSpec spec) : spec_(std::move(spec)), atoms_(basis_matrix(spec_, spec_.codebook.centers()))
{
}

ComplexMatrix Dictionary::columns(const std::vector<std::size_t> &indices) const
{
    ComplexMatrix out(atoms_.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k)
    {
        if (indices[k] >= static_cast<std::size_t>(atoms_.cols()))
            throw std::invalid_argument("dictionary column index out of range");
        out.col(static_cast<Eigen::Index>(k)) = atoms_.col(static_cast<Eigen::Index>(indices[k]));
    }
    return out;
}

// ------------------------------------------------------------------------
// OMP

OmpResult omp_approximate(const Precoder &f_opt, const Dictionary &dict, std::size_t k)
{
    const ComplexMatrix &F = f_opt.matrix;
    const ComplexMatrix &atoms = dict.atoms();
    const auto codebook_size = static_cast<std::size_t>(atoms.cols());

    if (k == 0 || k > codebook_size)
        throw std::invalid_argument("omp_approximate: k must lie in [1, |C_phi|]");
    if (F.rows() != atoms.rows())
        throw std::invalid_argument("omp_approximate: precoder rows do not match the number of antennas");
    if (!all_finite(F))
        throw std::invalid_argument("omp_approximate: non-finite precoder");
    const double f_norm = F.norm();
    if (!(f_norm > 0.0))
        throw std::invalid_argument("omp_approximate: precoder is zero");

    const double stop_tolerance = 1e-12 * f_norm;

    OmpResult out;
    std::vector<bool> taken(codebook_size, false);
    ComplexMatrix residual = F;
    ComplexMatrix selected(atoms.rows(), 0);
    ComplexMatrix G;

    for (std::size_t it = 0; it < k; ++it)
    {
        const ComplexMatrix Q = atoms.adjoint() * residual;
        // (Q Q^H)_{l,l} is the squared norm of row l of Q.
        const RealVector energy = Q.rowwise().squaredNorm();

        std::size_t best = codebook_size;
        double best_energy = -1.0;
        for (std::size_t l = 0; l < codebook_size; ++l)
        {
            if (taken[l])
                continue;
            const double e = energy(static_cast<Eigen::Index>(l));
            if (e > best_energy)
            {
                best = l;
                best_energy = e;
            }
        }

        taken[best] = true;
        out.indices.push_back(best);
        selected.conservativeResize(Eigen::NoChange, selected.cols() + 1);
        selected.col(selected.cols() - 1) = atoms.col(static_cast<Eigen::Index>(best));

        G = least_squares(selected, F);
        const ComplexMatrix approx_error = F - selected * G;
        const double r = approx_error.norm();
        out.residual_history.push_back(r);
        if (r <= stop_tolerance)
            break;
        residual = approx_error / r;
    }

    const double fitted = (selected * G).norm();
    if (!(fitted > 0.0))
        throw std::domain_error("omp_approximate: selected basis carries no energy of the precoder");
    out.combining = G / fitted;
    return out;
}

OmpResult omp_approximate(const Precoder &f_opt, const BasisSpec &spec, std::size_t k)
{
    return omp_approximate(f_opt, Dictionary(spec), k);
}

// ------------------------------------------------------------------------
// Report assembly

ComplexMatrix structure_combining(const ComplexMatrix &G, CombiningStructure structure)
{
    switch (structure)
    {
    case CombiningStructure::general:
        return G;
    case CombiningStructure::unitary: {
        if (G.rows() < G.cols())
            throw std::invalid_argument("unitary combining needs at least as many angles as streams");
        const SvdResult d = svd(G);
        return d.U * d.V.adjoint();
    }
    case CombiningStructure::selection: {
        ComplexMatrix out = ComplexMatrix::Zero(G.rows(), G.cols());
        for (Eigen::Index k = 0; k < G.rows(); ++k)
        {
            Eigen::Index s = 0;
            G.row(k).cwiseAbs().maxCoeff(&s);
            const double row_norm = G.row(k).norm();
            const double mag = std::abs(G(k, s));
            out(k, s) = mag > 0.0 ? G(k, s) * (row_norm / mag) : Complex(0.0, 0.0);
        }
        return out;
    }
    }
    throw std::invalid_argument("unknown combining structure");
}

FeedbackReport build_report(const Precoder &f_opt, const Dictionary &dict, std::size_t k,
                            const FeedbackOptions &options)
{
    validate(options.coefficients);
    const OmpResult omp = omp_approximate(f_opt, dict, k);
    const BasisSpec &spec = dict.spec();

    FeedbackReport report;
    report.angle_indices = omp.indices;
    report.gamma = spec.gamma;
    report.structure = options.structure;
    report.quantized = !options.coefficients.is_ideal();

    ComplexMatrix C = structure_combining(omp.combining, options.structure);
    const std::size_t K = report.k();
    const auto S = static_cast<std::size_t>(C.cols());
    report.bits_angles = K * spec.codebook.bits();

    if (report.quantized)
    {
        const ComplexCodebook &cc = options.coefficients;
        report.magnitude_scale = C.cwiseAbs().maxCoeff();
        if (options.structure == CombiningStructure::selection)
        {
            ComplexMatrix Q = ComplexMatrix::Zero(C.rows(), C.cols());
            for (Eigen::Index r = 0; r < C.rows(); ++r)
            {
                Eigen::Index s = 0;
                C.row(r).cwiseAbs().maxCoeff(&s);
                const std::uint32_t code = cc.encode(C(r, s), report.magnitude_scale);
                report.positions.push_back(static_cast<std::uint32_t>(s));
                report.coefficient_codes.push_back(code);
                Q(r, s) = cc.decode(code, report.magnitude_scale);
            }
            C = Q;
            report.bits_amplitudes = K * (index_bits(S) + cc.bits());
        }
        else
        {
            for (Eigen::Index r = 0; r < C.rows(); ++r)
                for (Eigen::Index s = 0; s < C.cols(); ++s)
                {
                    const std::uint32_t code = cc.encode(C(r, s), report.magnitude_scale);
                    report.coefficient_codes.push_back(code);
                    C(r, s) = cc.decode(code, report.magnitude_scale);
                }
            report.bits_amplitudes = K * S * cc.bits();
        }
    }
    report.combining = std::move(C);
    return report;
}

FeedbackReport build_report(const Precoder &f_opt, const BasisSpec &spec, std::size_t k,
                            const FeedbackOptions &options)
{
    return build_report(f_opt, Dictionary(spec), k, options);
}

Precoder reconstruct_precoder(const FeedbackReport &report, const BasisSpec &spec)
{
    if (report.angle_indices.empty())
        throw std::invalid_argument("reconstruct_precoder: report carries no angles");
    if (report.gamma != spec.gamma)
        throw std::invalid_argument("reconstruct_precoder: report gamma does not match the shared basis");
    if (static_cast<std::size_t>(report.combining.rows()) != report.k())
        throw std::invalid_argument("reconstruct_precoder: combining matrix has the wrong number of rows");

    const ComplexMatrix Psi = basis_matrix_for_indices(spec, report.angle_indices);
    ComplexMatrix F = Psi * report.combining;
    const double n = F.norm();
    if (!(n > 0.0))
        throw std::domain_error("reconstruct_precoder: reconstructed precoder is zero");
    return {F / n};
}

// ------------------------------------------------------------------------
// Overhead accounting

const char *to_string(FeedbackScheme scheme)
{
    switch (scheme)
    {
    case FeedbackScheme::direct_H:
        return "direct_H";
    case FeedbackScheme::direct_F:
        return "direct_F";
    case FeedbackScheme::sparse_precoder:
        return "sparse_precoder";
    case FeedbackScheme::multilevel_csi:
        return "multilevel_csi";
    case FeedbackScheme::proposed:
        return "proposed";
    }
    return "unknown";
}

namespace
{

std::size_t require(const std::optional<std::size_t> &v, const char *name, FeedbackScheme scheme)
{
    if (!v)
        throw std::invalid_argument(std::string("overhead_bits(") + to_string(scheme) + "): missing parameter " +
                                    name);
    return *v;
}

} // namespace

OverheadBits overhead_bits(FeedbackScheme scheme, const OverheadParams &p)
{
    const auto cc_bits = [&] { return exact_log2(require(p.coeff_codebook_size, "coeff_codebook_size", scheme)); };
    const auto angle_bits = [&] { return exact_log2(require(p.angle_codebook_size, "angle_codebook_size", scheme)); };

    switch (scheme)
    {
    case FeedbackScheme::direct_H:
        return {0, require(p.tx_antennas, "M", scheme) * require(p.rx_antennas, "N", scheme) * cc_bits()};
    case FeedbackScheme::direct_F:
        return {0, require(p.tx_antennas, "M", scheme) * require(p.streams, "S", scheme) * cc_bits()};
    case FeedbackScheme::sparse_precoder: {
        const std::size_t Q = require(p.rf_chains, "Q", scheme);
        return {Q * angle_bits(), Q * require(p.streams, "S", scheme) * cc_bits()};
    }
    case FeedbackScheme::multilevel_csi: {
        const std::size_t K = require(p.num_angles, "K", scheme);
        return {2 * K * angle_bits(), K * cc_bits()};
    }
    case FeedbackScheme::proposed: {
        const std::size_t K = require(p.num_angles, "K", scheme);
        return {K * angle_bits(), K * require(p.streams, "S", scheme) * cc_bits()};
    }
    }
    throw std::invalid_argument("overhead_bits: unknown scheme");
}

} // namespace mmfb
