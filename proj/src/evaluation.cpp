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

#include "mmfb/evaluation.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace mmfb
{

double achievable_rate(const ComplexMatrix &H, const ComplexMatrix &F, double snr_linear)
{
    if (H.cols() != F.rows())
        throw std::invalid_argument("achievable_rate: channel columns do not match precoder rows");
    if (!(snr_linear > 0.0) || !std::isfinite(snr_linear))
        throw std::invalid_argument("achievable_rate: snr must be positive and finite");
    if (std::abs(F.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("achievable_rate: precoder must have unit Frobenius norm");

    const ComplexMatrix HF = H * F;
    ComplexMatrix A = snr_linear * (HF * HF.adjoint());
    A.diagonal().array() += 1.0;
    return log2_det_hermitian(A);
}

BitErrorCount ber_qpsk_mmse(const ComplexMatrix &H, const ComplexMatrix &F, double snr_linear,
                            std::size_t num_symbols, RandomStream &rng)
{
    if (H.cols() != F.rows())
        throw std::invalid_argument("ber_qpsk_mmse: channel columns do not match precoder rows");
    if (!(snr_linear > 0.0) || !std::isfinite(snr_linear))
        throw std::invalid_argument("ber_qpsk_mmse: snr must be positive and finite");
    if (num_symbols == 0)
        throw std::invalid_argument("ber_qpsk_mmse: need at least one symbol");

    const Eigen::Index N = H.rows();
    const Eigen::Index S = F.cols();
    const auto n = static_cast<Eigen::Index>(num_symbols);

    const ComplexMatrix HF = H * F;
    ComplexMatrix A = snr_linear * (HF * HF.adjoint());
    A.diagonal().array() += 1.0;
    // W = P (HF)^H A^-1 = (A^-1 P HF)^H since A is Hermitian.
    const ComplexMatrix W = Eigen::LLT<ComplexMatrix>(A).solve(snr_linear * HF).adjoint();

    const double amp = std::sqrt(snr_linear / 2.0);
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> bits_i(S, n), bits_q(S, n);
    ComplexMatrix X(S, n);
    ComplexMatrix Z(N, n);
    for (Eigen::Index t = 0; t < n; ++t)
    {
        for (Eigen::Index s = 0; s < S; ++s)
        {
            const int bi = rng.bit();
            const int bq = rng.bit();
            bits_i(s, t) = static_cast<std::uint8_t>(bi);
            bits_q(s, t) = static_cast<std::uint8_t>(bq);
            X(s, t) = Complex(bi ? -amp : amp, bq ? -amp : amp);
        }
        for (Eigen::Index r = 0; r < N; ++r)
            Z(r, t) = rng.complex_normal(1.0);
    }

    const ComplexMatrix estimate = W * (HF * X + Z);

    BitErrorCount out;
    for (Eigen::Index t = 0; t < n; ++t)
        for (Eigen::Index s = 0; s < S; ++s)
        {
            const Complex e = estimate(s, t);
            out.bit_errors += static_cast<std::uint8_t>(e.real() < 0.0) != bits_i(s, t);
            out.bit_errors += static_cast<std::uint8_t>(e.imag() < 0.0) != bits_q(s, t);
        }
    out.bits_sent = static_cast<std::uint64_t>(2 * S * n);
    return out;
}

double trapezoid(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("trapezoid: grid and values differ in length");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

BeamPattern beam_pattern_at(const BasisSpec &spec, double center_angle, std::size_t grid_size)
{
    validate(spec);
    if (grid_size < 64)
        throw std::invalid_argument("beam_pattern: grid needs at least 64 points");

    const ComplexVector element = basis_vector(spec, center_angle);
    const AngleInterval &sector = spec.codebook.sector();

    BeamPattern out;
    out.gamma = spec.gamma;
    out.angles.resize(grid_size);
    out.gain.resize(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i)
    {
        const double phi = sector.lo + sector.width() * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        out.angles[i] = phi;
        out.gain[i] = std::norm(array_response(spec.tx, phi).dot(element));
    }
    const double area = trapezoid(out.angles, out.gain);
    if (!(area > 0.0))
        throw std::domain_error("beam_pattern: basis element radiates no power into the sector");
    for (double &g : out.gain)
        g /= area;
    return out;
}

BeamPattern beam_pattern(const BasisSpec &spec, std::size_t center_index, std::size_t grid_size)
{
    if (center_index >= spec.codebook.size())
        throw std::invalid_argument("beam_pattern: center index outside codebook");
    return beam_pattern_at(spec, spec.codebook.center(center_index), grid_size);
}

} // namespace mmfb
