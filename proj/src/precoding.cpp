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

#include "mmfb/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mmfb
{

RealVector water_fill(const RealVector &sigma, double snr)
{
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("water_fill: snr must be positive");
    if (sigma.size() == 0)
        throw std::invalid_argument("water_fill: empty gain vector");
    if ((sigma.array() < 0.0).any() || !sigma.allFinite())
        throw std::invalid_argument("water_fill: gains must be finite and non-negative");
    if (!(sigma.maxCoeff() > 0.0))
        throw std::domain_error("water_fill: all channel gains are zero");

    const Eigen::Index n = sigma.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sigma(a) > sigma(b); });

    // Inverse gains 1 / (sigma^2 snr) of the best `active` channels; drop the
    // weakest active channel while the resulting level leaves it negative.
    std::size_t active = 0;
    for (auto idx : order)
        if (sigma(idx) > 0.0)
            ++active;

    double level = 0.0;
    while (active > 0)
    {
        double inv_sum = 0.0;
        for (std::size_t i = 0; i < active; ++i)
        {
            const double s = sigma(order[i]);
            inv_sum += 1.0 / (s * s * snr);
        }
        level = (1.0 + inv_sum) / static_cast<double>(active);
        const double weakest = sigma(order[active - 1]);
        if (level - 1.0 / (weakest * weakest * snr) > 0.0)
            break;
        --active;
    }

    RealVector power = RealVector::Zero(n);
    for (std::size_t i = 0; i < active; ++i)
    {
        const double s = sigma(order[i]);
        power(order[i]) = std::max(0.0, level - 1.0 / (s * s * snr));
    }
    return power / power.sum();
}

Precoder optimal_precoder(const ComplexMatrix &H, std::size_t num_streams, const PowerAllocation &alloc)
{
    if (num_streams == 0)
        throw std::invalid_argument("optimal_precoder: need at least one stream");
    if (num_streams > static_cast<std::size_t>(std::min(H.rows(), H.cols())))
        throw std::invalid_argument("optimal_precoder: more streams than min(rows, cols) of the channel");
    if (!(alloc.total_power > 0.0) || !(alloc.noise_variance > 0.0) || !std::isfinite(alloc.snr()))
        throw std::invalid_argument("optimal_precoder: power and noise variance must be positive");

    const SvdResult dec = svd(H);
    if (!(dec.sigma(0) > 0.0))
        throw std::domain_error("optimal_precoder: channel matrix is all zero");

    const auto S = static_cast<Eigen::Index>(num_streams);
    RealVector power;
    if (alloc.mode == AllocationMode::water_filling)
        power = water_fill(dec.sigma.head(S), alloc.snr());
    else
        power = RealVector::Constant(S, 1.0 / static_cast<double>(S));

    Precoder out;
    out.matrix.resize(H.cols(), S);
    for (Eigen::Index s = 0; s < S; ++s)
    {
        ComplexVector v = dec.V.col(s);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        const double mag = std::abs(v(peak));
        if (mag > 0.0)
            v *= std::conj(v(peak)) / mag;
        out.matrix.col(s) = std::sqrt(power(s)) * v;
    }
    return out;
}

} // namespace mmfb
