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

#include "mmfb/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmfb
{

ComplexMatrix HybridDecomposition::rf() const
{
    ComplexMatrix R(rf_bar.rows(), rf_bar.cols() + rf_tilde.cols());
    R << rf_bar, rf_tilde;
    return R;
}

HybridDecomposition decompose(const ComplexMatrix &F)
{
    if (!all_finite(F))
        throw std::invalid_argument("decompose: non-finite precoder");

    const Eigen::Index M = F.rows();
    const Eigen::Index S = F.cols();
    HybridDecomposition d;
    d.baseband = ComplexMatrix::Zero(S, S);
    d.rf_bar.resize(M, S);
    d.rf_tilde.resize(M, S);

    for (Eigen::Index s = 0; s < S; ++s)
    {
        const double peak = M > 0 ? F.col(s).cwiseAbs().maxCoeff() : 0.0;
        const double b = 0.5 * peak;
        d.baseband(s, s) = b;
        for (Eigen::Index m = 0; m < M; ++m)
        {
            if (b == 0.0)
            {
                d.rf_bar(m, s) = 1.0;
                d.rf_tilde(m, s) = 1.0;
                continue;
            }
            const double mag = std::abs(F(m, s));
            const double phase = mag > 0.0 ? std::arg(F(m, s)) : 0.0;
            const double spread = std::acos(std::clamp(mag / (2.0 * b), 0.0, 1.0));
            d.rf_bar(m, s) = std::polar(1.0, phase + spread);
            d.rf_tilde(m, s) = std::polar(1.0, phase - spread);
        }
    }
    return d;
}

ComplexMatrix reconstruct(const HybridDecomposition &d)
{
    return (d.rf_bar + d.rf_tilde) * d.baseband;
}

} // namespace mmfb
