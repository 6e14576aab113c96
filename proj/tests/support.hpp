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

#include "mmfb/numerics.hpp"
#include "mmfb/random.hpp"

#include <cstdint>

namespace mmfb::test
{

inline ComplexMatrix random_matrix(RandomStream &rng, Eigen::Index rows, Eigen::Index cols)
{
    ComplexMatrix A(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            A(r, c) = rng.complex_normal(1.0);
    return A;
}

inline ComplexMatrix random_unit_matrix(RandomStream &rng, Eigen::Index rows, Eigen::Index cols)
{
    ComplexMatrix A = random_matrix(rng, rows, cols);
    return A / A.norm();
}

inline double max_abs(const ComplexMatrix &A)
{
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

} // namespace mmfb::test
