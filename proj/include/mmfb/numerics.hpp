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

#include <Eigen/Dense>

#include <complex>

namespace mmfb
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Thin singular value decomposition A = U * diag(sigma) * V^H.
/// sigma is sorted in descending order; U and V have min(rows, cols) orthonormal columns.
struct SvdResult
{
    ComplexMatrix U;
    RealVector sigma;
    ComplexMatrix V;
};

bool all_finite(const ComplexMatrix &A);

double frobenius_norm(const ComplexMatrix &A);

// Throws std::invalid_argument on empty or non-finite input.
SvdResult svd(const ComplexMatrix &A);

/// Minimum-norm least-squares solution of A * X = B.
///
/// Backed by a complete orthogonal decomposition, so the result stays
/// well defined when A is rank deficient (e.g. repeated or nearly
/// repeated dictionary columns). Requires rows(A) >= cols(A) and
/// rows(A) == rows(B); throws std::invalid_argument otherwise.
ComplexMatrix least_squares(const ComplexMatrix &A, const ComplexMatrix &B);

/// log2 of the determinant of a Hermitian positive definite matrix.
///
/// The Hermitian part is factored by Cholesky. Throws std::invalid_argument
/// if A is not square or its Hermitian asymmetry exceeds 1e-9 * ||A||_F,
/// and std::domain_error if A is not positive definite.
double log2_det_hermitian(const ComplexMatrix &A);

} // namespace mmfb
