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

#include "mmfb/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace mmfb
{

bool all_finite(const ComplexMatrix &A)
{
    return A.allFinite();
}

double frobenius_norm(const ComplexMatrix &A)
{
    return A.norm();
}

SvdResult svd(const ComplexMatrix &A)
{
    if (A.rows() == 0 || A.cols() == 0)
        throw std::invalid_argument("svd: matrix must be non-empty");
    if (!all_finite(A))
        throw std::invalid_argument("svd: matrix contains non-finite entries");

    Eigen::JacobiSVD<ComplexMatrix> solver(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    // JacobiSVD already returns singular values in decreasing order.
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

ComplexMatrix least_squares(const ComplexMatrix &A, const ComplexMatrix &B)
{
    if (A.rows() == 0 || A.cols() == 0 || B.cols() == 0)
        throw std::invalid_argument("least_squares: empty operand");
    if (A.rows() != B.rows())
        throw std::invalid_argument("least_squares: row count of A and B differ");
    if (A.rows() < A.cols())
        throw std::invalid_argument("least_squares: A must have at least as many rows as columns");
    if (!all_finite(A) || !all_finite(B))
        throw std::invalid_argument("least_squares: non-finite input");

    Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(A);
    return cod.solve(B);
}

double log2_det_hermitian(const ComplexMatrix &A)
{
    if (A.rows() == 0 || A.rows() != A.cols())
        throw std::invalid_argument("log2_det_hermitian: matrix must be square and non-empty");
    if (!all_finite(A))
        throw std::invalid_argument("log2_det_hermitian: non-finite input");

    const double scale = A.norm();
    const double asymmetry = (A - A.adjoint()).norm();
    if (asymmetry > 1e-9 * scale)
        throw std::invalid_argument("log2_det_hermitian: matrix is not Hermitian");

    const ComplexMatrix hermitian = 0.5 * (A + A.adjoint());
    Eigen::LLT<ComplexMatrix> llt(hermitian);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("log2_det_hermitian: matrix is not positive definite");

    double acc = 0.0;
    const auto &L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i)
    {
        const double d = L(i, i).real();
        if (!(d > 0.0))
            throw std::domain_error("log2_det_hermitian: matrix is not positive definite");
        acc += std::log2(d);
    }
    return 2.0 * acc;
}

} // namespace mmfb
