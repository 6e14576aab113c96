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

#include <catch2/catch_amalgamated.hpp>

#include "mmfb/hybrid.hpp"
#include "support.hpp"

#include <cmath>

using namespace mmfb;
using Catch::Matchers::WithinAbs;

namespace
{

double max_modulus_error(const ComplexMatrix &R)
{
    return (R.cwiseAbs().array() - 1.0).abs().maxCoeff();
}

} // namespace

TEST_CASE("decompose - random precoders round trip")
{
    RandomStream rng(1);
    for (int rep = 0; rep < 200; ++rep)
    {
        const auto M = static_cast<Eigen::Index>(1 + rep % 64);
        const auto S = static_cast<Eigen::Index>(1 + rep % 4);
        const ComplexMatrix F = test::random_unit_matrix(rng, M, S);
        const HybridDecomposition d = decompose(F);
        CHECK(d.baseband.rows() == S);
        CHECK(d.rf_bar.rows() == M);
        CHECK(test::max_abs(reconstruct(d) - F) <= 1e-10);
        CHECK(max_modulus_error(d.rf_bar) <= 1e-12);
        CHECK(max_modulus_error(d.rf_tilde) <= 1e-12);
        // Baseband is diagonal and non-negative.
        for (Eigen::Index i = 0; i < S; ++i)
            for (Eigen::Index j = 0; j < S; ++j)
                if (i != j)
                    CHECK(d.baseband(i, j) == Complex(0.0));
                else
                    CHECK(d.baseband(i, i).real() >= 0.0);
    }
}

TEST_CASE("decompose - explicit 8x2 case")
{
    RandomStream rng(2);
    const ComplexMatrix F = test::random_matrix(rng, 8, 2);
    const HybridDecomposition d = decompose(F);
    CHECK(test::max_abs((d.rf_bar + d.rf_tilde) * d.baseband - F) <= 1e-10);
    const ComplexMatrix stacked = d.rf();
    REQUIRE(stacked.cols() == 4);
    CHECK(stacked.leftCols(2) == d.rf_bar);
    CHECK(stacked.rightCols(2) == d.rf_tilde);
    for (Eigen::Index s = 0; s < 2; ++s)
        CHECK_THAT(d.baseband(s, s).real(), WithinAbs(F.col(s).cwiseAbs().maxCoeff() / 2.0, 1e-15));
}

TEST_CASE("decompose - constant modulus and zero columns")
{
    RandomStream rng(3);
    ComplexMatrix F(6, 3);
    for (Eigen::Index m = 0; m < 6; ++m)
    {
        F(m, 0) = std::polar(0.4, rng.uniform(-3.0, 3.0));
        F(m, 1) = 0.0;
        F(m, 2) = rng.complex_normal(1.0);
    }
    const HybridDecomposition d = decompose(F);
    CHECK_THAT(d.baseband(0, 0).real(), WithinAbs(0.2, 1e-15));
    CHECK(test::max_abs(d.rf_bar.col(0) - d.rf_tilde.col(0)) < 1e-7);
    for (Eigen::Index m = 0; m < 6; ++m)
        CHECK(std::abs(d.rf_bar(m, 0) - F(m, 0) / 0.4) < 1e-7);

    CHECK(d.baseband(1, 1) == Complex(0.0));
    CHECK(d.rf_bar.col(1) == ComplexMatrix::Ones(6, 1));
    CHECK(d.rf_tilde.col(1) == ComplexMatrix::Ones(6, 1));
    CHECK(test::max_abs(reconstruct(d) - F) <= 1e-10);
    CHECK(max_modulus_error(d.rf_bar) <= 1e-12);
}

TEST_CASE("reconstruct - algebraic cases")
{
    RandomStream rng(4);
    HybridDecomposition d;
    d.rf_bar = test::random_matrix(rng, 5, 2);
    d.rf_tilde = test::random_matrix(rng, 5, 2);
    d.baseband = ComplexMatrix::Zero(2, 2);
    CHECK(reconstruct(d).isZero(0.0));
    d.rf_tilde = d.rf_bar;
    d.baseband = test::random_matrix(rng, 2, 2);
    CHECK(test::max_abs(reconstruct(d) - 2.0 * d.rf_bar * d.baseband) < 1e-14);
}

TEST_CASE("phase_shifter_count")
{
    STATIC_CHECK(phase_shifter_count(128, 4) == 1024);
    STATIC_CHECK(phase_shifter_count(1, 1) == 2);
    // Same count as a fully connected array with Q = 8 RF chains.
    STATIC_CHECK(phase_shifter_count(128, 4) == 8 * 128);
}
