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

#include <cstddef>
#include <numbers>
#include <vector>

namespace mmfb
{

/// Closed angle interval [lo, hi] in radians.
struct AngleInterval
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double angle) const { return angle >= lo && angle <= hi; }
    double clamp(double angle) const;
};

/// Uniform linear array: element count and element spacing in wavelengths.
struct ArrayGeometry
{
    std::size_t num_elements = 1;
    double spacing_over_wavelength = 0.5;
};

struct ChannelConfig
{
    ArrayGeometry tx{128, 0.5};
    ArrayGeometry rx{16, 0.5};
    std::size_t num_clusters = 12;      // L
    std::size_t rays_per_cluster = 20;  // J
    AngleInterval tx_sector{-std::numbers::pi / 4.0, std::numbers::pi / 4.0};
    AngleInterval rx_sector{-std::numbers::pi, std::numbers::pi};
    double angular_spread = 0.1309;     // Laplacian scale of ray offsets, radians (7.5 deg)

    // Test hook: all path gains equal to 1 instead of CN(0, 1) draws.
    bool unit_gains = false;

    std::size_t num_paths() const { return num_clusters * rays_per_cluster; }
};

struct PathComponent
{
    Complex gain{1.0, 0.0};
    double aod = 0.0;
    double aoa = 0.0;
};

struct ChannelRealization
{
    ComplexMatrix matrix;               // N x M
    std::vector<PathComponent> paths;   // L * J entries
};

void validate(const ArrayGeometry &geom);
void validate(const ChannelConfig &cfg);

/// Unit-norm ULA response; element m is exp(j * 2 pi m (d / lambda) sin(angle)) / sqrt(M).
ComplexVector array_response(const ArrayGeometry &geom, double angle);

/// Draws one clustered (Saleh-Valenzuela) realization.
///
/// Cluster mean angles are uniform over the sectors; each ray adds a
/// Laplacian offset and is clamped to its sector, so every realization
/// consumes exactly the same number of draws from the stream.
ChannelRealization sample_channel(const ChannelConfig &cfg, RandomStream &rng);

/// sqrt(M N / normalization_paths) * H_r diag(gains) H_t^H.
///
/// normalization_paths is the L * J of the generating model; it defaults to
/// paths.size() and must be kept at the model value when only a subset of
/// paths is supplied. Throws std::invalid_argument on an empty path list.
ComplexMatrix reconstruct_from_paths(const std::vector<PathComponent> &paths, const ArrayGeometry &tx,
                                     const ArrayGeometry &rx, std::size_t normalization_paths = 0);

} // namespace mmfb
