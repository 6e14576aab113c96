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

#include "mmfb/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mmfb
{

double AngleInterval::clamp(double angle) const
{
    return std::clamp(angle, lo, hi);
}

void validate(const ArrayGeometry &geom)
{
    if (geom.num_elements < 1)
        throw std::invalid_argument("array geometry needs at least one element");
    if (!(geom.spacing_over_wavelength > 0.0) || !std::isfinite(geom.spacing_over_wavelength))
        throw std::invalid_argument("array element spacing must be positive");
}

namespace
{

void validate_sector(const AngleInterval &s, const char *name)
{
    const double pi = std::numbers::pi;
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !(s.hi > s.lo) || s.lo < -pi || s.hi > pi)
        throw std::invalid_argument(std::string(name) + " must be a non-empty sub-interval of [-pi, pi]");
}

} // namespace

void validate(const ChannelConfig &cfg)
{
    validate(cfg.tx);
    validate(cfg.rx);
    if (cfg.num_clusters < 1 || cfg.rays_per_cluster < 1)
        throw std::invalid_argument("channel needs at least one cluster and one ray per cluster");
    validate_sector(cfg.tx_sector, "tx_sector");
    validate_sector(cfg.rx_sector, "rx_sector");
    if (!(cfg.angular_spread >= 0.0) || !std::isfinite(cfg.angular_spread))
        throw std::invalid_argument("angular_spread must be non-negative");
}

ComplexVector array_response(const ArrayGeometry &geom, double angle)
{
    const auto M = static_cast<Eigen::Index>(geom.num_elements);
    const double phase_step = 2.0 * std::numbers::pi * geom.spacing_over_wavelength * std::sin(angle);
    const double amplitude = 1.0 / std::sqrt(static_cast<double>(M));
    ComplexVector h(M);
    for (Eigen::Index m = 0; m < M; ++m)
        h(m) = std::polar(amplitude, static_cast<double>(m) * phase_step);
    return h;
}

ChannelRealization sample_channel(const ChannelConfig &cfg, RandomStream &rng)
{
    validate(cfg);

    ChannelRealization out;
    out.paths.reserve(cfg.num_paths());
    for (std::size_t l = 0; l < cfg.num_clusters; ++l)
    {
        const double mean_aod = rng.uniform(cfg.tx_sector.lo, cfg.tx_sector.hi);
        const double mean_aoa = rng.uniform(cfg.rx_sector.lo, cfg.rx_sector.hi);
        for (std::size_t j = 0; j < cfg.rays_per_cluster; ++j)
        {
            PathComponent p;
            p.aod = cfg.tx_sector.clamp(mean_aod + rng.laplacian(cfg.angular_spread));
            p.aoa = cfg.rx_sector.clamp(mean_aoa + rng.laplacian(cfg.angular_spread));
            const Complex g = rng.complex_normal(1.0);
            p.gain = cfg.unit_gains ? Complex(1.0, 0.0) : g;
            out.paths.push_back(p);
        }
    }
    out.matrix = reconstruct_from_paths(out.paths, cfg.tx, cfg.rx, cfg.num_paths());
    return out;
}

ComplexMatrix reconstruct_from_paths(const std::vector<PathComponent> &paths, const ArrayGeometry &tx,
                                     const ArrayGeometry &rx, std::size_t normalization_paths)
{
    if (paths.empty())
        throw std::invalid_argument("reconstruct_from_paths: empty path list");
    validate(tx);
    validate(rx);
    if (normalization_paths == 0)
        normalization_paths = paths.size();

    const auto K = static_cast<Eigen::Index>(paths.size());
    ComplexMatrix Hr(static_cast<Eigen::Index>(rx.num_elements), K);
    ComplexMatrix Ht(static_cast<Eigen::Index>(tx.num_elements), K);
    ComplexVector gains(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const auto &p = paths[static_cast<std::size_t>(k)];
        Hr.col(k) = array_response(rx, p.aoa);
        Ht.col(k) = array_response(tx, p.aod);
        gains(k) = p.gain;
    }
    const double scale = std::sqrt(static_cast<double>(tx.num_elements * rx.num_elements) /
                                   static_cast<double>(normalization_paths));
    return scale * (Hr * gains.asDiagonal() * Ht.adjoint());
}

} // namespace mmfb
