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

#include "mmfb/benchmarks.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mmfb
{

SparsePrecoder sparse_precoder(const Precoder &f_opt, const SparsePrecoderConfig &cfg, const Dictionary &dict)
{
    if (dict.spec().gamma != 1)
        throw std::invalid_argument("sparse_precoder: the RF dictionary must be single-beam");
    if (cfg.num_rf_chains < static_cast<std::size_t>(f_opt.streams()))
        throw std::invalid_argument("sparse_precoder: fewer RF chains than streams");
    if (cfg.num_rf_chains > dict.spec().codebook.size())
        throw std::invalid_argument("sparse_precoder: more RF chains than codebook angles");

    const OmpResult omp = omp_approximate(f_opt, dict, cfg.num_rf_chains);

    SparsePrecoder out;
    out.angle_indices = omp.indices;
    out.rf = dict.columns(omp.indices);
    out.baseband = omp.combining;
    if (cfg.unitary_baseband)
    {
        out.baseband = structure_combining(out.baseband, CombiningStructure::unitary);
        out.baseband /= (out.rf * out.baseband).norm();
    }
    return out;
}

SparsePrecoder sparse_precoder(const Precoder &f_opt, const SparsePrecoderConfig &cfg)
{
    return sparse_precoder(f_opt, cfg, Dictionary(BasisSpec{cfg.codebook, 1, cfg.tx}));
}

MultilevelCsiConfig make_multilevel_config(const ChannelConfig &channel, std::size_t num_paths,
                                           std::size_t codebook_size, ComplexCodebook coefficients)
{
    return MultilevelCsiConfig{num_paths,
                               AngleCodebook(channel.tx_sector, codebook_size),
                               AngleCodebook(channel.rx_sector, codebook_size),
                               coefficients,
                               channel.tx,
                               channel.rx};
}

ComplexMatrix multilevel_csi_feedback(const ChannelRealization &ch, const MultilevelCsiConfig &cfg)
{
    if (cfg.num_paths == 0 || cfg.num_paths > ch.paths.size())
        throw std::invalid_argument("multilevel_csi_feedback: K must lie in [1, number of paths]");
    if (cfg.aod_codebook.size() != cfg.aoa_codebook.size())
        throw std::invalid_argument("multilevel_csi_feedback: AoD and AoA codebooks must have the same size");
    validate(cfg.coefficients);

    std::vector<std::size_t> order(ch.paths.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(ch.paths[a].gain) > std::abs(ch.paths[b].gain);
    });
    order.resize(cfg.num_paths);

    double scale = 0.0;
    for (std::size_t i : order)
        scale = std::max(scale, std::abs(ch.paths[i].gain));

    std::vector<PathComponent> fed_back;
    fed_back.reserve(order.size());
    for (std::size_t i : order)
    {
        const PathComponent &p = ch.paths[i];
        PathComponent q;
        q.aod = cfg.aod_codebook.center(cfg.aod_codebook.quantize(p.aod));
        q.aoa = cfg.aoa_codebook.center(cfg.aoa_codebook.quantize(p.aoa));
        q.gain = cfg.coefficients.is_ideal() ? p.gain : cfg.coefficients.decode(cfg.coefficients.encode(p.gain, scale), scale);
        fed_back.push_back(q);
    }
    return reconstruct_from_paths(fed_back, cfg.tx, cfg.rx, ch.paths.size());
}

} // namespace mmfb
