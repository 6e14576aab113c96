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

#include "mmfb/experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mmfb
{

using nlohmann::json;

namespace
{

const char *to_string(SchemeKind kind)
{
    switch (kind)
    {
    case SchemeKind::optimal:
        return "optimal";
    case SchemeKind::proposed:
        return "proposed";
    case SchemeKind::sparse:
        return "sparse";
    case SchemeKind::multilevel:
        return "multilevel";
    }
    return "unknown";
}

const char *to_string(CombiningStructure s)
{
    switch (s)
    {
    case CombiningStructure::general:
        return "general";
    case CombiningStructure::unitary:
        return "unitary";
    case CombiningStructure::selection:
        return "selection";
    }
    return "unknown";
}

json coefficients_to_json(const ComplexCodebook &cc)
{
    if (cc.is_ideal())
        return "ideal";
    return json{{"magnitude_levels", cc.magnitude_levels}, {"phase_levels", cc.phase_levels}};
}

json interval_to_json(const AngleInterval &s)
{
    return json::array({s.lo, s.hi});
}

// Reads typed values out of a JSON object and rejects keys nobody asked for.
class ObjectReader
{
  public:
    ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError(path_.empty() ? "config root must be an object" : path_ + ": expected an object");
    }

    template <typename T>
    void read(const std::string &key, T &out)
    {
        seen_.insert(key);
        if (!obj_.contains(key))
            return;
        try
        {
            const json &v = obj_.at(key);
            if constexpr (std::is_same_v<T, bool>)
            {
                if (!v.is_boolean())
                    throw ConfigError(field(key) + ": expected true or false");
            }
            else if constexpr (std::is_unsigned_v<T>)
            {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                    throw ConfigError(field(key) + ": expected a non-negative integer");
            }
            else if constexpr (std::is_floating_point_v<T>)
            {
                if (!v.is_number())
                    throw ConfigError(field(key) + ": expected a number");
            }
            out = v.get<T>();
        }
        catch (const json::exception &e)
        {
            throw ConfigError(field(key) + ": " + e.what());
        }
    }

    const json *child(const std::string &key)
    {
        seen_.insert(key);
        return obj_.contains(key) ? &obj_.at(key) : nullptr;
    }

    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(field(it.key()) + ": unknown key");
    }

  private:
    const json &obj_;
    std::string path_;
    std::set<std::string> seen_;
};

AngleInterval interval_from_json(const json &j, const std::string &field)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(field + ": expected [lo, hi] in radians");
    return {j[0].get<double>(), j[1].get<double>()};
}

ComplexCodebook coefficients_from_json(const json &j, const std::string &field)
{
    if (j.is_string())
    {
        if (j.get<std::string>() != "ideal")
            throw ConfigError(field + ": expected \"ideal\" or {magnitude_levels, phase_levels}");
        return ComplexCodebook::ideal();
    }
    ObjectReader r(j, field);
    ComplexCodebook cc{CoefficientQuantization::uniform_polar, 16, 16};
    r.read("magnitude_levels", cc.magnitude_levels);
    r.read("phase_levels", cc.phase_levels);
    r.finish();
    return cc;
}

SchemeSpec scheme_from_json(const json &j, const std::string &field)
{
    ObjectReader r(j, field);
    SchemeSpec s;
    std::string type;
    r.read("type", type);
    if (type == "optimal")
        s.kind = SchemeKind::optimal;
    else if (type == "proposed")
        s.kind = SchemeKind::proposed;
    else if (type == "sparse")
        s.kind = SchemeKind::sparse;
    else if (type == "multilevel")
        s.kind = SchemeKind::multilevel;
    else
        throw ConfigError(r.field("type") + ": expected optimal, proposed, sparse or multilevel");

    if (s.kind == SchemeKind::sparse)
    {
        s.k = 8;
        r.read("Q", s.k);
    }
    else
        r.read("K", s.k);
    r.read("gamma", s.gamma);
    r.read("angle_codebook", s.angle_codebook_size);
    r.read("label", s.label);
    r.read("unitary_baseband", s.unitary_baseband);
    if (const json *c = r.child("coefficients"))
        s.coefficients = coefficients_from_json(*c, r.field("coefficients"));
    std::string structure = "general";
    r.read("structure", structure);
    if (structure == "general")
        s.structure = CombiningStructure::general;
    else if (structure == "unitary")
        s.structure = CombiningStructure::unitary;
    else if (structure == "selection")
        s.structure = CombiningStructure::selection;
    else
        throw ConfigError(r.field("structure") + ": expected general, unitary or selection");
    r.finish();
    return s;
}

json scheme_to_json(const SchemeSpec &s)
{
    json j{{"type", to_string(s.kind)}};
    if (s.kind == SchemeKind::optimal)
        return j;
    j[s.kind == SchemeKind::sparse ? "Q" : "K"] = s.k;
    j["angle_codebook"] = s.angle_codebook_size;
    j["coefficients"] = coefficients_to_json(s.coefficients);
    if (s.kind == SchemeKind::proposed)
    {
        j["gamma"] = s.gamma;
        j["structure"] = to_string(s.structure);
    }
    if (s.kind == SchemeKind::sparse)
        j["unitary_baseband"] = s.unitary_baseband;
    if (!s.label.empty())
        j["label"] = s.label;
    return j;
}

std::vector<double> snr_grid_from_json(const json &j, const std::string &field)
{
    std::vector<double> grid;
    if (j.is_array())
    {
        for (const auto &v : j)
        {
            if (!v.is_number())
                throw ConfigError(field + ": expected numbers");
            grid.push_back(v.get<double>());
        }
        return grid;
    }
    ObjectReader r(j, field);
    double start = -20.0, stop = 10.0, step = 2.5;
    r.read("start", start);
    r.read("stop", stop);
    r.read("step", step);
    r.finish();
    if (!(step > 0.0) || stop < start)
        throw ConfigError(field + ": need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i)
        grid.push_back(start + step * static_cast<double>(i));
    return grid;
}

} // namespace

std::string SchemeSpec::name() const
{
    if (!label.empty())
        return label;
    std::ostringstream os;
    switch (kind)
    {
    case SchemeKind::optimal:
        return "optimal";
    case SchemeKind::proposed:
        os << "proposed_K" << k << "_G" << gamma << "_C" << angle_codebook_size;
        break;
    case SchemeKind::sparse:
        os << "sparse_Q" << k << "_C" << angle_codebook_size;
        break;
    case SchemeKind::multilevel:
        os << "multilevel_K" << k << "_C" << angle_codebook_size;
        break;
    }
    if (!coefficients.is_ideal())
        os << "_q" << coefficients.magnitude_levels << "x" << coefficients.phase_levels;
    if (kind == SchemeKind::proposed && structure != CombiningStructure::general)
        os << "_" << to_string(structure);
    return os.str();
}

ExperimentConfig default_config()
{
    ExperimentConfig cfg;
    auto proposed = [](std::size_t k) {
        SchemeSpec s;
        s.kind = SchemeKind::proposed;
        s.k = k;
        return s;
    };
    SchemeSpec sparse;
    sparse.kind = SchemeKind::sparse;
    sparse.k = 8;
    SchemeSpec multilevel;
    multilevel.kind = SchemeKind::multilevel;
    multilevel.k = 8;

    cfg.schemes = {SchemeSpec{}, proposed(6), proposed(8), proposed(16), sparse, multilevel};
    for (int i = 0; i <= 12; ++i)
        cfg.snr_db_grid.push_back(-20.0 + 2.5 * i);
    return cfg;
}

void validate(const ExperimentConfig &cfg)
{
    try
    {
        validate(cfg.channel);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("channel: ") + e.what());
    }

    const std::size_t M = cfg.channel.tx.num_elements;
    const std::size_t N = cfg.channel.rx.num_elements;
    if (cfg.streams < 1 || cfg.streams > std::min(M, N))
        throw ConfigError("streams: must lie in [1, min(tx_antennas, rx_antennas)]");
    if (cfg.streams > 0xFF)
        throw ConfigError("streams: at most 255");
    if (cfg.trials < 1)
        throw ConfigError("trials: must be at least 1");
    if (cfg.symbols_per_trial < 1)
        throw ConfigError("symbols_per_trial: must be at least 1");
    if (cfg.snr_db_grid.empty())
        throw ConfigError("snr_db: grid must not be empty");
    for (double v : cfg.snr_db_grid)
        if (!std::isfinite(v))
            throw ConfigError("snr_db: values must be finite");
    if (cfg.schemes.empty())
        throw ConfigError("schemes: list must not be empty");

    std::set<std::string> names;
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    {
        const SchemeSpec &s = cfg.schemes[i];
        const std::string f = "schemes[" + std::to_string(i) + "]";
        if (!names.insert(s.name()).second)
            throw ConfigError(f + ": duplicate scheme name " + s.name());
        if (s.kind == SchemeKind::optimal)
            continue;
        if (s.angle_codebook_size == 0 || (s.angle_codebook_size & (s.angle_codebook_size - 1)) != 0)
            throw ConfigError(f + ".angle_codebook: must be a power of two");
        if (s.angle_codebook_size > 0xFFFF)
            throw ConfigError(f + ".angle_codebook: at most 65536");
        try
        {
            mmfb::validate(s.coefficients);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(f + ".coefficients: " + e.what());
        }
        switch (s.kind)
        {
        case SchemeKind::proposed:
            if (s.k < 1 || s.k > s.angle_codebook_size)
                throw ConfigError(f + ".K: must lie in [1, angle_codebook]");
            if (s.k > M)
                throw ConfigError(f + ".K: must not exceed tx_antennas");
            if (s.gamma < 1 || s.gamma > 0xFF)
                throw ConfigError(f + ".gamma: must lie in [1, 255]");
            if (s.structure == CombiningStructure::unitary && s.k < cfg.streams)
                throw ConfigError(f + ".structure: unitary combining needs K >= streams");
            break;
        case SchemeKind::sparse:
            if (s.k < cfg.streams)
                throw ConfigError(f + ".Q: must be at least the number of streams");
            if (s.k > s.angle_codebook_size || s.k > M)
                throw ConfigError(f + ".Q: must not exceed angle_codebook or tx_antennas");
            break;
        case SchemeKind::multilevel:
            if (s.k < 1 || s.k > cfg.channel.num_paths())
                throw ConfigError(f + ".K: must lie in [1, clusters * rays]");
            break;
        case SchemeKind::optimal:
            break;
        }
    }

    const BeamPatternConfig &bp = cfg.beam_pattern;
    if (bp.gammas.empty())
        throw ConfigError("beam_pattern.gammas: list must not be empty");
    for (auto g : bp.gammas)
        if (g < 1)
            throw ConfigError("beam_pattern.gammas: values must be at least 1");
    if (bp.grid_size < 64)
        throw ConfigError("beam_pattern.grid_size: must be at least 64");
    if (bp.angle_codebook_size == 0 || (bp.angle_codebook_size & (bp.angle_codebook_size - 1)) != 0)
        throw ConfigError("beam_pattern.angle_codebook: must be a power of two");
    if (!(bp.sector.hi > bp.sector.lo))
        throw ConfigError("beam_pattern.sector: must be a non-empty interval");

    const OverheadTableConfig &ot = cfg.overhead;
    auto pow2 = [](std::size_t n) { return n != 0 && (n & (n - 1)) == 0; };
    if (!pow2(ot.angle_codebook_size))
        throw ConfigError("overhead.angle_codebook: must be a power of two");
    if (!pow2(ot.coeff_codebook_size))
        throw ConfigError("overhead.coeff_codebook: must be a power of two");
    if (ot.k_values.empty())
        throw ConfigError("overhead.K: list must not be empty");
}

json to_json(const ExperimentConfig &cfg)
{
    json schemes = json::array();
    for (const auto &s : cfg.schemes)
        schemes.push_back(scheme_to_json(s));

    const ChannelConfig &c = cfg.channel;
    return json{
        {"channel",
         {{"tx_antennas", c.tx.num_elements},
          {"rx_antennas", c.rx.num_elements},
          {"tx_spacing", c.tx.spacing_over_wavelength},
          {"rx_spacing", c.rx.spacing_over_wavelength},
          {"clusters", c.num_clusters},
          {"rays_per_cluster", c.rays_per_cluster},
          {"tx_sector", interval_to_json(c.tx_sector)},
          {"rx_sector", interval_to_json(c.rx_sector)},
          {"angular_spread", c.angular_spread}}},
        {"streams", cfg.streams},
        {"allocation", cfg.allocation == AllocationMode::unitary ? "unitary" : "water_filling"},
        {"schemes", schemes},
        {"snr_db", cfg.snr_db_grid},
        {"trials", cfg.trials},
        {"symbols_per_trial", cfg.symbols_per_trial},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
        {"beam_pattern",
         {{"gammas", cfg.beam_pattern.gammas},
          {"grid_size", cfg.beam_pattern.grid_size},
          {"angle_codebook", cfg.beam_pattern.angle_codebook_size},
          {"sector", interval_to_json(cfg.beam_pattern.sector)},
          {"center_angle", cfg.beam_pattern.center_angle}}},
        {"overhead",
         {{"Q", cfg.overhead.rf_chains},
          {"K", cfg.overhead.k_values},
          {"angle_codebook", cfg.overhead.angle_codebook_size},
          {"coeff_codebook", cfg.overhead.coeff_codebook_size}}},
    };
}

ExperimentConfig config_from_json(const json &j)
{
    ExperimentConfig cfg = default_config();
    ObjectReader root(j, "");

    if (const json *ch = root.child("channel"))
    {
        ObjectReader r(*ch, "channel");
        ChannelConfig &c = cfg.channel;
        r.read("tx_antennas", c.tx.num_elements);
        r.read("rx_antennas", c.rx.num_elements);
        r.read("tx_spacing", c.tx.spacing_over_wavelength);
        r.read("rx_spacing", c.rx.spacing_over_wavelength);
        r.read("clusters", c.num_clusters);
        r.read("rays_per_cluster", c.rays_per_cluster);
        if (const json *s = r.child("tx_sector"))
            c.tx_sector = interval_from_json(*s, "channel.tx_sector");
        if (const json *s = r.child("rx_sector"))
            c.rx_sector = interval_from_json(*s, "channel.rx_sector");
        r.read("angular_spread", c.angular_spread);
        r.finish();
    }

    root.read("streams", cfg.streams);
    std::string allocation = cfg.allocation == AllocationMode::unitary ? "unitary" : "water_filling";
    root.read("allocation", allocation);
    if (allocation == "unitary")
        cfg.allocation = AllocationMode::unitary;
    else if (allocation == "water_filling")
        cfg.allocation = AllocationMode::water_filling;
    else
        throw ConfigError("allocation: expected unitary or water_filling");

    if (const json *s = root.child("schemes"))
    {
        if (!s->is_array())
            throw ConfigError("schemes: expected a list");
        cfg.schemes.clear();
        for (std::size_t i = 0; i < s->size(); ++i)
            cfg.schemes.push_back(scheme_from_json((*s)[i], "schemes[" + std::to_string(i) + "]"));
    }
    if (const json *g = root.child("snr_db"))
        cfg.snr_db_grid = snr_grid_from_json(*g, "snr_db");

    root.read("trials", cfg.trials);
    root.read("symbols_per_trial", cfg.symbols_per_trial);
    root.read("seed", cfg.seed);
    root.read("workers", cfg.workers);

    if (const json *bp = root.child("beam_pattern"))
    {
        ObjectReader r(*bp, "beam_pattern");
        r.read("gammas", cfg.beam_pattern.gammas);
        r.read("grid_size", cfg.beam_pattern.grid_size);
        r.read("angle_codebook", cfg.beam_pattern.angle_codebook_size);
        if (const json *s = r.child("sector"))
            cfg.beam_pattern.sector = interval_from_json(*s, "beam_pattern.sector");
        r.read("center_angle", cfg.beam_pattern.center_angle);
        r.finish();
    }
    if (const json *ot = root.child("overhead"))
    {
        ObjectReader r(*ot, "overhead");
        r.read("Q", cfg.overhead.rf_chains);
        r.read("K", cfg.overhead.k_values);
        r.read("angle_codebook", cfg.overhead.angle_codebook_size);
        r.read("coeff_codebook", cfg.overhead.coeff_codebook_size);
        r.finish();
    }
    root.finish();

    validate(cfg);
    return cfg;
}

json load_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    try
    {
        return json::parse(in, nullptr, true, /*ignore_comments=*/true);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_override(json &tree, const std::string &assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "': expected key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try
    {
        value = json::parse(text);
    }
    catch (const json::parse_error &)
    {
        value = text;
    }

    json *node = &tree;
    std::size_t start = 0;
    while (true)
    {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw ConfigError("override '" + assignment + "': empty key component");
        if (!node->is_object())
        {
            if (!node->is_null())
                throw ConfigError("override '" + assignment + "': " + part + " is not inside an object");
            *node = json::object();
        }
        if (dot == std::string::npos)
        {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

} // namespace mmfb
