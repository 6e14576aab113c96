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

#include "mmfb/experiment.hpp"

#include "mmfb/benchmarks.hpp"
#include "mmfb/evaluation.hpp"
#include "mmfb/precoding.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <mutex>
#include <optional>
#include <thread>

namespace mmfb
{

namespace
{

constexpr std::uint64_t channel_stream = 0;
constexpr std::uint64_t link_stream = 1;

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Read-only per-scheme state shared by every trial.
struct PreparedScheme
{
    SchemeSpec spec;
    std::optional<Dictionary> dictionary;
    std::optional<SparsePrecoderConfig> sparse;
    std::optional<MultilevelCsiConfig> multilevel;
};

std::vector<PreparedScheme> prepare(const ExperimentConfig &cfg)
{
    std::vector<PreparedScheme> out;
    for (const SchemeSpec &s : cfg.schemes)
    {
        PreparedScheme p{s, std::nullopt, std::nullopt, std::nullopt};
        switch (s.kind)
        {
        case SchemeKind::optimal:
            break;
        case SchemeKind::proposed:
            p.dictionary.emplace(
                BasisSpec{AngleCodebook(cfg.channel.tx_sector, s.angle_codebook_size), s.gamma, cfg.channel.tx});
            break;
        case SchemeKind::sparse: {
            const AngleCodebook cb(cfg.channel.tx_sector, s.angle_codebook_size);
            p.dictionary.emplace(BasisSpec{cb, 1, cfg.channel.tx});
            p.sparse = SparsePrecoderConfig{s.k, cb, cfg.channel.tx, s.unitary_baseband};
            break;
        }
        case SchemeKind::multilevel:
            p.multilevel = make_multilevel_config(cfg.channel, s.k, s.angle_codebook_size, s.coefficients);
            break;
        }
        out.push_back(std::move(p));
    }
    return out;
}

Precoder scheme_precoder(const PreparedScheme &p, const ChannelRealization &ch, const Precoder &f_opt,
                         std::size_t streams, const PowerAllocation &alloc)
{
    switch (p.spec.kind)
    {
    case SchemeKind::optimal:
        return f_opt;
    case SchemeKind::proposed: {
        const FeedbackReport report =
            build_report(f_opt, *p.dictionary, p.spec.k, FeedbackOptions{p.spec.coefficients, p.spec.structure});
        return reconstruct_precoder(report, p.dictionary->spec());
    }
    case SchemeKind::sparse:
        return sparse_precoder(f_opt, *p.sparse, *p.dictionary).precoder();
    case SchemeKind::multilevel:
        return optimal_precoder(multilevel_csi_feedback(ch, *p.multilevel), streams, alloc);
    }
    throw std::logic_error("unknown scheme kind");
}

/// Precoders of every scheme for one channel; outer index is the SNR point
/// when the allocation depends on SNR, otherwise a single entry.
std::vector<std::vector<Precoder>> trial_precoders(const ExperimentConfig &cfg,
                                                   const std::vector<PreparedScheme> &schemes,
                                                   const ChannelRealization &ch)
{
    const bool per_snr = cfg.allocation == AllocationMode::water_filling;
    const std::size_t points = per_snr ? cfg.snr_db_grid.size() : 1;
    std::vector<std::vector<Precoder>> out(points);
    for (std::size_t i = 0; i < points; ++i)
    {
        const PowerAllocation alloc{cfg.allocation, per_snr ? db_to_linear(cfg.snr_db_grid[i]) : 1.0, 1.0};
        const Precoder f_opt = optimal_precoder(ch.matrix, cfg.streams, alloc);
        for (const auto &s : schemes)
            out[i].push_back(scheme_precoder(s, ch, f_opt, cfg.streams, alloc));
    }
    return out;
}

template <typename Result, typename Fn>
std::vector<Result> run_trials(std::size_t trials, std::size_t workers, Fn fn)
{
    std::vector<Result> results(trials);
    if (workers == 0)
        workers = std::max(1U, std::thread::hardware_concurrency());
    workers = std::min(workers, trials);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t t = next.fetch_add(1);
            if (t >= trials)
                return;
            try
            {
                results[t] = fn(t);
            }
            catch (...)
            {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(trials);
                return;
            }
        }
    };

    if (workers <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return results;
}

void write_header(std::ostream &os, const ExperimentConfig &cfg, const char *what)
{
    os << "# mmfb " << what << "\n";
    os << "# seed: " << cfg.seed << "\n";
    // The worker count only changes scheduling, leave it out so that output
    // is byte-identical across parallelism levels.
    nlohmann::json resolved = to_json(cfg);
    resolved.erase("workers");
    os << "# config: " << resolved.dump() << "\n";
}

struct MeanStderr
{
    double mean = 0.0;
    double stderr_value = 0.0;
};

MeanStderr mean_stderr(const std::vector<double> &v)
{
    MeanStderr out;
    if (v.empty())
        return out;
    double sum = 0.0;
    for (double x : v)
        sum += x;
    out.mean = sum / static_cast<double>(v.size());
    if (v.size() > 1)
    {
        double ss = 0.0;
        for (double x : v)
            ss += (x - out.mean) * (x - out.mean);
        out.stderr_value = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return out;
}

} // namespace

OverheadBits scheme_feedback_bits(const SchemeSpec &s, std::size_t streams)
{
    if (s.kind == SchemeKind::optimal)
        return {};
    const std::size_t angle_bits = exact_log2(s.angle_codebook_size);
    const bool ideal = s.coefficients.is_ideal();
    const std::size_t cc_bits = ideal ? 0 : s.coefficients.bits();
    switch (s.kind)
    {
    case SchemeKind::proposed:
        if (s.structure == CombiningStructure::selection)
            return {s.k * angle_bits, ideal ? 0 : s.k * (index_bits(streams) + cc_bits)};
        return {s.k * angle_bits, s.k * streams * cc_bits};
    case SchemeKind::sparse:
        return {s.k * angle_bits, s.k * streams * cc_bits};
    case SchemeKind::multilevel:
        return {2 * s.k * angle_bits, s.k * cc_bits};
    case SchemeKind::optimal:
        break;
    }
    return {};
}

std::vector<RateRow> run_rate_sweep(const ExperimentConfig &cfg)
{
    validate(cfg);
    const auto schemes = prepare(cfg);
    const std::size_t n_snr = cfg.snr_db_grid.size();

    using TrialRates = std::vector<std::vector<double>>;  // [scheme][snr]
    const auto per_trial = run_trials<TrialRates>(cfg.trials, cfg.workers, [&](std::size_t t) {
        RandomStream rng = RandomStream::substream(cfg.seed, {t, channel_stream});
        const ChannelRealization ch = sample_channel(cfg.channel, rng);
        const auto precoders = trial_precoders(cfg, schemes, ch);
        TrialRates rates(schemes.size(), std::vector<double>(n_snr));
        for (std::size_t s = 0; s < schemes.size(); ++s)
            for (std::size_t i = 0; i < n_snr; ++i)
            {
                const Precoder &F = precoders[precoders.size() == 1 ? 0 : i][s];
                rates[s][i] = achievable_rate(ch.matrix, F.matrix, db_to_linear(cfg.snr_db_grid[i]));
            }
        return rates;
    });

    std::vector<RateRow> rows;
    for (std::size_t s = 0; s < schemes.size(); ++s)
        for (std::size_t i = 0; i < n_snr; ++i)
        {
            std::vector<double> samples;
            samples.reserve(cfg.trials);
            for (const auto &tr : per_trial)
                samples.push_back(tr[s][i]);
            const MeanStderr ms = mean_stderr(samples);
            rows.push_back({schemes[s].spec.name(), cfg.snr_db_grid[i], ms.mean, ms.stderr_value,
                            scheme_feedback_bits(schemes[s].spec, cfg.streams)});
        }
    return rows;
}

std::vector<BerRow> run_ber_sweep(const ExperimentConfig &cfg)
{
    validate(cfg);
    const auto schemes = prepare(cfg);
    const std::size_t n_snr = cfg.snr_db_grid.size();

    using TrialCounts = std::vector<std::vector<BitErrorCount>>;  // [scheme][snr]
    const auto per_trial = run_trials<TrialCounts>(cfg.trials, cfg.workers, [&](std::size_t t) {
        RandomStream rng = RandomStream::substream(cfg.seed, {t, channel_stream});
        const ChannelRealization ch = sample_channel(cfg.channel, rng);
        const auto precoders = trial_precoders(cfg, schemes, ch);
        TrialCounts counts(schemes.size(), std::vector<BitErrorCount>(n_snr));
        for (std::size_t s = 0; s < schemes.size(); ++s)
            for (std::size_t i = 0; i < n_snr; ++i)
            {
                const Precoder &F = precoders[precoders.size() == 1 ? 0 : i][s];
                RandomStream link = RandomStream::substream(cfg.seed, {t, link_stream, i});
                counts[s][i] = ber_qpsk_mmse(ch.matrix, F.matrix, db_to_linear(cfg.snr_db_grid[i]),
                                             cfg.symbols_per_trial, link);
            }
        return counts;
    });

    std::vector<BerRow> rows;
    for (std::size_t s = 0; s < schemes.size(); ++s)
        for (std::size_t i = 0; i < n_snr; ++i)
        {
            BitErrorCount total;
            std::vector<double> samples;
            samples.reserve(cfg.trials);
            for (const auto &tr : per_trial)
            {
                total += tr[s][i];
                samples.push_back(tr[s][i].ber());
            }
            const MeanStderr ms = mean_stderr(samples);
            rows.push_back({schemes[s].spec.name(), cfg.snr_db_grid[i], total.ber(), ms.stderr_value,
                            total.bit_errors, total.bits_sent, scheme_feedback_bits(schemes[s].spec, cfg.streams)});
        }
    return rows;
}

BeamPatternTable run_beam_pattern(const ExperimentConfig &cfg)
{
    validate(cfg);
    const BeamPatternConfig &bp = cfg.beam_pattern;
    const AngleCodebook cb(bp.sector, bp.angle_codebook_size);

    BeamPatternTable table;
    table.gammas = bp.gammas;
    table.sub_sector = {bp.center_angle - 0.5 * cb.resolution(), bp.center_angle + 0.5 * cb.resolution()};
    for (std::size_t g : bp.gammas)
    {
        const BeamPattern pattern = beam_pattern_at(BasisSpec{cb, g, cfg.channel.tx}, bp.center_angle, bp.grid_size);
        table.angles = pattern.angles;
        table.gains.push_back(pattern.gain);
    }
    return table;
}

std::vector<OverheadRow> run_overhead_table(const ExperimentConfig &cfg)
{
    validate(cfg);
    const OverheadTableConfig &ot = cfg.overhead;
    OverheadParams p;
    p.tx_antennas = cfg.channel.tx.num_elements;
    p.rx_antennas = cfg.channel.rx.num_elements;
    p.streams = cfg.streams;
    p.rf_chains = ot.rf_chains;
    p.angle_codebook_size = ot.angle_codebook_size;
    p.coeff_codebook_size = ot.coeff_codebook_size;

    std::vector<OverheadRow> rows;
    rows.push_back({"direct_H", "-", overhead_bits(FeedbackScheme::direct_H, p)});
    rows.push_back({"direct_F", "-", overhead_bits(FeedbackScheme::direct_F, p)});
    rows.push_back({"sparse_precoder", "Q=" + std::to_string(ot.rf_chains),
                    overhead_bits(FeedbackScheme::sparse_precoder, p)});
    for (const FeedbackScheme scheme : {FeedbackScheme::multilevel_csi, FeedbackScheme::proposed})
        for (std::size_t k : ot.k_values)
        {
            p.num_angles = k;
            rows.push_back({to_string(scheme), "K=" + std::to_string(k), overhead_bits(scheme, p)});
        }
    return rows;
}

void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<RateRow> &rows)
{
    write_header(os, cfg, "rate sweep");
    os << "scheme,snr_db,mean_rate,stderr,feedback_angle_bits,feedback_amplitude_bits\n";
    for (const auto &r : rows)
        os << r.scheme << ',' << fmt(r.snr_db) << ',' << fmt(r.mean_rate) << ',' << fmt(r.stderr_rate) << ','
           << r.feedback.angle_bits << ',' << r.feedback.amplitude_bits << '\n';
}

void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<BerRow> &rows)
{
    write_header(os, cfg, "ber sweep");
    os << "scheme,snr_db,ber,stderr,bit_errors,bits_sent,feedback_angle_bits,feedback_amplitude_bits\n";
    for (const auto &r : rows)
        os << r.scheme << ',' << fmt(r.snr_db) << ',' << fmt(r.ber) << ',' << fmt(r.stderr_ber) << ','
           << r.bit_errors << ',' << r.bits_sent << ',' << r.feedback.angle_bits << ','
           << r.feedback.amplitude_bits << '\n';
}

void write_csv(std::ostream &os, const ExperimentConfig &cfg, const BeamPatternTable &table)
{
    write_header(os, cfg, "beam pattern");
    os << "# sub_sector: " << fmt(table.sub_sector.lo) << ',' << fmt(table.sub_sector.hi) << "\n";
    os << "angle_rad";
    for (auto g : table.gammas)
        os << ",g_gamma" << g;
    os << '\n';
    for (std::size_t i = 0; i < table.angles.size(); ++i)
    {
        os << fmt(table.angles[i]);
        for (const auto &col : table.gains)
            os << ',' << fmt(col[i]);
        os << '\n';
    }
}

void write_csv(std::ostream &os, const ExperimentConfig &cfg, const std::vector<OverheadRow> &rows)
{
    write_header(os, cfg, "feedback overhead");
    os << "scheme,parameter,angle_bits,amplitude_bits,total_bits\n";
    for (const auto &r : rows)
        os << r.scheme << ',' << r.parameter << ',' << r.bits.angle_bits << ',' << r.bits.amplitude_bits << ','
           << r.bits.total() << '\n';
}

namespace
{

template <typename Row, typename Value>
void summary_table(std::ostream &os, const std::vector<Row> &rows, const char *quantity, Value value)
{
    std::vector<std::string> schemes;
    std::vector<double> snrs;
    for (const auto &r : rows)
    {
        if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end())
            schemes.push_back(r.scheme);
        if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end())
            snrs.push_back(r.snr_db);
    }
    std::size_t width = 10;
    for (const auto &s : schemes)
        width = std::max(width, s.size() + 2);

    os << quantity << " by SNR [dB]\n" << std::left << std::setw(static_cast<int>(width)) << "scheme";
    for (double snr : snrs)
        os << std::right << std::setw(11) << fmt(snr);
    os << '\n';
    for (const auto &s : schemes)
    {
        os << std::left << std::setw(static_cast<int>(width)) << s;
        for (const auto &r : rows)
            if (r.scheme == s)
                os << std::right << std::setw(11) << fmt(value(r));
        os << '\n';
    }
}

} // namespace

void write_summary(std::ostream &os, const std::vector<RateRow> &rows)
{
    summary_table(os, rows, "mean achievable rate [bit/s/Hz]", [](const RateRow &r) {
        return std::round(r.mean_rate * 1000.0) / 1000.0;
    });
}

void write_summary(std::ostream &os, const std::vector<BerRow> &rows)
{
    summary_table(os, rows, "uncoded QPSK BER", [](const BerRow &r) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", r.ber);
        return std::stod(buf);
    });
}

std::vector<double> rate_curve(const std::vector<RateRow> &rows, const std::string &scheme)
{
    std::vector<double> out;
    for (const auto &r : rows)
        if (r.scheme == scheme)
            out.push_back(r.mean_rate);
    return out;
}

std::vector<double> ber_curve(const std::vector<BerRow> &rows, const std::string &scheme)
{
    std::vector<double> out;
    for (const auto &r : rows)
        if (r.scheme == scheme)
            out.push_back(r.ber);
    return out;
}

std::optional<double> crossing_snr_db(const std::vector<double> &snr_db, const std::vector<double> &values,
                                      double target, bool log_scale)
{
    if (snr_db.size() != values.size() || snr_db.size() < 2)
        return std::nullopt;
    auto f = [&](double v) { return log_scale ? std::log10(std::max(v, 1e-300)) : v; };
    const double tgt = f(target);
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
    {
        const double a = f(values[i]) - tgt;
        const double b = f(values[i + 1]) - tgt;
        if (a == 0.0)
            return snr_db[i];
        if ((a < 0.0) != (b < 0.0) || b == 0.0)
            return snr_db[i] + (snr_db[i + 1] - snr_db[i]) * a / (a - b);
    }
    return std::nullopt;
}

} // namespace mmfb
