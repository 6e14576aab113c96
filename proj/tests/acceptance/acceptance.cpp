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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Tolerances are fixed below.

#include "mmfb/benchmarks.hpp"
#include "mmfb/evaluation.hpp"
#include "mmfb/experiment.hpp"
#include "mmfb/hybrid.hpp"
#include "mmfb/precoding.hpp"
#include "support.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace mmfb;

namespace
{

// Pinned tolerances.
constexpr double hybrid_error_tol = 1e-10;
constexpr double hybrid_modulus_tol = 1e-12;
constexpr double equivalence_tol = 1e-12;
constexpr double rate_shift_target_db = 2.0;
constexpr double rate_shift_tol_db = 1.0;
constexpr double rate_target_bps_hz = 16.0;
constexpr double ber_target = 1e-2;
constexpr double ber_shift_target_db = 3.0;
constexpr double ber_shift_tol_db = 1.5;
constexpr double ber_to_optimal_tol_db = 1.5;
constexpr double gamma_gap_db = 0.5;
constexpr double asymptotic_rate_ratio = 0.98;
constexpr double water_fill_grid_tol = 1e-3;
constexpr double rate_oracle_tol = 1e-9;
constexpr double ber_noise_tol = 0.02;

struct Outcome
{
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char *title, const std::function<Outcome()> &body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
        o = body();
    }
    catch (const std::exception &e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass)
        ++failures;
    std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char *f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string db(const std::optional<double> &v)
{
    return v ? fmt("%.2f dB", *v) : std::string("n/a");
}

SchemeSpec proposed(std::size_t k, std::size_t gamma = 1, std::size_t codebook = 256)
{
    SchemeSpec s;
    s.kind = SchemeKind::proposed;
    s.k = k;
    s.gamma = gamma;
    s.angle_codebook_size = codebook;
    return s;
}

template <typename Rows>
std::string to_csv(const ExperimentConfig &cfg, const Rows &rows)
{
    std::ostringstream os;
    write_csv(os, cfg, rows);
    return os.str();
}

// Reference configuration at desk scale: 200 trials, 10^3 symbols per trial.
ExperimentConfig reference_config()
{
    ExperimentConfig cfg = default_config();
    cfg.trials = 200;
    cfg.symbols_per_trial = 1000;
    cfg.workers = 1;
    return cfg;
}

Outcome hybrid_exactness()
{
    RandomStream rng(derive_seed(101, {}));
    double worst_err = 0.0, worst_mod = 0.0;
    for (int rep = 0; rep < 1000; ++rep)
    {
        const auto M = static_cast<Eigen::Index>(1 + rng.uniform(0.0, 1.0) * 127.999);
        const auto S = static_cast<Eigen::Index>(1 + rep % 4);
        ComplexMatrix F = test::random_matrix(rng, M, S);
        if (rep % 5 == 1)
            F.col(rep % S).setZero();
        if (rep % 5 == 2)
        {
            const double c = rng.uniform(0.1, 2.0);
            for (Eigen::Index m = 0; m < M; ++m)
                F(m, 0) = std::polar(c, rng.uniform(-3.2, 3.2));
        }
        const HybridDecomposition d = decompose(F);
        worst_err = std::max(worst_err, (reconstruct(d) - F).norm());
        worst_mod = std::max(worst_mod, (d.rf_bar.cwiseAbs().array() - 1.0).abs().maxCoeff());
        worst_mod = std::max(worst_mod, (d.rf_tilde.cwiseAbs().array() - 1.0).abs().maxCoeff());
    }
    return {worst_err <= hybrid_error_tol && worst_mod <= hybrid_modulus_tol,
            "max error " + fmt("%.2e", worst_err) + ", max |modulus - 1| " + fmt("%.2e", worst_mod)};
}

Outcome sparse_equivalence()
{
    const ExperimentConfig cfg = reference_config();
    const AngleCodebook cb(cfg.channel.tx_sector, 256);
    const BasisSpec spec{cb, 1, cfg.channel.tx};
    const Dictionary dict(spec);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 100; ++t)
    {
        RandomStream rng = RandomStream::substream(202, {t});
        const ChannelRealization ch = sample_channel(cfg.channel, rng);
        const Precoder f = optimal_precoder(ch.matrix, cfg.streams, {});
        const Precoder a = reconstruct_precoder(build_report(f, dict, 8), spec);
        const Precoder b = sparse_precoder(f, {8, cb, cfg.channel.tx, false}, dict).precoder();
        worst = std::max(worst, test::max_abs(a.matrix - b.matrix));
    }
    OverheadParams p;
    p.streams = cfg.streams;
    p.rf_chains = 8;
    p.num_angles = 8;
    p.angle_codebook_size = 256;
    p.coeff_codebook_size = 256;
    const bool bits_equal =
        overhead_bits(FeedbackScheme::proposed, p) == overhead_bits(FeedbackScheme::sparse_precoder, p);
    return {worst <= equivalence_tol && bits_equal,
            "max entry difference " + fmt("%.2e", worst) + (bits_equal ? ", overhead equal" : ", overhead differs")};
}

struct RateRun
{
    ExperimentConfig cfg;
    std::vector<RateRow> rows;
    std::string csv;
};

Outcome rate_trend(RateRun &run)
{
    run.cfg = reference_config();
    run.cfg.schemes = {SchemeSpec{}, proposed(16), proposed(8), proposed(6)};
    run.rows = run_rate_sweep(run.cfg);
    run.csv = to_csv(run.cfg, run.rows);

    const auto &snr = run.cfg.snr_db_grid;
    const std::vector<std::vector<double>> curves{
        rate_curve(run.rows, "optimal"), rate_curve(run.rows, "proposed_K16_G1_C256"),
        rate_curve(run.rows, "proposed_K8_G1_C256"), rate_curve(run.rows, "proposed_K6_G1_C256")};
    bool ordered = true;
    for (std::size_t c = 1; c < curves.size(); ++c)
        for (std::size_t i = 0; i < snr.size(); ++i)
            ordered = ordered && curves[c - 1][i] >= curves[c][i];

    const auto x16 = crossing_snr_db(snr, curves[1], rate_target_bps_hz, false);
    const auto x8 = crossing_snr_db(snr, curves[2], rate_target_bps_hz, false);
    std::optional<double> shift;
    if (x16 && x8)
        shift = *x8 - *x16;
    const bool shift_ok = shift && std::abs(*shift - rate_shift_target_db) <= rate_shift_tol_db;
    return {ordered && shift_ok, std::string("ordering ") + (ordered ? "holds" : "violated") +
                                     ", K=16 vs K=8 shift at 16 bps/Hz " + db(shift) + " (target 2 +- 1)"};
}

Outcome ber_trend()
{
    ExperimentConfig cfg = reference_config();
    cfg.schemes = {SchemeSpec{}, proposed(8), proposed(16)};
    const auto rows = run_ber_sweep(cfg);
    const auto &snr = cfg.snr_db_grid;
    const auto xo = crossing_snr_db(snr, ber_curve(rows, "optimal"), ber_target, true);
    const auto x8 = crossing_snr_db(snr, ber_curve(rows, "proposed_K8_G1_C256"), ber_target, true);
    const auto x16 = crossing_snr_db(snr, ber_curve(rows, "proposed_K16_G1_C256"), ber_target, true);
    std::optional<double> shift, to_opt;
    if (x8 && x16)
        shift = *x8 - *x16;
    if (x16 && xo)
        to_opt = *x16 - *xo;
    const bool shift_ok = shift && std::abs(*shift - ber_shift_target_db) <= ber_shift_tol_db;
    const bool near_opt = to_opt && *to_opt <= ber_to_optimal_tol_db;
    return {shift_ok && near_opt, "K=16 vs K=8 shift at BER 1e-2 " + db(shift) + " (target 3 +- 1.5), K=16 vs optimal " +
                                      db(to_opt) + " (limit 1.5)"};
}

Outcome multi_beam_pattern()
{
    const AngleCodebook cb({-std::numbers::pi / 6.0, std::numbers::pi / 6.0}, 16);
    const ArrayGeometry tx{128, 0.5};
    bool fills = true, peaks = true;
    double worst_fill_ratio = 1e300;
    for (std::size_t idx = 0; idx < cb.size(); ++idx)
    {
        std::vector<double> mins, tops;
        for (std::size_t gamma : {1u, 2u, 4u})
        {
            const BeamPattern p = beam_pattern(BasisSpec{cb, gamma, tx}, idx, 4096);
            double lo = 1e300, hi = 0.0;
            for (std::size_t i = 0; i < p.angles.size(); ++i)
            {
                hi = std::max(hi, p.gain[i]);
                if (std::abs(p.angles[i] - cb.center(idx)) <= 0.5 * cb.resolution())
                    lo = std::min(lo, p.gain[i]);
            }
            mins.push_back(lo);
            tops.push_back(hi);
        }
        fills = fills && mins[1] > mins[0];
        peaks = peaks && tops[0] > tops[1] && tops[1] > tops[2];
        worst_fill_ratio = std::min(worst_fill_ratio, mins[1] / mins[0]);
    }
    return {fills && peaks, "min in-sub-sector gain ratio (gamma 2 / gamma 1) over all 16 elements >= " +
                                fmt("%.3g", worst_fill_ratio) + ", peaks " +
                                (peaks ? "decrease over gamma 1, 2, 4" : "not monotone")};
}

Outcome resolution_gamma()
{
    ExperimentConfig cfg = reference_config();
    const std::vector<std::size_t> sizes{16, 32, 256};
    cfg.schemes.clear();
    for (std::size_t c : sizes)
        for (std::size_t g : {1u, 2u})
            cfg.schemes.push_back(proposed(16, g, c));
    const auto rows = run_ber_sweep(cfg);

    bool ok = true;
    std::string detail;
    for (std::size_t c : sizes)
    {
        const auto x1 = crossing_snr_db(cfg.snr_db_grid, ber_curve(rows, proposed(16, 1, c).name()), ber_target, true);
        const auto x2 = crossing_snr_db(cfg.snr_db_grid, ber_curve(rows, proposed(16, 2, c).name()), ber_target, true);
        std::optional<double> gap;
        if (x1 && x2)
            gap = *x1 - *x2;
        const bool pass = gap && (c <= 32 ? *gap >= gamma_gap_db : *gap < gamma_gap_db);
        ok = ok && pass;
        detail += (detail.empty() ? "" : ", ") + std::string("|C|=") + std::to_string(c) + " gap " + db(gap);
    }
    return {ok, detail + " (need >= 0.5 at 16/32, < 0.5 at 256)"};
}

Outcome overhead_table()
{
    const auto rows = run_overhead_table(reference_config());
    const std::size_t M = 128, N = 16, S = 4, Q = 8, b = 8;
    std::vector<OverheadRow> expected{{"direct_H", "-", {0, M * N * b}},
                                      {"direct_F", "-", {0, M * S * b}},
                                      {"sparse_precoder", "Q=8", {Q * b, Q * S * b}}};
    for (std::size_t K : {6u, 8u, 16u})
        expected.push_back({"multilevel_csi", "K=" + std::to_string(K), {2 * K * b, K * b}});
    for (std::size_t K : {6u, 8u, 16u})
        expected.push_back({"proposed", "K=" + std::to_string(K), {K * b, K * S * b}});
    bool ok = rows.size() == expected.size();
    for (std::size_t i = 0; ok && i < rows.size(); ++i)
        ok = rows[i].scheme == expected[i].scheme && rows[i].parameter == expected[i].parameter &&
             rows[i].bits == expected[i].bits;
    const OverheadBits p16 = rows.empty() ? OverheadBits{} : rows.back().bits;
    return {ok, std::to_string(rows.size()) + " rows, proposed K=16 -> " + std::to_string(p16.angle_bits) + " + " +
                    std::to_string(p16.amplitude_bits) + " bits"};
}

Outcome asymptotic_beam_steering()
{
    const ArrayGeometry tx{1024, 0.5}, rx{16, 0.5};
    const AngleCodebook aod({-std::numbers::pi / 4.0, std::numbers::pi / 4.0}, 256);
    const BasisSpec spec{aod, 1, tx};
    const Dictionary dict(spec);
    double worst = 1e300;
    for (std::uint64_t t = 0; t < 20; ++t)
    {
        RandomStream rng = RandomStream::substream(808, {t});
        // Four on-codebook departure angles, one per quarter of the codebook,
        // and arrivals spread around the receive circle.
        std::vector<PathComponent> paths;
        for (std::size_t s = 0; s < 4; ++s)
        {
            const auto idx = static_cast<std::size_t>(64 * s + 8 + rng.uniform(0.0, 48.0));
            const double aoa = -std::numbers::pi + (s + 0.25 + 0.5 * rng.uniform(0.0, 1.0)) * std::numbers::pi / 2.0;
            paths.push_back({rng.complex_normal(1.0), aod.center(idx), aoa});
        }
        const ComplexMatrix H = reconstruct_from_paths(paths, tx, rx);
        const Precoder f = optimal_precoder(H, 4, {});
        const Precoder fh = reconstruct_precoder(build_report(f, dict, 4), spec);
        for (double snr_db : {-20.0, -10.0, 0.0, 10.0})
        {
            const double snr = std::pow(10.0, snr_db / 10.0);
            worst = std::min(worst, achievable_rate(H, fh.matrix, snr) / achievable_rate(H, f.matrix, snr));
        }
    }
    return {worst >= asymptotic_rate_ratio, "worst rate ratio " + fmt("%.6f", worst) + " (limit 0.98)"};
}

Outcome oracle_suites()
{
    std::vector<std::string> failed;

    {
        // OMP over the full |C_phi| = 8 dictionary equals the orthogonal projection.
        const BasisSpec spec{AngleCodebook({-0.8, 0.8}, 8), 1, {16, 0.5}};
        const Dictionary dict(spec);
        const ComplexMatrix &Psi = dict.atoms();
        RandomStream rng(901);
        double worst = 0.0;
        for (int rep = 0; rep < 50; ++rep)
        {
            const Precoder f{test::random_unit_matrix(rng, 16, 4)};
            const ComplexMatrix P = Psi * (Psi.adjoint() * Psi).ldlt().solve(Psi.adjoint() * f.matrix);
            const OmpResult r = omp_approximate(f, dict, 8);
            worst = std::max(worst, std::abs(r.residual_history.back() - (f.matrix - P).norm()));
            worst = std::max(worst, test::max_abs(reconstruct_precoder(build_report(f, dict, 8), spec).matrix -
                                                  P / P.norm()));
        }
        if (worst > 1e-10)
            failed.push_back("omp projection " + fmt("%.1e", worst));
    }
    {
        RandomStream rng(902);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep)
        {
            RealVector s(2);
            s << rng.uniform(0.1, 3.0), rng.uniform(0.1, 3.0);
            const double snr = std::pow(10.0, rng.uniform(-2.0, 1.0));
            double best_p = 0.0, best = -1.0;
            for (int i = 0; i <= 10000; ++i)
            {
                const double p = i * 1e-4;
                const double r = std::log2(1 + snr * s(0) * s(0) * p) + std::log2(1 + snr * s(1) * s(1) * (1 - p));
                if (r > best)
                {
                    best = r;
                    best_p = p;
                }
            }
            worst = std::max(worst, std::abs(water_fill(s, snr)(0) - best_p));
        }
        if (worst > water_fill_grid_tol)
            failed.push_back("water filling " + fmt("%.1e", worst));
    }
    {
        RandomStream rng(903);
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep)
        {
            const ComplexMatrix H = test::random_matrix(rng, 16, 64);
            const ComplexMatrix F = test::random_unit_matrix(rng, 64, 4);
            const double snr = std::pow(10.0, rng.uniform(-2.0, 1.0));
            const ComplexMatrix HF = H * F;
            const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(HF.adjoint() * HF);
            double oracle = 0.0;
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                oracle += std::log2(1.0 + snr * es.eigenvalues()(i));
            worst = std::max(worst, std::abs(achievable_rate(H, F, snr) - oracle) / oracle);
        }
        if (worst > rate_oracle_tol)
            failed.push_back("rate oracle " + fmt("%.1e", worst));
    }
    {
        RandomStream rng(904);
        const ComplexMatrix H = test::random_matrix(rng, 16, 128);
        const Precoder F = optimal_precoder(H, 4, {});
        const BitErrorCount clean = ber_qpsk_mmse(H, F.matrix, 1e9, 10000, rng);
        if (clean.bit_errors != 0)
            failed.push_back("noiseless BER " + fmt("%.1e", clean.ber()));
        const BitErrorCount noise = ber_qpsk_mmse(H, F.matrix, 1e-9, 12500, rng);
        if (std::abs(noise.ber() - 0.5) > ber_noise_tol)
            failed.push_back("vanishing-SNR BER " + fmt("%.3f", noise.ber()));
    }
    return {failed.empty(), failed.empty() ? std::string("omp projection, water filling, rate, LMMSE limits agree")
                                           : "failed: " + [&] {
                                                 std::string s;
                                                 for (const auto &f : failed)
                                                     s += (s.empty() ? "" : "; ") + f;
                                                 return s;
                                             }()};
}

Outcome determinism(const RateRun &run)
{
    if (run.csv.empty())
        return {false, "reference rate sweep did not run"};
    ExperimentConfig cfg = run.cfg;
    bool same = true;
    for (std::size_t workers : {2u, 5u})
    {
        cfg.workers = workers;
        same = same && to_csv(cfg, run_rate_sweep(cfg)) == run.csv;
    }
    return {same, same ? "rate CSV byte-identical for 1, 2 and 5 workers" : "CSV differs across worker counts"};
}

} // namespace

int main()
{
    RateRun run;
    report(1, "hybrid decomposition exactness", hybrid_exactness);
    report(2, "proposed K=8 equals sparse Q=8", sparse_equivalence);
    report(3, "rate trend", [&] { return rate_trend(run); });
    report(4, "BER trend", ber_trend);
    report(5, "multi-beam pattern", multi_beam_pattern);
    report(6, "codebook resolution vs gamma", resolution_gamma);
    report(7, "overhead table", overhead_table);
    report(8, "asymptotic beam steering", asymptotic_beam_steering);
    report(9, "oracle suites", oracle_suites);
    report(10, "determinism across workers", [&] { return determinism(run); });
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
