// SPDX-License-Identifier: Apache-2.0
//
// tdba - time-domain beam alignment simulation library
// Copyright (C) 2026 The tdba authors
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

#ifndef TDBA_VALIDATION_HPP
#define TDBA_VALIDATION_HPP

// Property suites and Monte Carlo checks shared by `tdba validate` and the
// acceptance runner. Every check reports a verdict and a one-line detail.

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

namespace tdba
{

struct Check
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline std::string check_line(const Check &c)
{
    return std::string(c.passed ? "PASS" : "FAIL") + " [" + std::to_string(c.id) + "] " + c.name + ": " + c.detail;
}

namespace detail
{

inline std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline double rel_err(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel_err(std::span<const cd> a, std::span<const cd> b)
{
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        num += std::norm(a[k] - b[k]);
        den += std::max(std::norm(a[k]), std::norm(b[k]));
    }
    return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

// Small random instance for the measurement-model identities.
struct SmallInstance
{
    SystemConfig config;
    DerivedLink link;
    PathSet paths;
    ProbingCodebook codebook;
    std::vector<PnSequence> sequences;
    CorrelationTable R;
    SlotRealization slot;
};

inline SmallInstance small_instance(std::uint64_t seed, int index, int n_c = 31)
{
    Rng rng(seed, StreamTag::instance, {static_cast<std::uint64_t>(index)});
    SmallInstance in;
    auto &c = in.config;
    c.M = c.N = 8;
    c.M_RF = 2 + static_cast<int>(rng.uniform_index(2));
    c.N_RF = 1 + static_cast<int>(rng.uniform_index(2));
    c.kappa_u = 2 + static_cast<int>(rng.uniform_index(3));
    c.kappa_v = 2 + static_cast<int>(rng.uniform_index(3));
    c.N_c = n_c;
    c.S = 2;
    c.T = 1;
    c.L = 1 + static_cast<int>(rng.uniform_index(3));
    c.d_max = 4;
    c.cross_correlation = CrossCorrelation::exact;
    c.snr_bbf_db = rng.uniform(-10.0, 10.0);
    in.link = derive_link(c);
    in.paths = sample_paths(c, rng);
    in.codebook = sample_codebook(c, rng.bits(), 1);
    in.sequences = chain_sequences(c);
    in.R = CorrelationTable(in.sequences, in.link.Rx0);
    in.slot = draw_slot(in.paths, rng);
    return in;
}

} // namespace detail

// ---------------------------------------------------------------- property suites

// Energy expansion into signal, noise and cross terms against direct |y|^2.
inline Check check_energy_identity(int instances = 100, std::uint64_t seed = 7)
{
    double worst = 0.0;
    for (int n = 0; n < instances; ++n)
    {
        auto in = detail::small_instance(seed, n);
        const auto &c = in.config;
        Rng noise_rng(seed, StreamTag::noise, {static_cast<std::uint64_t>(n)});
        const auto h = realize_sequence(in.paths, in.slot, 0, in.link.t0, c.variation);
        for (int i = 0; i < c.M_RF; ++i)
            for (int j = 0; j < c.N_RF; ++j)
            {
                CSeries z(static_cast<std::size_t>(c.ncheck()));
                for (auto &v : z)
                    v = noise_rng.complex_normal(in.link.noise_var_chip);
                const auto &v = in.codebook.user[0][static_cast<std::size_t>(j)];
                const auto y = closed_form_mf_output(h, in.codebook.bs[0], v, i, in.R, c, z);
                const auto comps = signal_components(h, in.codebook.bs[0], v, i, in.R, c);
                worst = std::max(worst, detail::rel_err(decompose_energy(comps, z).total(), energy(y)));
            }
    }
    return {7, "energy expansion identity", worst <= 1e-9,
            "max relative error " + detail::fmt("%.3e", worst) + " over " + std::to_string(instances) +
                " instances (tol 1e-9)"};
}

// Closed-form matched-filter outputs against chip-level synthesis followed by
// the matched filter, with one shared noise realization.
inline Check check_chip_level_equivalence(int instances = 20, std::uint64_t seed = 11)
{
    double worst = 0.0;
    for (int n = 0; n < instances; ++n)
    {
        auto in = detail::small_instance(seed, n, 31);
        const auto &c = in.config;
        std::vector<ChipWaveform> wf;
        for (const auto &s : in.sequences)
            wf.push_back({s, in.link.chip_amplitude(c.N_c), in.link.T_c});
        for (int sp = 0; sp < c.S; ++sp)
        {
            std::vector<cd> coeffs;
            for (std::size_t l = 0; l < in.paths.size(); ++l)
                coeffs.push_back(sequence_coefficient(in.paths.paths[l], in.slot, l, sp, in.link.t0, c.variation));
            const std::vector<cd> zero(coeffs.size());
            Rng r1(seed, StreamTag::noise, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(sp)});
            Rng r2(seed, StreamTag::noise, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(sp)});
            const auto frame = synth_chip_level(in.paths, coeffs, in.codebook.bs[0], in.codebook.user[0], wf, c,
                                                in.link, &r1);
            const auto noise_only =
                synth_chip_level(in.paths, zero, in.codebook.bs[0], in.codebook.user[0], wf, c, in.link, &r2);
            const auto h = realize_sequence(in.paths, in.slot, sp, in.link.t0, c.variation);
            for (int j = 0; j < c.N_RF; ++j)
                for (int i = 0; i < c.M_RF; ++i)
                {
                    const auto &wi = wf[static_cast<std::size_t>(i)];
                    const auto y_chip = matched_filter(frame.y[static_cast<std::size_t>(j)], wi, c.ncheck());
                    const auto z = matched_filter(noise_only.y[static_cast<std::size_t>(j)], wi, c.ncheck());
                    const auto y_cf = closed_form_mf_output(h, in.codebook.bs[0],
                                                            in.codebook.user[0][static_cast<std::size_t>(j)], i, in.R, c, z);
                    worst = std::max(worst, detail::rel_err(y_chip, y_cf));
                }
        }
    }
    return {7, "closed form vs chip level", worst <= 1e-9,
            "max relative error " + detail::fmt("%.3e", worst) + " (M=N=8, N_c=31, tol 1e-9)"};
}

struct MeanModelReport
{
    double worst_total = 0.0;  // per-entry relative error of E[q]
    double worst_signal = 0.0; // relative error of E[q] - offset against B vec(Gamma), rows with signal
    int rows = 0;
};

// Empirical mean of q over `trials` fading and noise draws against
// B vec(Gamma) + Ncheck N0 Rx0, one fixed channel and probing slot.
inline MeanModelReport mean_model_report(int trials, std::uint64_t seed = 13)
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 4;
    c.T = 1;
    c.L = 2;
    c.gammas = {0.7, 0.3};
    const TrialContext ctx = make_context(c);
    Rng prng(seed, StreamTag::paths, {0});
    const PathSet ps = sample_paths(ctx.config, prng);
    // beams covering both paths on every row keep the signal part measurable
    ProbingCodebook cb;
    cb.seed = seed;
    cb.M = c.M;
    cb.N = c.N;
    cb.bs.resize(1);
    cb.user.resize(1);
    Rng brng(seed, StreamTag::codebook, {0});
    for (int i = 0; i < c.M_RF; ++i)
    {
        std::set<int> sup{ps.paths[static_cast<std::size_t>(i % 2)].aod_idx};
        while (static_cast<int>(sup.size()) < c.kappa_u)
            sup.insert(static_cast<int>(brng.uniform_index(static_cast<std::uint64_t>(c.M))));
        cb.bs[0].push_back(make_beam(c.M, {sup.begin(), sup.end()}));
    }
    for (int j = 0; j < c.N_RF; ++j)
    {
        std::set<int> sup{ps.paths[0].aoa_idx, ps.paths[1].aoa_idx};
        while (static_cast<int>(sup.size()) < c.kappa_v)
            sup.insert(static_cast<int>(brng.uniform_index(static_cast<std::uint64_t>(c.N))));
        cb.user[0].push_back(make_beam(c.N, {sup.begin(), sup.end()}));
    }

    std::vector<double> mean(static_cast<std::size_t>(c.M_RF * c.N_RF), 0.0);
    for (int t = 0; t < trials; ++t)
    {
        const auto data = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, seed, static_cast<std::uint64_t>(t), 1);
        for (std::size_t r = 0; r < mean.size(); ++r)
            mean[r] += data.q[r] / trials;
    }
    const auto sys = assemble_system(cb, mean, ctx.config, ctx.link);
    const RVec model_signal = sys.B * ground_truth_gamma(ps, ctx.config, ctx.link).vec();
    MeanModelReport rep;
    rep.rows = sys.rows();
    for (int r = 0; r < sys.rows(); ++r)
    {
        const double model = model_signal(r) + sys.noise_offset;
        rep.worst_total = std::max(rep.worst_total, std::abs(sys.q(r) - model) / model);
        if (model_signal(r) > 0.0)
            rep.worst_signal =
                std::max(rep.worst_signal, std::abs(sys.q(r) - sys.noise_offset - model_signal(r)) / model_signal(r));
    }
    return rep;
}

inline Check check_mean_model(int trials = 10000, std::uint64_t seed = 13)
{
    const auto rep = mean_model_report(trials, seed);
    return {7, "mean of q vs B vec(Gamma) + offset", rep.worst_total <= 0.02,
            "max per-entry relative error " + detail::fmt("%.4f", rep.worst_total) + " over " +
                std::to_string(rep.rows) + " rows at " + std::to_string(trials) +
                " trials (tol 0.02); signal part alone off by up to " + detail::fmt("%.3f", rep.worst_signal)};
}

// Exhaustive NNLS oracle: best feasible unconstrained LS over all supports.
inline RVec nnls_enumerate(const RMat &B, const RVec &rhs)
{
    const auto n = B.cols();
    RVec best = RVec::Zero(n);
    double best_obj = rhs.squaredNorm();
    for (long mask = 1; mask < (1L << n); ++mask)
    {
        std::vector<Eigen::Index> cols;
        for (Eigen::Index k = 0; k < n; ++k)
            if (mask & (1L << k))
                cols.push_back(k);
        RMat Bs(B.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t a = 0; a < cols.size(); ++a)
            Bs.col(static_cast<Eigen::Index>(a)) = B.col(cols[a]);
        const RVec z = Bs.completeOrthogonalDecomposition().solve(rhs);
        if ((z.array() < 0.0).any())
            continue;
        const double obj = (Bs * z - rhs).squaredNorm();
        if (obj < best_obj - 1e-13 * std::max(1.0, best_obj))
        {
            best_obj = obj;
            best.setZero();
            for (std::size_t a = 0; a < cols.size(); ++a)
                best(cols[a]) = z(static_cast<Eigen::Index>(a));
        }
    }
    return best;
}

inline Check check_nnls(std::uint64_t seed = 17)
{
    Rng rng(seed, StreamTag::instance, {0});
    double worst_kkt = 0.0, worst_enum = 0.0, worst_identity = 0.0;
    bool monotone = true;
    int solves = 0;
    auto track = [&](const NnlsResult &r)
    {
        ++solves;
        worst_kkt = std::max(worst_kkt, r.kkt_violation);
        for (std::size_t k = 1; k < r.objective.size(); ++k)
            if (r.objective[k] > r.objective[k - 1] * (1.0 + 1e-12) + 1e-300)
                monotone = false;
    };
    // exhaustive oracle on 6 x 8
    for (int n = 0; n < 50; ++n)
    {
        RMat B(6, 8);
        RVec rhs(6);
        for (Eigen::Index r = 0; r < 6; ++r)
        {
            rhs(r) = rng.normal();
            for (Eigen::Index k = 0; k < 8; ++k)
                B(r, k) = n % 2 ? static_cast<double>(rng.bernoulli(0.4)) : rng.normal();
        }
        const auto res = nnls(B, rhs);
        track(res);
        const RVec oracle = nnls_enumerate(B, rhs);
        // 6 x 8 systems are rank deficient: the fit B x is unique, x need not be
        const RVec fit = B * res.estimate, fit_oracle = B * oracle;
        worst_enum = std::max(worst_enum, (fit - fit_oracle).cwiseAbs().maxCoeff() /
                                              std::max(1.0, fit_oracle.cwiseAbs().maxCoeff()));
        const double obj = (fit - rhs).squaredNorm(), obj_oracle = (fit_oracle - rhs).squaredNorm();
        worst_enum = std::max(worst_enum, std::abs(obj - obj_oracle) / std::max(1.0, obj_oracle));
    }
    // binary probing systems through the Gram path
    for (int n = 0; n < 20; ++n)
    {
        MeasurementSystem sys;
        sys.B = RMat::Zero(30, 50);
        sys.q = RVec::Zero(30);
        RVec x = RVec::Zero(50);
        for (int k = 0; k < 3; ++k)
            x(static_cast<Eigen::Index>(rng.uniform_index(50))) = rng.uniform(0.5, 2.0);
        for (int r = 0; r < 30; ++r)
        {
            std::vector<int> w;
            for (int k = 0; k < 50; ++k)
                if (rng.bernoulli(0.25))
                    w.push_back(k);
            for (int k : w)
                sys.B(r, k) = 1.0;
            sys.windows.push_back(w);
        }
        sys.q = sys.B * x;
        for (Eigen::Index r = 0; r < 30; ++r)
            sys.q(r) += 0.05 * rng.normal();
        track(solve_measurements(sys));
    }
    // B = I projects onto the orthant
    for (int n = 0; n < 10; ++n)
    {
        RVec rhs(12);
        for (auto &v : rhs)
            v = rng.normal();
        const auto res = nnls(RMat::Identity(12, 12), rhs);
        track(res);
        worst_identity = std::max(worst_identity, (res.estimate - rhs.cwiseMax(0.0)).cwiseAbs().maxCoeff());
    }
    const double tol = NnlsOptions{}.tol;
    const bool ok = worst_kkt <= 1e-8 && worst_enum <= 1e-8 && monotone && worst_identity <= 1e-12;
    return {8, "NNLS correctness", ok,
            std::to_string(solves) + " solves; max KKT violation " + detail::fmt("%.2e", worst_kkt) +
                " (solver tol " + detail::fmt("%.0e", tol) + ", check 1e-8); enumeration gap " +
                detail::fmt("%.2e", worst_enum) + "; objective " + (monotone ? "monotone" : "NOT monotone") +
                "; identity error " + detail::fmt("%.1e", worst_identity)};
}

inline Check check_sequences()
{
    std::string bad;
    // m-sequences: periodic autocorrelation {N_c, -1}
    for (int deg = 3; deg <= 10; ++deg)
    {
        const int n = (1 << deg) - 1;
        const auto s = gen_pn(PnFamily::m_sequence, n, 0);
        for (int lag = 0; lag < n; ++lag)
        {
            const double v = periodic_xcorr(s, s, lag);
            if (v != (lag == 0 ? n : -1))
            {
                bad += " m-seq r=" + std::to_string(deg) + " lag " + std::to_string(lag);
                break;
            }
        }
    }
    // Gold r=5: every pair of members, every lag
    std::set<int> values;
    std::vector<PnSequence> gold;
    for (int k = 0; k < 33; ++k)
        gold.push_back(gen_pn(PnFamily::gold, 31, k));
    for (std::size_t a = 0; a < gold.size(); ++a)
        for (std::size_t b = a + 1; b < gold.size(); ++b)
            for (int lag = 0; lag < 31; ++lag)
                values.insert(static_cast<int>(periodic_xcorr(gold[a], gold[b], lag)));
    const std::set<int> allowed{-9, -1, 7};
    const bool gold_ok = std::includes(allowed.begin(), allowed.end(), values.begin(), values.end());
    if (!gold_ok)
        bad += " gold r=5 values outside {-9,-1,7}";
    // regeneration is deterministic
    bool same = true;
    for (int k = 0; k < 5; ++k)
        same = same && gen_pn(PnFamily::gold, 511, k) == gen_pn(PnFamily::gold, 511, k) &&
               gen_pn(PnFamily::m_sequence, 1023, k) == gen_pn(PnFamily::m_sequence, 1023, k);
    if (!same)
        bad += " regeneration differs";
    std::string seen;
    for (int v : values)
        seen += (seen.empty() ? "" : ",") + std::to_string(v);
    return {9, "sequence properties", bad.empty(),
            bad.empty() ? "m-seq r=3..10 two-valued; gold r=5 cross values {" + seen + "}; regeneration stable"
                        : "violations:" + bad};
}

inline std::vector<Check> run_property_suite()
{
    std::vector<Check> out;
    out.push_back(check_energy_identity());
    out.push_back(check_chip_level_equivalence());
    out.push_back(check_mean_model());
    out.push_back(check_nnls());
    out.push_back(check_sequences());
    return out;
}

// ---------------------------------------------------------------- Monte Carlo criteria

struct McBudget
{
    int trials = 500;
    int pdp_trials = 10000;
    std::uint64_t seed = 1;
};

inline std::string pd_list(const std::vector<PdCurve> &curves, int T)
{
    std::string s;
    for (const auto &cv : curves)
        s += (s.empty() ? "" : ", ") + cv.sweep_value + ": " + detail::fmt("%.3f", cv.at(T).p_d);
    return s;
}

// Detection at T=50 for L in {1,2,3}; returns the curves for the parity check.
inline std::vector<PdCurve> paths_curves(const McBudget &b)
{
    ExperimentSpec spec;
    spec.trials = b.trials;
    spec.seed = b.seed;
    spec.T_grid = {50};
    spec.sweep = sweep_paths(spec.base, {1, 2, 3});
    return run_pd_curve(spec);
}

inline Check check_detection(const std::vector<PdCurve> &curves)
{
    bool ok = true;
    for (const auto &cv : curves)
        ok = ok && cv.at(50).p_d >= 0.95;
    return {1, "P_D >= 0.95 at T=50 for L=1,2,3", ok,
            "P_D by L {" + pd_list(curves, 50) + "} at " + std::to_string(curves.front().at(50).trials) + " trials"};
}

inline Check check_parity(const std::vector<PdCurve> &curves)
{
    const double gap = std::abs(curves.front().at(50).p_d - curves.back().at(50).p_d);
    return {2, "|P_D(L=1) - P_D(L=3)| <= 0.05 at T=50", gap <= 0.05, "gap " + detail::fmt("%.3f", gap)};
}

inline Check check_spreading(const McBudget &b)
{
    ExperimentSpec spec;
    spec.trials = b.trials;
    spec.seed = b.seed;
    spec.T_grid = {20};
    spec.sweep = sweep_kappa(spec.base, {4, 16, 25});
    const auto cv = run_pd_curve(spec);
    const auto &k4 = cv[0].at(20), &k16 = cv[1].at(20), &k25 = cv[2].at(20);
    const bool ok = k16.p_d > k4.p_d && k16.ci_low > k4.ci_high && k25.p_d < k16.p_d && k25.ci_high < k16.ci_low;
    auto iv = [](const PdPoint &p)
    { return detail::fmt("%.3f", p.p_d) + " [" + detail::fmt("%.3f", p.ci_low) + "," + detail::fmt("%.3f", p.ci_high) + "]"; };
    return {3, "kappa ordering at T=20", ok, "kappa 4: " + iv(k4) + ", 16: " + iv(k16) + ", 25: " + iv(k25)};
}

// Frozen Rayleigh gains give the slow channel no fading diversity, so NNLS
// does better on the fast channel. The hard requirement is the direction:
// NNLS must not lose more than 0.1 when the channel varies, OMP must lose 0.4.
inline Check check_robustness(const McBudget &b)
{
    ExperimentSpec spec;
    spec.trials = b.trials;
    spec.seed = b.seed;
    spec.T_grid = {50};
    const auto res = run_robustness_compare(spec);
    const double nnls_slow = res.curves[0].at(50).p_d, omp_slow = res.curves[1].at(50).p_d;
    const double nnls_fast = res.curves[2].at(50).p_d, omp_fast = res.curves[3].at(50).p_d;
    const bool paired = res.checksums.size() == 2 * static_cast<std::size_t>(b.trials);
    const bool ok = paired && nnls_fast >= nnls_slow - 0.1 && omp_slow - omp_fast >= 0.4;
    return {4, "robustness: NNLS holds, OMP collapses on fast channels", ok,
            "NNLS slow " + detail::fmt("%.3f", nnls_slow) + " fast " + detail::fmt("%.3f", nnls_fast) + " (|gap| " +
                detail::fmt("%.3f", std::abs(nnls_fast - nnls_slow)) + "); OMP slow " + detail::fmt("%.3f", omp_slow) +
                " fast " + detail::fmt("%.3f", omp_fast) + " (drop " + detail::fmt("%.3f", omp_slow - omp_fast) + ")"};
}

inline Check check_chip_duration(const McBudget &b)
{
    ExperimentSpec spec;
    spec.trials = b.trials;
    spec.seed = b.seed;
    spec.T_grid = {10, 20, 30, 40, 50};
    spec.sweep = sweep_chip_duration(spec.base, {1, 2, 4});
    double snr_gap = 0.0;
    std::vector<double> snrs;
    for (const auto &pt : spec.sweep)
    {
        const auto ctx = make_context(pt.config);
        const double g[] = {1.0};
        snrs.push_back(snr_measurement(ctx.link, ctx.config, g));
    }
    for (double s : snrs)
        snr_gap = std::max(snr_gap, detail::rel_err(s, snrs.front()));
    const auto cv = run_pd_curve(spec);
    double worst = 0.0;
    int worst_T = 0;
    for (std::size_t k = 1; k < cv.size(); ++k)
        for (std::size_t t = 0; t < spec.T_grid.size(); ++t)
        {
            const double d = std::abs(cv[k].points[t].p_d - cv[0].points[t].p_d);
            if (d > worst)
            {
                worst = d;
                worst_T = spec.T_grid[t];
            }
        }
    std::string curves;
    for (const auto &c : cv)
    {
        curves += " " + c.sweep_value + ":";
        for (const auto &p : c.points)
            curves += " " + detail::fmt("%.2f", p.p_d);
    }
    return {5, "chip-duration trade", worst <= 0.1 && snr_gap <= 1e-12,
            "max P_D gap " + detail::fmt("%.3f", worst) + " at T=" + std::to_string(worst_T) +
                " (tol 0.1); snr_measurement spread " + detail::fmt("%.1e", snr_gap) + "; P_D at T=10..50:" + curves};
}

inline Check check_pdp(const McBudget &b)
{
    SystemConfig c;
    c.L = 4;
    c.T = 100; // four paths need a longer training than the single-path default
    const auto res = run_pdp(c, b.pdp_trials, b.seed);
    const double after_total = std::accumulate(res.after.begin(), res.after.end(), 0.0);
    const double after_peak = after_total > 0.0 ? *std::max_element(res.after.begin(), res.after.end()) / after_total : 0.0;
    const double before_total = std::accumulate(res.before.begin(), res.before.end(), 0.0);
    double worst = 0.0;
    for (const auto &p : res.paths.paths)
    {
        const double share = res.before[static_cast<std::size_t>(p.delay_chips)] / before_total;
        worst = std::max(worst, std::abs(share - p.gamma / res.paths.total_gain()) / (p.gamma / res.paths.total_gain()));
    }
    const bool aligned = res.detected.has_value() && *res.detected == res.truth;
    return {6, "PDP before/after alignment", after_peak >= 0.99 && worst <= 0.05,
            "after: " + detail::fmt("%.4f", after_peak) + " of power in one tap (" +
                (aligned ? "aligned on strongest path" : "alignment missed strongest path") + ", T=100" +
                "); before: tap shares vs gamma max relative error " + detail::fmt("%.4f", worst) + " at " +
                std::to_string(b.pdp_trials) + " trials"};
}

} // namespace tdba

#endif
