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

#ifndef TDBA_EXPERIMENTS_HPP
#define TDBA_EXPERIMENTS_HPP

#include "arrays.hpp"
#include "channel.hpp"
#include "measurements.hpp"
#include "nnls.hpp"
#include "omp.hpp"
#include "rng.hpp"
#include "system_model.hpp"
#include "waveforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace tdba
{

struct WilsonInterval
{
    double low = 0.0;
    double high = 1.0;
};

// Wilson score interval; z = 1.96 gives 95% nominal coverage.
inline WilsonInterval wilson_interval(int successes, int trials, double z = 1.959963984540054)
{
    if (trials <= 0)
        return {0.0, 1.0};
    if (successes < 0 || successes > trials)
        throw std::invalid_argument("wilson_interval: successes outside [0, trials]");
    const double n = trials;
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct PdPoint
{
    int T = 0;
    int trials = 0;
    int successes = 0;
    double p_d = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
};

struct PdCurve
{
    std::string sweep_value;
    std::vector<PdPoint> points;

    const PdPoint &at(int T) const
    {
        for (const auto &p : points)
            if (p.T == T)
                return p;
        throw std::out_of_range("PdCurve: no point at T = " + std::to_string(T));
    }
};

struct SweepPoint
{
    std::string label;
    SystemConfig config;
};

struct ExperimentSpec
{
    SystemConfig base;
    std::vector<SweepPoint> sweep; // empty runs the base config alone
    std::vector<int> T_grid{1, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    int trials = 500;
    std::uint64_t seed = 1;
    int threads = 1;
    NnlsOptions nnls;
};

inline void validate(const ExperimentSpec &spec)
{
    if (spec.trials < 1)
        throw config_error("experiment: trials must be at least 1");
    if (spec.T_grid.empty())
        throw config_error("experiment: empty T grid");
    if (spec.T_grid.front() < 0)
        throw config_error("experiment: T must be non-negative");
    for (std::size_t k = 1; k < spec.T_grid.size(); ++k)
        if (spec.T_grid[k] <= spec.T_grid[k - 1])
            throw config_error("experiment: T grid must be strictly increasing");
    if (spec.threads < 1)
        throw config_error("experiment: threads must be at least 1");
}

inline std::vector<SweepPoint> sweep_paths(const SystemConfig &base, const std::vector<int> &values)
{
    std::vector<SweepPoint> out;
    for (int L : values)
    {
        SystemConfig c = base;
        c.L = L;
        c.gammas.clear();
        out.push_back({std::to_string(L), c});
    }
    return out;
}

inline std::vector<SweepPoint> sweep_kappa(const SystemConfig &base, const std::vector<int> &values)
{
    std::vector<SweepPoint> out;
    for (int k : values)
    {
        SystemConfig c = base;
        c.kappa_u = c.kappa_v = k;
        out.push_back({std::to_string(k), c});
    }
    return out;
}

// PN length sweep at a fixed beacon-slot duration: S shrinks as N_c grows.
inline std::vector<SweepPoint> sweep_chips(const SystemConfig &base, const std::vector<int> &values, bool fixed_slot = true)
{
    std::vector<SweepPoint> out;
    const int slot_chips = base.N_c * base.S;
    for (int nc : values)
    {
        SystemConfig c = base;
        c.N_c = nc;
        if (fixed_slot)
            c.S = std::max(1, static_cast<int>(std::lround(static_cast<double>(slot_chips) / nc)));
        out.push_back({std::to_string(nc), c});
    }
    return out;
}

inline std::vector<SweepPoint> sweep_variation(const SystemConfig &base)
{
    SystemConfig slow = base, fast = base;
    slow.variation = ChannelVariation::slow;
    fast.variation = ChannelVariation::fast;
    return {{"slow", slow}, {"fast", fast}};
}

inline std::string format_double(double v, const char *fmt = "%.6f")
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

// Chip-duration trade at fixed sequence duration t0: B' = B/p and N_c = N_c/p.
// The SNR before beamforming drops by exactly 10 log10(p) dB so that
// P_tot / B' and with it the measurement SNR stay unchanged.
inline std::vector<SweepPoint> sweep_chip_duration(const SystemConfig &base, const std::vector<int> &divisors)
{
    std::vector<SweepPoint> out;
    for (int p : divisors)
    {
        if (p < 1)
            throw config_error("chip sweep: divisor must be positive");
        SystemConfig c = base;
        c.p = base.p * p;
        c.N_c = static_cast<int>(std::lround(static_cast<double>(base.N_c) / p));
        c.snr_bbf_db = base.snr_bbf_db - 10.0 * std::log10(static_cast<double>(p));
        if (c.N_c < c.d_max + 1)
            throw config_error("chip sweep: N_c / p = " + std::to_string(c.N_c) + " cannot resolve " +
                               std::to_string(c.d_max + 1) + " delay taps");
        c.pn_length = PnLengthMode::exact;
        out.push_back({"p=" + std::to_string(c.p) + ";snr=" + format_double(c.snr_bbf_db, "%.2f"), c});
    }
    return out;
}

/// Per-configuration state shared by every trial.
struct TrialContext
{
    SystemConfig config;
    DerivedLink link;
    std::vector<PnSequence> sequences;
    CorrelationTable R;
};

inline TrialContext make_context(SystemConfig c)
{
    validate(c);
    TrialContext ctx;
    ctx.sequences = chain_sequences(c);
    c.N_c = ctx.sequences.front().length();
    ctx.config = c;
    ctx.link = derive_link(c);
    ctx.R = CorrelationTable(ctx.sequences, ctx.link.Rx0);
    return ctx;
}

struct TrialOutcome
{
    std::vector<char> nnls; // success per T of the grid
    std::vector<char> omp;
    double checksum = 0.0;
    CellIndex truth;
};

inline std::uint64_t codebook_seed(std::uint64_t seed, std::uint64_t trial)
{
    return stream_key(seed, {static_cast<std::uint64_t>(StreamTag::codebook), trial});
}

inline PathSet trial_paths(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial)
{
    Rng rng(seed, StreamTag::paths, {trial});
    return sample_paths(c, rng);
}

// Ground truth of one trial: the strongest cell of the second-order map, or of
// the frozen realization when the channel does not vary.
inline CellIndex trial_truth(const PathSet &ps, const TrialContext &ctx, std::uint64_t seed, std::uint64_t trial)
{
    if (ctx.config.variation == ChannelVariation::slow)
    {
        Rng rng(seed, StreamTag::slot, {trial, 0});
        const auto r = draw_slot(ps, rng);
        return strongest_index(instantaneous_gamma(ps, r, ctx.config, ctx.link));
    }
    return strongest_index(ground_truth_gamma(ps, ctx.config, ctx.link));
}

inline CellIndex chance_guess(const SystemConfig &c, std::uint64_t seed, std::uint64_t trial)
{
    Rng rng(seed, StreamTag::guess, {trial});
    const auto k = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.M) * c.N));
    return {k % c.N, k / c.N};
}

// One end-to-end simulation: paths, codebook, T_max slots of measurements,
// then detection for every T of the grid on the first T slots.
inline TrialOutcome run_trial(const TrialContext &ctx, std::uint64_t seed, std::uint64_t trial,
                              const std::vector<int> &T_grid, bool with_nnls, bool with_omp,
                              const NnlsOptions &nnls_opt = {})
{
    const auto &c = ctx.config;
    const int t_max = T_grid.empty() ? 0 : T_grid.back();
    const PathSet ps = trial_paths(c, seed, trial);
    const ProbingCodebook cb = sample_codebook(c, codebook_seed(seed, trial), t_max);
    SimulationOptions sim;
    sim.keep_coherent = with_omp;
    const TrainingData data = simulate_training(ps, cb, ctx.R, c, ctx.link, seed, trial, t_max, sim);

    TrialOutcome out;
    out.truth = trial_truth(ps, ctx, seed, trial);
    out.checksum = data.checksum;
    const CellIndex guess = chance_guess(c, seed, trial);
    const int per_slot = c.M_RF * c.N_RF;
    const double offset = static_cast<double>(ctx.link.Ncheck) * c.N0 * ctx.link.Rx0;

    if (with_nnls)
    {
        BinaryGram gram(c.M * c.N, nnls_opt.offset_column);
        int added = 0;
        for (int T : T_grid)
        {
            if (T == 0)
            {
                out.nnls.push_back(guess == out.truth);
                continue;
            }
            for (; added < T; ++added)
                for (int i = 0; i < c.M_RF; ++i)
                    for (int j = 0; j < c.N_RF; ++j)
                    {
                        const auto r = static_cast<std::size_t>(row_index(added, i, j, c));
                        const double rhs = nnls_opt.offset_column ? data.q[r] : data.q[r] - offset;
                        gram.add_row(window_cells(cb.bs[added][i], cb.user[added][j]), rhs);
                    }
            const NnlsResult res = nnls_gram(gram.gram(), gram.btr(), gram.rhs_norm2(), nnls_opt);
            RVec est = res.estimate.head(c.M * c.N);
            const Eigen::Index k = argmax_first(est);
            out.nnls.push_back(k >= 0 && CellIndex{static_cast<int>(k % c.N), static_cast<int>(k / c.N)} == out.truth);
        }
    }
    if (with_omp)
    {
        for (int T : T_grid)
        {
            if (T == 0)
            {
                out.omp.push_back(guess == out.truth);
                continue;
            }
            const std::vector<CSeries> head(data.coherent.begin(),
                                            data.coherent.begin() + static_cast<std::ptrdiff_t>(T) * per_slot);
            const OmpResult res = omp_baseline(head, cb, ctx.R, c, c.L);
            out.omp.push_back(res.cell.has_value() && *res.cell == out.truth);
        }
    }
    return out;
}

// Runs trials [0, n) on `threads` workers; outcomes are stored by trial
// index so the result does not depend on scheduling.
inline std::vector<TrialOutcome> run_trials(const TrialContext &ctx, const ExperimentSpec &spec, bool with_nnls,
                                            bool with_omp)
{
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
    auto work = [&](int first)
    {
        for (int t = first; t < spec.trials; t += spec.threads)
            outcomes[static_cast<std::size_t>(t)] =
                run_trial(ctx, spec.seed, static_cast<std::uint64_t>(t), spec.T_grid, with_nnls, with_omp, spec.nnls);
    };
    if (spec.threads == 1)
        work(0);
    else
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < spec.threads; ++w)
            pool.emplace_back(work, w);
    }
    return outcomes;
}

inline PdCurve tally(const std::string &label, const std::vector<int> &T_grid, const std::vector<TrialOutcome> &outcomes,
                     bool omp)
{
    PdCurve curve;
    curve.sweep_value = label;
    for (std::size_t k = 0; k < T_grid.size(); ++k)
    {
        PdPoint pt;
        pt.T = T_grid[k];
        pt.trials = static_cast<int>(outcomes.size());
        for (const auto &o : outcomes)
            pt.successes += (omp ? o.omp[k] : o.nnls[k]) ? 1 : 0;
        pt.p_d = static_cast<double>(pt.successes) / pt.trials;
        const auto ci = wilson_interval(pt.successes, pt.trials);
        pt.ci_low = ci.low;
        pt.ci_high = ci.high;
        curve.points.push_back(pt);
    }
    return curve;
}

inline std::vector<SweepPoint> effective_sweep(const ExperimentSpec &spec)
{
    if (spec.sweep.empty())
        return {{"base", spec.base}};
    return spec.sweep;
}

/// Detection probability versus T for every sweep value.
inline std::vector<PdCurve> run_pd_curve(const ExperimentSpec &spec)
{
    validate(spec);
    std::vector<PdCurve> curves;
    for (const auto &pt : effective_sweep(spec))
    {
        const TrialContext ctx = make_context(pt.config);
        curves.push_back(tally(pt.label, spec.T_grid, run_trials(ctx, spec, true, false), false));
    }
    return curves;
}

struct RobustnessResult
{
    std::vector<PdCurve> curves;      // "nnls/<variation>" and "omp/<variation>"
    std::vector<double> checksums;    // per variation and trial, identical for both solvers
};

// NNLS against the OMP baseline on slow and fast channels. Both solvers see
// the same realizations in every trial; paths, codebooks and noise are also
// shared between the slow and the fast run.
inline RobustnessResult run_robustness_compare(const ExperimentSpec &spec)
{
    validate(spec);
    RobustnessResult res;
    std::vector<SweepPoint> sweep = spec.sweep.empty() ? sweep_variation(spec.base) : spec.sweep;
    for (const auto &pt : sweep)
    {
        const TrialContext ctx = make_context(pt.config);
        const auto outcomes = run_trials(ctx, spec, true, true);
        res.curves.push_back(tally("nnls/" + pt.label, spec.T_grid, outcomes, false));
        res.curves.push_back(tally("omp/" + pt.label, spec.T_grid, outcomes, true));
        for (const auto &o : outcomes)
            res.checksums.push_back(o.checksum);
    }
    return res;
}

inline std::vector<PdCurve> run_chip_duration_sweep(ExperimentSpec spec, const std::vector<int> &divisors = {1, 2, 4})
{
    if (spec.sweep.empty())
        spec.sweep = sweep_chip_duration(spec.base, divisors);
    return run_pd_curve(spec);
}

/// Average received power per delay tap before and after alignment.
struct PdpResult
{
    PathSet paths;
    CellIndex truth;
    std::optional<CellIndex> detected;
    std::vector<double> before; // per tap in [0, d_max]
    std::vector<double> after;
};

// Draws one L-path channel with distinct delays, aligns on it with `c.T`
// beacon slots and then averages |v^H H_l u|^2 per tap over `trials`
// independent gain realizations. Before alignment a random single antenna at
// each end probes the channel; after alignment the DFT beams of the detected
// cell are used.
inline PdpResult run_pdp(const SystemConfig &config, int trials, std::uint64_t seed, bool align_on_truth = false)
{
    if (trials < 1)
        throw config_error("pdp: trials must be at least 1");
    const TrialContext ctx = make_context(config);
    const auto &c = ctx.config;
    PdpResult res;
    {
        Rng rng(seed, StreamTag::paths, {0});
        res.paths = sample_paths(c, rng, true);
    }
    res.truth = strongest_index(ground_truth_gamma(res.paths, c, ctx.link));
    if (align_on_truth)
        res.detected = res.truth;
    else if (c.T > 0)
    {
        const ProbingCodebook cb = sample_codebook(c, codebook_seed(seed, 0), c.T);
        const TrainingData data = simulate_training(res.paths, cb, ctx.R, c, ctx.link, seed, 0, c.T);
        const MeasurementSystem sys = assemble_system(cb, data.q, c, ctx.link);
        res.detected = detect(solve_measurements(sys), c.N);
    }

    const int taps = c.d_max + 1;
    res.before.assign(static_cast<std::size_t>(taps), 0.0);
    res.after.assign(static_cast<std::size_t>(taps), 0.0);
    const double mn = static_cast<double>(c.M) * c.N;
    for (int t = 0; t < trials; ++t)
    {
        Rng rng(seed, StreamTag::pdp, {static_cast<std::uint64_t>(t)});
        const SlotRealization r = draw_slot(res.paths, rng);
        const auto m = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.M)));
        const auto n = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.N)));
        for (std::size_t l = 0; l < res.paths.size(); ++l)
        {
            const auto &p = res.paths.paths[l];
            const cd coeff = r.rho[l];
            // single antenna pair: |a_R[n] a_T[m]^*|^2 = 1 for unit-modulus responses
            const cd a_r = user_response(p, c.N, res.paths.grid)(n);
            const cd a_t = bs_response(p, c.M, res.paths.grid)(m);
            res.before[static_cast<std::size_t>(p.delay_chips)] += std::norm(coeff * a_r * std::conj(a_t)) / mn;
            if (res.detected)
            {
                const CMat Hb = res.paths.grid == AngleGrid::on_grid
                                    ? CMat()
                                    : beamspace_path_matrix(p, coeff, c.M, c.N, res.paths.grid);
                cd g{};
                if (res.paths.grid == AngleGrid::on_grid)
                {
                    if (p.aoa_idx == res.detected->aoa && p.aod_idx == res.detected->aod)
                        g = coeff;
                }
                else
                    g = Hb(res.detected->aoa, res.detected->aod);
                res.after[static_cast<std::size_t>(p.delay_chips)] += std::norm(g);
            }
        }
    }
    for (auto &v : res.before)
        v /= trials;
    for (auto &v : res.after)
        v /= trials;
    return res;
}

// CSV with a fixed column order and number format; equal inputs give equal bytes.
inline std::string to_csv(const std::vector<PdCurve> &curves)
{
    std::ostringstream os;
    os << "sweep_value,T,trials,successes,p_d,ci_low,ci_high\n";
    for (const auto &cv : curves)
        for (const auto &p : cv.points)
            os << cv.sweep_value << ',' << p.T << ',' << p.trials << ',' << p.successes << ',' << format_double(p.p_d)
               << ',' << format_double(p.ci_low) << ',' << format_double(p.ci_high) << '\n';
    return os.str();
}

inline std::string to_json(const std::vector<PdCurve> &curves)
{
    std::ostringstream os;
    os << "{\n  \"columns\": [\"sweep_value\", \"T\", \"trials\", \"successes\", \"p_d\", \"ci_low\", \"ci_high\"],\n";
    os << "  \"rows\": [";
    bool first = true;
    for (const auto &cv : curves)
        for (const auto &p : cv.points)
        {
            os << (first ? "\n" : ",\n");
            first = false;
            os << "    [\"" << cv.sweep_value << "\", " << p.T << ", " << p.trials << ", " << p.successes << ", "
               << format_double(p.p_d) << ", " << format_double(p.ci_low) << ", " << format_double(p.ci_high) << "]";
        }
    os << (first ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

enum class OutputFormat
{
    csv,
    json
};

inline void emit(const std::vector<PdCurve> &curves, OutputFormat format, const std::string &path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    f << (format == OutputFormat::csv ? to_csv(curves) : to_json(curves));
    if (!f)
        throw std::runtime_error("failed writing " + path);
}

} // namespace tdba

#endif
