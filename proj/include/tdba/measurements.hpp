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

#ifndef TDBA_MEASUREMENTS_HPP
#define TDBA_MEASUREMENTS_HPP

#include "arrays.hpp"
#include "channel.hpp"
#include "rng.hpp"
#include "system_model.hpp"
#include "waveforms.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace tdba
{

using CSeries = std::vector<cd>;

/// Received chip-rate samples of every user RF chain for one PN sequence.
struct ChipFrame
{
    int slot = 0;
    int s_prime = 0;
    std::vector<CSeries> y; // [j][tau], tau in [0, Ncheck + N_c - 1)
};

// Number of chip samples needed for the matched filter to see every delayed copy.
inline int frame_length(const SystemConfig &c) { return c.ncheck() + c.N_c - 1; }

// Chip-level synthesis of the user RF-chain outputs for one sequence. All
// BS chains transmit at once; chain i is beamformed by F_M u_i and the user
// combines with F_N v_j / sqrt(N_RF). Pass rng = nullptr for a noiseless frame.
inline ChipFrame synth_chip_level(const PathSet &ps, std::span<const cd> coeffs, std::span<const SparseBeam> bs_beams,
                                  std::span<const SparseBeam> user_beams, std::span<const ChipWaveform> waveforms,
                                  const SystemConfig &c, const DerivedLink &link, Rng *rng)
{
    if (coeffs.size() != ps.size() || waveforms.size() != bs_beams.size())
        throw std::invalid_argument("synth_chip_level: dimension mismatch");
    const int len = frame_length(c);
    const double inv_sqrt_nrf = 1.0 / std::sqrt(static_cast<double>(c.N_RF));

    std::vector<CVec> u;
    for (const auto &b : bs_beams)
        u.push_back(antenna_weights(b));

    ChipFrame frame;
    frame.y.assign(user_beams.size(), CSeries(static_cast<std::size_t>(len)));
    for (std::size_t j = 0; j < user_beams.size(); ++j)
    {
        const CVec v = antenna_weights(user_beams[j]);
        auto &y = frame.y[j];
        for (std::size_t l = 0; l < ps.size(); ++l)
        {
            const auto &path = ps.paths[l];
            const CMat H = antenna_path_matrix(path, coeffs[l], c.M, c.N, ps.grid);
            for (std::size_t i = 0; i < u.size(); ++i)
            {
                const cd gain = v.dot(H * u[i]) * inv_sqrt_nrf; // v^H H u
                const auto &x = waveforms[i];
                for (int n = 0; n < x.length(); ++n)
                {
                    const int tau = n + path.delay_chips;
                    if (tau < len)
                        y[static_cast<std::size_t>(tau)] += gain * x.sample(n);
                }
            }
        }
        if (rng)
        {
            const double var = link.chip_noise_var(c.N0);
            for (auto &s : y)
                s += rng->complex_normal(var);
        }
    }
    return frame;
}

// Complex gain a = g^T h of one path seen through beams (u_i, v_j):
// u[aod] * v[aoa] * coeff / sqrt(N_RF).
inline cd window_gain(const SparseBeam &u, const SparseBeam &v, int aoa, int aod, cd coeff, int n_rf)
{
    if (!u.contains(aod) || !v.contains(aoa))
        return {};
    return coeff * (u.amplitude() * v.amplitude() / std::sqrt(static_cast<double>(n_rf)));
}

// Signal components of the matched-filter output of BS chain i at user chain j,
// one series per (transmitting chain, path) pair that reaches the output.
// Approximate mode keeps only i' = i.
inline std::vector<CSeries> signal_components(const std::vector<BeamspaceComponent> &h,
                                              std::span<const SparseBeam> bs_beams, const SparseBeam &v, int i,
                                              const CorrelationTable &R, const SystemConfig &c)
{
    std::vector<CSeries> comps;
    const int ncheck = c.ncheck();
    for (int ip = 0; ip < static_cast<int>(bs_beams.size()); ++ip)
    {
        if (c.cross_correlation == CrossCorrelation::approx && ip != i)
            continue;
        for (const auto &comp : h)
        {
            const cd a = window_gain(bs_beams[static_cast<std::size_t>(ip)], v, comp.aoa, comp.aod, comp.value, c.N_RF);
            if (a == cd{})
                continue;
            CSeries s(static_cast<std::size_t>(ncheck));
            for (int k = 0; k < ncheck; ++k)
                s[static_cast<std::size_t>(k)] = a * R(ip, i, k - comp.delay);
            comps.push_back(std::move(s));
        }
    }
    return comps;
}

// Closed-form matched-filter output y_{s,i,j}[k] over k in [0, Ncheck).
// `noise` holds the filtered noise samples; empty means noiseless.
inline CSeries closed_form_mf_output(const std::vector<BeamspaceComponent> &h, std::span<const SparseBeam> bs_beams,
                                     const SparseBeam &v, int i, const CorrelationTable &R, const SystemConfig &c,
                                     std::span<const cd> noise = {})
{
    const int ncheck = c.ncheck();
    if (!noise.empty() && static_cast<int>(noise.size()) != ncheck)
        throw std::invalid_argument("closed_form_mf_output: noise length must equal Ncheck");
    CSeries y(static_cast<std::size_t>(ncheck));
    for (std::size_t k = 0; k < noise.size(); ++k)
        y[k] = noise[k];
    for (int ip = 0; ip < static_cast<int>(bs_beams.size()); ++ip)
    {
        if (c.cross_correlation == CrossCorrelation::approx && ip != i)
            continue;
        for (const auto &comp : h)
        {
            const cd a = window_gain(bs_beams[static_cast<std::size_t>(ip)], v, comp.aoa, comp.aod, comp.value, c.N_RF);
            if (a == cd{})
                continue;
            const int lo = std::max(0, comp.delay - (R.length() - 1));
            const int hi = std::min(ncheck, comp.delay + R.length());
            for (int k = lo; k < hi; ++k)
                y[static_cast<std::size_t>(k)] += a * R(ip, i, k - comp.delay);
        }
    }
    return y;
}

// Matched-filter energy sum_k |y[k]|^2.
inline double energy(std::span<const cd> y)
{
    double e = 0.0;
    for (const auto &v : y)
        e += std::norm(v);
    return e;
}

/// The four parts of one matched-filter energy: q = signal + noise + cross_signal + cross_noise.
struct EnergyTerms
{
    double signal = 0.0;       // sum over components of their own energy
    double noise = 0.0;        // sum_k |z[k]|^2
    double cross_signal = 0.0; // pairwise products of distinct components
    double cross_noise = 0.0;  // 2 Re sum_k s[k] z*[k]

    double total() const { return signal + noise + cross_signal + cross_noise; }
    double idealized() const { return signal + noise; }
};

inline EnergyTerms decompose_energy(const std::vector<CSeries> &components, std::span<const cd> noise)
{
    EnergyTerms t;
    const std::size_t n = components.empty() ? noise.size() : components.front().size();
    for (const auto &s : components)
        t.signal += energy(s);
    t.noise = energy(noise);
    for (std::size_t a = 0; a < components.size(); ++a)
        for (std::size_t b = 0; b < components.size(); ++b)
            if (a != b)
                for (std::size_t k = 0; k < n; ++k)
                    t.cross_signal += std::real(components[a][k] * std::conj(components[b][k]));
    if (!noise.empty())
        for (const auto &s : components)
            for (std::size_t k = 0; k < n; ++k)
                t.cross_noise += 2.0 * std::real(s[k] * std::conj(noise[k]));
    return t;
}

inline double slot_average(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("slot_average: no sequences");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

/// Stacked energy measurements q = B vec(Gamma) + offset + w.
struct MeasurementSystem
{
    RMat B;                                // rows (s, i, j), columns vec() of the N x M map
    RVec q;                                // slot-averaged energies
    double noise_offset = 0.0;             // Ncheck * N0 * Rx0
    std::vector<std::vector<int>> windows; // column indices of the ones of each row

    int rows() const { return static_cast<int>(B.rows()); }
    int cols() const { return static_cast<int>(B.cols()); }
    RVec rhs() const { return q.array() - noise_offset; }

    MeasurementSystem head(int n_rows) const
    {
        if (n_rows < 0 || n_rows > rows())
            throw std::out_of_range("MeasurementSystem::head");
        MeasurementSystem out;
        out.B = B.topRows(n_rows);
        out.q = q.head(n_rows);
        out.noise_offset = noise_offset;
        out.windows.assign(windows.begin(), windows.begin() + n_rows);
        return out;
    }
};

inline int row_index(int s, int i, int j, const SystemConfig &c) { return (s * c.M_RF + i) * c.N_RF + j; }

// Rows ordered slot-major, then BS chain, then user chain.
inline MeasurementSystem assemble_system(const ProbingCodebook &cb, std::span<const double> q, const SystemConfig &c,
                                         const DerivedLink &link)
{
    const int per_slot = c.M_RF * c.N_RF;
    if (q.size() % static_cast<std::size_t>(per_slot) != 0)
        throw std::invalid_argument("assemble_system: measurement count is not a whole number of slots");
    const int slots = static_cast<int>(q.size()) / per_slot;
    if (slots > cb.slots() || cb.bs_chains() != c.M_RF || cb.user_chains() != c.N_RF || cb.M != c.M || cb.N != c.N)
        throw std::invalid_argument("assemble_system: codebook does not match the measurements");
    MeasurementSystem sys;
    sys.B = RMat::Zero(static_cast<Eigen::Index>(q.size()), static_cast<Eigen::Index>(c.M) * c.N);
    sys.q = Eigen::Map<const RVec>(q.data(), static_cast<Eigen::Index>(q.size()));
    sys.noise_offset = static_cast<double>(link.Ncheck) * c.N0 * link.Rx0;
    sys.windows.resize(q.size());
    for (int s = 0; s < slots; ++s)
        for (int i = 0; i < c.M_RF; ++i)
            for (int j = 0; j < c.N_RF; ++j)
            {
                const int r = row_index(s, i, j, c);
                auto cells = window_cells(cb.bs[s][i], cb.user[s][j]);
                for (int col : cells)
                    sys.B(r, col) = 1.0;
                std::sort(cells.begin(), cells.end());
                sys.windows[static_cast<std::size_t>(r)] = std::move(cells);
            }
    return sys;
}

/// Everything the receiver observes during the training stage of one trial.
struct TrainingData
{
    std::vector<double> q;                 // slot-averaged energies, rows (s, i, j)
    std::vector<CSeries> coherent;         // slot-averaged complex MF outputs, rows (s, i, j); optional
    std::vector<SlotRealization> slots;    // channel state per slot
    double checksum = 0.0;                 // sum of |y|^2 over every sequence, for pairing checks
};

struct SimulationOptions
{
    bool noise = true;
    bool keep_coherent = false;
    bool idealized = false; // drop the cross terms of the energy expansion
};

// Closed-form simulation of `slots` beacon slots. Random streams are keyed by
// (seed, trial, slot), so the first T slots do not depend on how many follow.
inline TrainingData simulate_training(const PathSet &ps, const ProbingCodebook &cb, const CorrelationTable &R,
                                      const SystemConfig &c, const DerivedLink &link, std::uint64_t seed,
                                      std::uint64_t trial, int slots, const SimulationOptions &opt = {})
{
    if (slots > cb.slots())
        throw std::invalid_argument("simulate_training: codebook has too few slots");
    const int ncheck = c.ncheck();
    const double noise_var = link.noise_var_chip;
    TrainingData out;
    out.q.assign(static_cast<std::size_t>(slots) * c.M_RF * c.N_RF, 0.0);
    if (opt.keep_coherent)
        out.coherent.assign(out.q.size(), CSeries(static_cast<std::size_t>(ncheck)));

    SlotRealization frozen;
    if (c.variation == ChannelVariation::slow)
    {
        Rng rng(seed, StreamTag::slot, {trial, 0});
        frozen = draw_slot(ps, rng);
    }

    CSeries noise(static_cast<std::size_t>(ncheck));
    for (int s = 0; s < slots; ++s)
    {
        SlotRealization real;
        if (c.variation == ChannelVariation::slow)
            real = frozen;
        else
        {
            Rng rng(seed, StreamTag::slot, {trial, static_cast<std::uint64_t>(s)});
            real = draw_slot(ps, rng);
        }
        Rng noise_rng(seed, StreamTag::noise, {trial, static_cast<std::uint64_t>(s)});
        const auto &bs = cb.bs[static_cast<std::size_t>(s)];
        const auto &user = cb.user[static_cast<std::size_t>(s)];

        for (int sp = 0; sp < c.S; ++sp)
        {
            const auto h = realize_sequence(ps, real, sp, link.t0, c.variation);
            for (int j = 0; j < c.N_RF; ++j)
                for (int i = 0; i < c.M_RF; ++i)
                {
                    if (opt.noise)
                        for (auto &z : noise)
                            z = noise_rng.complex_normal(noise_var);
                    double e;
                    CSeries y;
                    if (opt.idealized)
                    {
                        const auto comps = signal_components(h, bs, user[static_cast<std::size_t>(j)], i, R, c);
                        const auto terms = decompose_energy(
                            comps, opt.noise ? std::span<const cd>(noise) : std::span<const cd>());
                        e = terms.idealized();
                    }
                    else
                    {
                        y = closed_form_mf_output(h, bs, user[static_cast<std::size_t>(j)], i, R, c,
                                                  opt.noise ? std::span<const cd>(noise) : std::span<const cd>());
                        e = energy(y);
                    }
                    const auto r = static_cast<std::size_t>(row_index(s, i, j, c));
                    out.q[r] += e / c.S;
                    out.checksum += e;
                    if (opt.keep_coherent && !opt.idealized)
                        for (int k = 0; k < ncheck; ++k)
                            out.coherent[r][static_cast<std::size_t>(k)] += y[static_cast<std::size_t>(k)] / static_cast<double>(c.S);
                }
        }
        out.slots.push_back(std::move(real));
    }
    return out;
}

} // namespace tdba

#endif
