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

#ifndef TDBA_SYSTEM_MODEL_HPP
#define TDBA_SYSTEM_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdba
{

inline constexpr double speed_of_light = 299792458.0;

class config_error : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

// How the channel evolves over the training stage.
//  fast: per-slot i.i.d. gains, random Doppler offset per slot, Doppler steps inside a slot
//  slow: gains and phases frozen for all slots, no Doppler
enum class ChannelVariation
{
    fast,
    slow
};

// On-grid angles make the beamspace channel exactly L-sparse.
enum class AngleGrid
{
    on_grid,
    off_grid
};

enum class PnFamily
{
    m_sequence,
    gold
};

// nearest: use the natural LFSR length 2^r - 1 closest to N_c
// exact:   truncate or cyclically extend a longer sequence to exactly N_c chips
enum class PnLengthMode
{
    nearest,
    exact
};

// exact:  matched filter output includes the other chains' cross-correlations
// approx: cross-correlations between distinct PN sequences are dropped
enum class CrossCorrelation
{
    exact,
    approx
};

/// All scalar parameters of one BS/user link plus the simulation switches.
struct SystemConfig
{
    int M = 32;        // BS antennas
    int N = 32;        // user antennas
    int M_RF = 3;      // BS RF chains
    int N_RF = 2;      // user RF chains
    int kappa_u = 16;  // nonzeros per BS beam
    int kappa_v = 16;  // nonzeros per user beam
    double B = 1.76e9; // maximum bandwidth [Hz]
    int p = 1;         // bandwidth divisor, B' = B / p
    int N_c = 511;     // chips per PN sequence
    int S = 6;         // PN sequences per beacon slot
    int T = 50;        // beacon slots
    double f0 = 70e9;  // carrier [Hz]
    double snr_bbf_db = -15.0;
    double N0 = 1.0; // noise PSD [W/Hz]
    int L = 1;       // paths
    int d_max = 16;  // maximum delay [chips]
    std::uint64_t seed = 1;

    ChannelVariation variation = ChannelVariation::fast;
    AngleGrid grid = AngleGrid::on_grid;
    PnFamily pn_family = PnFamily::gold;
    PnLengthMode pn_length = PnLengthMode::nearest;
    CrossCorrelation cross_correlation = CrossCorrelation::approx; // inter-chain terms dropped, as in the measurement model
    double speed_min = 1.0; // relative speed range [m/s]
    double speed_max = 5.0;
    std::vector<double> gammas; // explicit path powers; empty = random

    double bandwidth() const { return B / static_cast<double>(p); }
    double chip_duration() const { return static_cast<double>(p) / B; }
    int ncheck() const { return N_c + d_max; }
    int unknowns() const { return M * N; }
    int rows_per_slot() const { return M_RF * N_RF; }
};

inline void validate(const SystemConfig &c)
{
    auto positive = [](int v, const char *name)
    {
        if (v <= 0)
            throw config_error(std::string(name) + " must be positive");
    };
    positive(c.M, "M");
    positive(c.N, "N");
    positive(c.M_RF, "M_RF");
    positive(c.N_RF, "N_RF");
    positive(c.kappa_u, "kappa_u");
    positive(c.kappa_v, "kappa_v");
    positive(c.p, "p");
    positive(c.N_c, "N_c");
    positive(c.S, "S");
    positive(c.L, "L");
    if (c.T < 0)
        throw config_error("T must be non-negative");
    if (c.d_max < 0)
        throw config_error("d_max must be non-negative");
    if (!(c.B > 0.0) || !std::isfinite(c.B))
        throw config_error("bandwidth B must be positive");
    if (!(c.N0 > 0.0) || !std::isfinite(c.N0))
        throw config_error("N0 must be positive");
    if (!std::isfinite(c.snr_bbf_db))
        throw config_error("snr_bbf_db must be finite");
    if (c.M_RF > c.M)
        throw config_error("M_RF must not exceed M");
    if (c.N_RF > c.N)
        throw config_error("N_RF must not exceed N");
    if (c.kappa_u > c.M)
        throw config_error("kappa_u must not exceed M");
    if (c.kappa_v > c.N)
        throw config_error("kappa_v must not exceed N");
    if (c.L > std::min(c.M, c.N))
        throw config_error("L must not exceed min(M, N)");
    if (c.speed_min < 0.0 || c.speed_max < c.speed_min)
        throw config_error("invalid relative speed range");
    if (!c.gammas.empty())
    {
        if (static_cast<int>(c.gammas.size()) != c.L)
            throw config_error("gammas must have L entries");
        for (double g : c.gammas)
            if (!(g >= 0.0) || !std::isfinite(g))
                throw config_error("gammas must be non-negative");
    }
}

/// Timing and energy quantities implied by a configuration.
struct DerivedLink
{
    double T_c = 0.0;            // chip duration [s]
    double t0 = 0.0;             // PN sequence duration [s]
    int Ncheck = 0;              // matched-filter output length
    double Rx0 = 0.0;            // energy per PN sequence [J]
    double P_tot = 0.0;          // total BS transmit power [W]
    double noise_var_chip = 0.0; // variance of one matched-filter noise sample
    double bandwidth = 0.0;      // B' [Hz]

    // Variance of one chip-rate noise sample before matched filtering (N0 * B').
    double chip_noise_var(double N0) const { return N0 * bandwidth; }
    // Amplitude of one transmitted chip so that a sequence carries Rx0.
    double chip_amplitude(int N_c) const { return std::sqrt(Rx0 / (static_cast<double>(N_c) * T_c)); }
};

/// Calibrates transmit power from the SNR before beamforming,
/// P_tot * sum(gamma) / (M N N0 B) = 10^(snr_bbf_db / 10).
inline DerivedLink derive_link(const SystemConfig &c, double sum_gamma = 1.0)
{
    validate(c);
    if (!(sum_gamma > 0.0))
        throw config_error("sum of path gains must be positive");
    DerivedLink d;
    d.bandwidth = c.bandwidth();
    d.T_c = c.chip_duration();
    d.t0 = static_cast<double>(c.N_c) * d.T_c;
    d.Ncheck = c.ncheck();
    const double snr = std::pow(10.0, c.snr_bbf_db / 10.0);
    d.P_tot = snr * static_cast<double>(c.M) * static_cast<double>(c.N) * c.N0 * c.B / sum_gamma;
    d.Rx0 = d.P_tot * static_cast<double>(c.N_c) / (static_cast<double>(c.M_RF) * d.bandwidth);
    d.noise_var_chip = c.N0 * d.Rx0;
    return d;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

namespace detail
{
inline double beam_divisor(const SystemConfig &c, const DerivedLink &link)
{
    return static_cast<double>(c.kappa_u) * c.kappa_v * c.M_RF * c.N_RF * c.N0 * link.bandwidth;
}
} // namespace detail

// SNR of matched-filter output sample k; zero when no path sits on tap k.
inline double snr_per_chip(const DerivedLink &link, const SystemConfig &c, std::span<const double> gains, int k,
                           std::span<const int> delays)
{
    if (gains.size() != delays.size())
        throw config_error("gains and delays must have equal length");
    double hit = 0.0;
    for (std::size_t l = 0; l < gains.size(); ++l)
        if (delays[l] == k)
            hit += gains[l];
    return link.P_tot * static_cast<double>(c.N_c) * hit / detail::beam_divisor(c, link);
}

// SNR of one slot-averaged energy measurement. The approximate form drops the
// factor N_c / Ncheck, which is close to one for long sequences.
inline double snr_measurement(const DerivedLink &link, const SystemConfig &c, std::span<const double> gains,
                              bool exact = false)
{
    const double total = std::accumulate(gains.begin(), gains.end(), 0.0);
    double snr = link.P_tot * total / detail::beam_divisor(c, link);
    if (exact)
        snr *= static_cast<double>(c.N_c) / static_cast<double>(link.Ncheck);
    return snr;
}

} // namespace tdba

#endif
