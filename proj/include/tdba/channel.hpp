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

#ifndef TDBA_CHANNEL_HPP
#define TDBA_CHANNEL_HPP

#include "arrays.hpp"
#include "rng.hpp"
#include "system_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tdba
{

/// One scattering cluster: a single (AoA, AoD, delay) point with Rayleigh gain.
struct Path
{
    double gamma = 0.0;     // E|rho|^2
    int aod_idx = 0;        // BS grid index in [0, M)
    int aoa_idx = 0;        // user grid index in [0, N)
    int delay_chips = 0;    // in [0, d_max]
    double doppler_hz = 0.0;
    double aod_rad = 0.0;   // continuous angles, used in off-grid mode
    double aoa_rad = 0.0;

    bool operator==(const Path &) const = default;
};

struct PathSet
{
    AngleGrid grid = AngleGrid::on_grid;
    std::vector<Path> paths;

    std::size_t size() const { return paths.size(); }
    double total_gain() const
    {
        double s = 0.0;
        for (const auto &p : paths)
            s += p.gamma;
        return s;
    }
    bool operator==(const PathSet &) const = default;
};

/// Per-slot random state: complex gains and the slot-initial Doppler phase (cycles).
struct SlotRealization
{
    std::vector<cd> rho;
    std::vector<double> phase0;
};

// Samples L clusters with distinct (aoa, aod) cells. Path gains come from a
// flat Dirichlet sorted in decreasing order unless the config fixes them.
inline PathSet sample_paths(const SystemConfig &c, Rng &rng, bool distinct_delays = false)
{
    if (c.L < 1)
        throw config_error("sample_paths: need at least one path");
    if (static_cast<long long>(c.L) > static_cast<long long>(c.M) * c.N)
        throw config_error("sample_paths: more paths than beamspace cells");
    if (distinct_delays && c.L > c.d_max + 1)
        throw config_error("sample_paths: not enough delay taps for distinct delays");

    PathSet ps;
    ps.grid = c.grid;
    ps.paths.resize(static_cast<std::size_t>(c.L));

    std::vector<double> g;
    if (!c.gammas.empty())
        g = c.gammas;
    else
    {
        for (int l = 0; l < c.L; ++l)
            g.push_back(rng.exponential());
        std::sort(g.begin(), g.end(), std::greater<>());
    }
    const double total = std::accumulate(g.begin(), g.end(), 0.0);
    if (!(total > 0.0))
        throw config_error("sample_paths: path gains sum to zero");

    std::set<std::pair<int, int>> cells;
    std::set<int> taps;
    for (int l = 0; l < c.L; ++l)
    {
        auto &p = ps.paths[static_cast<std::size_t>(l)];
        p.gamma = g[static_cast<std::size_t>(l)] / total;
        do
        {
            p.aoa_idx = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.N)));
            p.aod_idx = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.M)));
        } while (!cells.emplace(p.aoa_idx, p.aod_idx).second);
        do
            p.delay_chips = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(c.d_max) + 1));
        while (distinct_delays && !taps.insert(p.delay_chips).second);

        const double speed = rng.uniform(c.speed_min, c.speed_max);
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        p.doppler_hz = sign * speed * c.f0 / speed_of_light;

        if (c.grid == AngleGrid::off_grid)
        {
            // grid point plus a uniform offset of up to half a bin in sin-space
            const double du = rng.uniform(-0.5, 0.5);
            const double dv = rng.uniform(-0.5, 0.5);
            auto angle = [](int n, double k)
            {
                double x = 2.0 * k / n;
                while (x >= 1.0)
                    x -= 2.0;
                while (x < -1.0)
                    x += 2.0;
                return std::asin(x);
            };
            p.aod_rad = angle(c.M, p.aod_idx + du);
            p.aoa_rad = angle(c.N, p.aoa_idx + dv);
        }
        else
        {
            p.aod_rad = grid_angle(c.M, p.aod_idx);
            p.aoa_rad = grid_angle(c.N, p.aoa_idx);
        }
    }
    return ps;
}

inline SlotRealization draw_slot(const PathSet &ps, Rng &rng)
{
    SlotRealization r;
    r.rho.reserve(ps.size());
    r.phase0.reserve(ps.size());
    for (const auto &p : ps.paths)
        r.rho.push_back(rng.complex_normal(p.gamma));
    for (std::size_t l = 0; l < ps.size(); ++l)
        r.phase0.push_back(rng.uniform());
    return r;
}

// Coefficient of path l for sequence s_prime inside a slot. Slow channels
// carry no Doppler, so the coefficient is frozen.
inline cd sequence_coefficient(const Path &p, const SlotRealization &r, std::size_t l, int s_prime, double t0,
                               ChannelVariation variation)
{
    double cycles = r.phase0[l];
    if (variation == ChannelVariation::fast)
        cycles += p.doppler_hz * t0 * static_cast<double>(s_prime);
    return r.rho[l] * std::polar(1.0, 2.0 * std::numbers::pi * cycles);
}

/// Nonzero of one on-grid beamspace path matrix.
struct BeamspaceComponent
{
    int aoa = 0;
    int aod = 0;
    int delay = 0;
    cd value;
};

// Beamspace channel of sequence s_prime. Each path matrix is
// coeff * a_R a_T^H / sqrt(M N) with unit-modulus responses, so on the grid
// its only nonzero is coeff itself.
inline std::vector<BeamspaceComponent> realize_sequence(const PathSet &ps, const SlotRealization &r, int s_prime,
                                                        double t0, ChannelVariation variation)
{
    if (ps.grid != AngleGrid::on_grid)
        throw std::logic_error("realize_sequence: sparse form requires on-grid paths");
    std::vector<BeamspaceComponent> out;
    out.reserve(ps.size());
    for (std::size_t l = 0; l < ps.size(); ++l)
    {
        const auto &p = ps.paths[l];
        out.push_back({p.aoa_idx, p.aod_idx, p.delay_chips, sequence_coefficient(p, r, l, s_prime, t0, variation)});
    }
    return out;
}

inline CVec bs_response(const Path &p, int M, AngleGrid grid)
{
    return grid == AngleGrid::on_grid ? steering_vector(M, p.aod_idx) : steering_vector_angle(M, p.aod_rad);
}

inline CVec user_response(const Path &p, int N, AngleGrid grid)
{
    return grid == AngleGrid::on_grid ? steering_vector(N, p.aoa_idx) : steering_vector_angle(N, p.aoa_rad);
}

// Antenna-domain N x M matrix of one path for a given coefficient.
inline CMat antenna_path_matrix(const Path &p, cd coeff, int M, int N, AngleGrid grid)
{
    const CVec aR = user_response(p, N, grid);
    const CVec aT = bs_response(p, M, grid);
    return (coeff / std::sqrt(static_cast<double>(M) * N)) * aR * aT.adjoint();
}

// Dense beamspace matrix F_N^H H F_M.
inline CMat beamspace_path_matrix(const Path &p, cd coeff, int M, int N, AngleGrid grid)
{
    return dft_basis(N).adjoint() * antenna_path_matrix(p, coeff, M, N, grid) * dft_basis(M);
}

/// Non-negative N x M angle-domain power map.
struct IntensityMap
{
    RMat values;

    int rows() const { return static_cast<int>(values.rows()); }
    int cols() const { return static_cast<int>(values.cols()); }
    // vec() in column-major order; matches cell_index().
    RVec vec() const { return Eigen::Map<const RVec>(values.data(), values.size()); }
};

// Scale that maps E|beamspace entry|^2 to the second-order map.
inline double gamma_scale(const SystemConfig &c, const DerivedLink &link)
{
    return link.Rx0 * link.Rx0 / (static_cast<double>(c.kappa_u) * c.kappa_v * c.N_RF);
}

inline IntensityMap ground_truth_gamma(const PathSet &ps, const SystemConfig &c, const DerivedLink &link)
{
    IntensityMap map{RMat::Zero(c.N, c.M)};
    const double scale = gamma_scale(c, link);
    for (const auto &p : ps.paths)
    {
        if (ps.grid == AngleGrid::on_grid)
            map.values(p.aoa_idx, p.aod_idx) += p.gamma * scale;
        else
        {
            const CMat Hb = beamspace_path_matrix(p, cd(1.0, 0.0), c.M, c.N, ps.grid);
            map.values += p.gamma * scale * Hb.cwiseAbs2();
        }
    }
    return map;
}

// Map of one realization, |rho|^2 in place of E|rho|^2.
inline IntensityMap instantaneous_gamma(const PathSet &ps, const SlotRealization &r, const SystemConfig &c,
                                        const DerivedLink &link)
{
    PathSet tmp = ps;
    for (std::size_t l = 0; l < ps.size(); ++l)
        tmp.paths[l].gamma = std::norm(r.rho[l]);
    return ground_truth_gamma(tmp, c, link);
}

struct CellIndex
{
    int aoa = 0;
    int aod = 0;
    bool operator==(const CellIndex &) const = default;
};

// Argmax over a column-major vector; ties go to the smallest linear index.
// Returns -1 when no entry is positive.
template <typename Vec>
inline Eigen::Index argmax_first(const Vec &v)
{
    Eigen::Index best = -1;
    double best_val = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
        if (v(k) > best_val)
        {
            best_val = v(k);
            best = k;
        }
    return best;
}

inline CellIndex strongest_index(const IntensityMap &map)
{
    const Eigen::Index k = argmax_first(map.vec());
    if (k < 0)
        throw std::domain_error("strongest_index: map has no positive entry");
    const auto n = static_cast<Eigen::Index>(map.rows());
    return {static_cast<int>(k % n), static_cast<int>(k / n)};
}

} // namespace tdba

#endif
