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

#ifndef TDBA_ARRAYS_HPP
#define TDBA_ARRAYS_HPP

#include "rng.hpp"
#include "system_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tdba
{

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Unitary n-point DFT matrix; column k holds exp(j 2 pi m k / n) / sqrt(n).
inline CMat dft_basis(int n)
{
    if (n < 1)
        throw std::invalid_argument("dft_basis: n must be positive");
    CMat F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
        {
            // reduce m*k modulo n first so the phase stays small
            const auto mk = static_cast<long long>(m) * k % n;
            const double phase = 2.0 * std::numbers::pi * static_cast<double>(mk) / n;
            F(m, k) = std::polar(scale, phase);
        }
    return F;
}

// Array response of an n-element array at a DFT grid point. Entries have unit
// modulus, so the vector equals sqrt(n) times column grid_index of dft_basis(n).
inline CVec steering_vector(int n, int grid_index)
{
    if (n < 1 || grid_index < 0 || grid_index >= n)
        throw std::out_of_range("steering_vector: grid index out of range");
    CVec a(n);
    for (int m = 0; m < n; ++m)
    {
        const auto mk = static_cast<long long>(m) * grid_index % n;
        a(m) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mk) / n);
    }
    return a;
}

// Off-grid response of a half-wavelength ULA, exp(j pi m sin(theta)).
inline CVec steering_vector_angle(int n, double theta_rad)
{
    CVec a(n);
    const double s = std::sin(theta_rad);
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(1.0, std::numbers::pi * m * s);
    return a;
}

// Angle whose half-wavelength response coincides with DFT grid point k.
inline double grid_angle(int n, int k)
{
    double x = 2.0 * static_cast<double>(k) / n; // sin(theta) modulo 2
    if (x >= 1.0)
        x -= 2.0;
    return std::asin(x);
}

/// Beamspace beam with kappa equal nonzeros of amplitude 1/sqrt(kappa).
struct SparseBeam
{
    int dim = 0;
    std::vector<int> support; // sorted, distinct

    int kappa() const { return static_cast<int>(support.size()); }
    double amplitude() const { return 1.0 / std::sqrt(static_cast<double>(support.size())); }
    bool contains(int idx) const { return std::binary_search(support.begin(), support.end(), idx); }

    RVec dense() const
    {
        RVec v = RVec::Zero(dim);
        for (int s : support)
            v(s) = amplitude();
        return v;
    }

    bool operator==(const SparseBeam &) const = default;
};

inline SparseBeam make_beam(int dim, std::vector<int> support)
{
    std::sort(support.begin(), support.end());
    if (support.empty() || std::adjacent_find(support.begin(), support.end()) != support.end() || support.front() < 0 ||
        support.back() >= dim)
        throw std::invalid_argument("make_beam: support must be distinct indices in [0, dim)");
    return SparseBeam{dim, std::move(support)};
}

// Antenna-domain beamforming vector F * beam.
inline CVec antenna_weights(const SparseBeam &beam)
{
    CVec w = CVec::Zero(beam.dim);
    const double a = beam.amplitude();
    const double scale = 1.0 / std::sqrt(static_cast<double>(beam.dim));
    for (int k : beam.support)
        for (int m = 0; m < beam.dim; ++m)
        {
            const auto mk = static_cast<long long>(m) * k % beam.dim;
            w(m) += a * std::polar(scale, 2.0 * std::numbers::pi * static_cast<double>(mk) / beam.dim);
        }
    return w;
}

enum class ArraySide : std::uint64_t
{
    bs = 0,
    user = 1
};

// Uniformly random kappa-subset of [0, n) drawn by partial Fisher-Yates.
inline SparseBeam draw_sparse_beam(int n, int kappa, Rng &rng)
{
    if (kappa < 1 || kappa > n)
        throw std::invalid_argument("draw_sparse_beam: kappa must lie in [1, n]");
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < kappa; ++i)
    {
        const auto j = static_cast<int>(i + rng.uniform_index(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(kappa));
    std::sort(idx.begin(), idx.end());
    return SparseBeam{n, std::move(idx)};
}

/// Pseudo-random probing schedule shared by the BS and every user.
struct ProbingCodebook
{
    std::uint64_t seed = 0;
    int M = 0, N = 0;
    std::vector<std::vector<SparseBeam>> bs;   // [slot][i]
    std::vector<std::vector<SparseBeam>> user; // [slot][j]

    int slots() const { return static_cast<int>(bs.size()); }
    int bs_chains() const { return bs.empty() ? 0 : static_cast<int>(bs.front().size()); }
    int user_chains() const { return user.empty() ? 0 : static_cast<int>(user.front().size()); }

    bool operator==(const ProbingCodebook &) const = default;
};

// One beam per (slot, chain, side), each from its own keyed stream, so any
// prefix of slots is reproduced exactly by a longer draw.
inline SparseBeam codebook_beam(std::uint64_t seed, int slot, int chain, ArraySide side, int n, int kappa)
{
    Rng rng(seed, StreamTag::codebook,
            {static_cast<std::uint64_t>(slot), static_cast<std::uint64_t>(chain), static_cast<std::uint64_t>(side)});
    return draw_sparse_beam(n, kappa, rng);
}

inline ProbingCodebook sample_codebook(const SystemConfig &c, std::uint64_t seed, int slots)
{
    if (c.kappa_u > c.M || c.kappa_v > c.N || c.kappa_u < 1 || c.kappa_v < 1)
        throw config_error("sample_codebook: spreading factor exceeds array size");
    ProbingCodebook cb;
    cb.seed = seed;
    cb.M = c.M;
    cb.N = c.N;
    cb.bs.resize(static_cast<std::size_t>(slots));
    cb.user.resize(static_cast<std::size_t>(slots));
    for (int s = 0; s < slots; ++s)
    {
        for (int i = 0; i < c.M_RF; ++i)
            cb.bs[s].push_back(codebook_beam(seed, s, i, ArraySide::bs, c.M, c.kappa_u));
        for (int j = 0; j < c.N_RF; ++j)
            cb.user[s].push_back(codebook_beam(seed, s, j, ArraySide::user, c.N, c.kappa_v));
    }
    return cb;
}

inline ProbingCodebook sample_codebook(const SystemConfig &c, std::uint64_t seed) { return sample_codebook(c, seed, c.T); }

// Linear index of beamspace cell (aoa, aod) in vec() of the N x M map (column-major).
inline int cell_index(int aoa, int aod, int N) { return aod * N + aoa; }

// Combined probing vector u (x) conj(v); entry m*N + n equals u[m] * conj(v[n]).
inline CVec combined_probe(const SparseBeam &u, const SparseBeam &v)
{
    CVec g = CVec::Zero(static_cast<Eigen::Index>(u.dim) * v.dim);
    const double a = u.amplitude() * v.amplitude();
    for (int m : u.support)
        for (int n : v.support)
            g(cell_index(n, m, v.dim)) = a;
    return g;
}

// Row of the binary measurement matrix: 1 on every probed (aoa, aod) cell.
inline RVec binary_window(const SparseBeam &u, const SparseBeam &v)
{
    RVec b = RVec::Zero(static_cast<Eigen::Index>(u.dim) * v.dim);
    for (int m : u.support)
        for (int n : v.support)
            b(cell_index(n, m, v.dim)) = 1.0;
    return b;
}

// Sorted linear indices of the ones in binary_window(u, v).
inline std::vector<int> window_cells(const SparseBeam &u, const SparseBeam &v)
{
    std::vector<int> cells;
    cells.reserve(u.support.size() * v.support.size());
    for (int m : u.support)
        for (int n : v.support)
            cells.push_back(cell_index(n, m, v.dim));
    return cells;
}

} // namespace tdba

#endif
