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

#ifndef TDBA_OMP_HPP
#define TDBA_OMP_HPP

#include "arrays.hpp"
#include "channel.hpp"
#include "measurements.hpp"
#include "waveforms.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace tdba
{

struct OmpResult
{
    std::optional<CellIndex> cell;
    std::vector<int> support_cells;  // selected dictionary atoms: beamspace cell
    std::vector<int> support_delays; // and delay tap
    CVec coefficients;
    RVec cell_energy; // sum over taps of |h|^2 per cell
};

// Instantaneous-channel baseline. The model stacks every complex equation
//   y_{s,i,j}[k] = sum_{cell,d} g_{s,i,j}[cell] R_ii(k - d) h[cell, d] + z
// with one unknown per (beamspace cell, delay tap), assuming h is constant for
// the whole training stage. `outputs` holds the slot-averaged matched-filter
// outputs, rows ordered (s, i, j), each of length Ncheck.
//
// All dictionary products are formed in the correlation domain: for each row
// P_row[d] = sum_k R_ii(k - d) y_row[k], so the stacked system never has to be
// materialized.
inline OmpResult omp_baseline(const std::vector<CSeries> &outputs, const ProbingCodebook &cb,
                              const CorrelationTable &R, const SystemConfig &c, int K)
{
    if (K < 0)
        throw std::invalid_argument("omp_baseline: sparsity must be non-negative");
    OmpResult res;
    const int cells = c.M * c.N;
    const int taps = c.d_max + 1;
    const int ncheck = c.ncheck();
    res.cell_energy = RVec::Zero(cells);
    if (K == 0 || outputs.empty())
        return res;
    const int per_slot = c.M_RF * c.N_RF;
    if (outputs.size() % static_cast<std::size_t>(per_slot) != 0)
        throw std::invalid_argument("omp_baseline: output count is not a whole number of slots");
    const int rows = static_cast<int>(outputs.size());
    const int slots = rows / per_slot;
    if (slots > cb.slots())
        throw std::invalid_argument("omp_baseline: codebook has too few slots");

    const double gval = 1.0 / std::sqrt(static_cast<double>(c.kappa_u) * c.kappa_v);

    // X_i(d, d') = sum_k R_ii(k - d) R_ii(k - d') over the output window
    std::vector<RMat> X(static_cast<std::size_t>(c.M_RF), RMat::Zero(taps, taps));
    for (int i = 0; i < c.M_RF; ++i)
        for (int d = 0; d < taps; ++d)
            for (int e = d; e < taps; ++e)
            {
                double acc = 0.0;
                for (int k = 0; k < ncheck; ++k)
                    acc += R(i, i, k - d) * R(i, i, k - e);
                X[static_cast<std::size_t>(i)](d, e) = acc;
                X[static_cast<std::size_t>(i)](e, d) = acc;
            }

    std::vector<std::vector<int>> windows(static_cast<std::size_t>(rows));
    std::vector<int> chain(static_cast<std::size_t>(rows));
    CMat P(rows, taps);
    for (int s = 0; s < slots; ++s)
        for (int i = 0; i < c.M_RF; ++i)
            for (int j = 0; j < c.N_RF; ++j)
            {
                const int r = row_index(s, i, j, c);
                windows[static_cast<std::size_t>(r)] = window_cells(cb.bs[s][i], cb.user[s][j]);
                chain[static_cast<std::size_t>(r)] = i;
                const auto &y = outputs[static_cast<std::size_t>(r)];
                if (static_cast<int>(y.size()) != ncheck)
                    throw std::invalid_argument("omp_baseline: output length must equal Ncheck");
                for (int d = 0; d < taps; ++d)
                {
                    cd acc{};
                    for (int k = 0; k < ncheck; ++k)
                        acc += R(i, i, k - d) * y[static_cast<std::size_t>(k)];
                    P(r, d) = acc;
                }
            }

    // squared column norms
    RMat col_norm2 = RMat::Zero(cells, taps);
    for (int r = 0; r < rows; ++r)
        for (int cell : windows[static_cast<std::size_t>(r)])
            for (int d = 0; d < taps; ++d)
                col_norm2(cell, d) += gval * gval * X[static_cast<std::size_t>(chain[static_cast<std::size_t>(r)])](d, d);

    // membership lookup: row -> cell -> in window?
    std::vector<std::vector<char>> in_window(static_cast<std::size_t>(rows), std::vector<char>(static_cast<std::size_t>(cells), 0));
    for (int r = 0; r < rows; ++r)
        for (int cell : windows[static_cast<std::size_t>(r)])
            in_window[static_cast<std::size_t>(r)][static_cast<std::size_t>(cell)] = 1;

    CMat Pres = P;
    std::vector<char> chosen(static_cast<std::size_t>(cells) * taps, 0);
    for (int it = 0; it < K && it < cells * taps; ++it)
    {
        CMat corr = CMat::Zero(cells, taps);
        for (int r = 0; r < rows; ++r)
            for (int cell : windows[static_cast<std::size_t>(r)])
                corr.row(cell) += gval * Pres.row(r);

        int best_cell = -1, best_tap = -1;
        double best = -1.0;
        for (int cell = 0; cell < cells; ++cell)
            for (int d = 0; d < taps; ++d)
            {
                if (chosen[static_cast<std::size_t>(cell) * taps + d] || col_norm2(cell, d) <= 0.0)
                    continue;
                const double score = std::norm(corr(cell, d)) / col_norm2(cell, d);
                if (score > best)
                {
                    best = score;
                    best_cell = cell;
                    best_tap = d;
                }
            }
        if (best_cell < 0)
            break;
        chosen[static_cast<std::size_t>(best_cell) * taps + best_tap] = 1;
        res.support_cells.push_back(best_cell);
        res.support_delays.push_back(best_tap);

        // least-squares refit on the support
        const auto ks = static_cast<Eigen::Index>(res.support_cells.size());
        CMat gram = CMat::Zero(ks, ks);
        CVec rhs = CVec::Zero(ks);
        for (int r = 0; r < rows; ++r)
        {
            const auto &member = in_window[static_cast<std::size_t>(r)];
            const auto &Xi = X[static_cast<std::size_t>(chain[static_cast<std::size_t>(r)])];
            for (Eigen::Index a = 0; a < ks; ++a)
            {
                if (!member[static_cast<std::size_t>(res.support_cells[static_cast<std::size_t>(a)])])
                    continue;
                rhs(a) += gval * P(r, res.support_delays[static_cast<std::size_t>(a)]);
                for (Eigen::Index b = 0; b < ks; ++b)
                    if (member[static_cast<std::size_t>(res.support_cells[static_cast<std::size_t>(b)])])
                        gram(a, b) += gval * gval *
                                      Xi(res.support_delays[static_cast<std::size_t>(a)], res.support_delays[static_cast<std::size_t>(b)]);
            }
        }
        res.coefficients = gram.ldlt().solve(rhs);

        // residual in the correlation domain
        Pres = P;
        for (int r = 0; r < rows; ++r)
        {
            const auto &member = in_window[static_cast<std::size_t>(r)];
            const auto &Xi = X[static_cast<std::size_t>(chain[static_cast<std::size_t>(r)])];
            for (Eigen::Index b = 0; b < ks; ++b)
            {
                if (!member[static_cast<std::size_t>(res.support_cells[static_cast<std::size_t>(b)])])
                    continue;
                const int db = res.support_delays[static_cast<std::size_t>(b)];
                for (int d = 0; d < taps; ++d)
                    Pres(r, d) -= gval * res.coefficients(b) * Xi(d, db);
            }
        }
    }

    for (std::size_t a = 0; a < res.support_cells.size(); ++a)
        res.cell_energy(res.support_cells[a]) += std::norm(res.coefficients(static_cast<Eigen::Index>(a)));
    const Eigen::Index k = argmax_first(res.cell_energy);
    if (k >= 0)
        res.cell = CellIndex{static_cast<int>(k % c.N), static_cast<int>(k / c.N)};
    return res;
}

} // namespace tdba

#endif
