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

#ifndef TDBA_NNLS_HPP
#define TDBA_NNLS_HPP

#include "arrays.hpp"
#include "channel.hpp"
#include "measurements.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tdba
{

struct NnlsOptions
{
    double tol = 1e-10;       // relative to scale = ||B^T rhs||_inf
    int max_outer = 0;        // 0 selects 3 * columns
    bool offset_column = false; // estimate the noise offset as an extra nonnegative unknown
};

struct NnlsResult
{
    RVec estimate;                        // nonnegative, one entry per column of B
    double residual_norm = 0.0;           // ||B x - rhs||
    int iterations = 0;                   // outer (column-adding) iterations
    double kkt_violation = 0.0;           // max KKT violation divided by scale
    bool converged = false;
    std::vector<double> objective;        // ||B x - rhs||^2 after every outer iteration
    std::optional<double> offset;         // estimated offset when offset_column is set
};

namespace detail
{

// Cholesky factor of G restricted to an ordered passive set, grown one column
// at a time. Removals trigger a full refactorization.
class PassiveFactor
{
  public:
    explicit PassiveFactor(const RMat &G) : G_(G) {}

    const std::vector<int> &set() const { return idx_; }

    // Returns false if the column is numerically dependent on the set.
    bool add(int j)
    {
        const auto p = static_cast<Eigen::Index>(idx_.size());
        RVec g(p);
        for (Eigen::Index a = 0; a < p; ++a)
            g(a) = G_(idx_[static_cast<std::size_t>(a)], j);
        RVec l = g;
        if (p > 0)
            L_.topLeftCorner(p, p).triangularView<Eigen::Lower>().solveInPlace(l);
        const double d2 = G_(j, j) - l.squaredNorm();
        if (!(d2 > 1e-12 * std::max(1.0, G_(j, j))))
            return false;
        if (L_.rows() < p + 1)
        {
            RMat grown = RMat::Zero(std::max<Eigen::Index>(2 * (p + 1), 16), std::max<Eigen::Index>(2 * (p + 1), 16));
            grown.topLeftCorner(p, p) = L_.topLeftCorner(p, p);
            L_.swap(grown);
        }
        L_.row(p).head(p) = l.transpose();
        L_(p, p) = std::sqrt(d2);
        idx_.push_back(j);
        return true;
    }

    // Drops the marked columns and refactors; returns kept columns that became
    // numerically dependent and had to be dropped as well.
    std::vector<int> remove_if(const std::vector<bool> &drop)
    {
        std::vector<int> keep;
        for (int j : idx_)
            if (!drop[static_cast<std::size_t>(j)])
                keep.push_back(j);
        idx_.clear();
        std::vector<int> rejected;
        for (int j : keep)
            if (!add(j))
                rejected.push_back(j);
        return rejected;
    }

    RVec solve(const RVec &rhs_full) const
    {
        const auto p = static_cast<Eigen::Index>(idx_.size());
        RVec z(p);
        for (Eigen::Index a = 0; a < p; ++a)
            z(a) = rhs_full(idx_[static_cast<std::size_t>(a)]);
        const auto Lp = L_.topLeftCorner(p, p);
        Lp.triangularView<Eigen::Lower>().solveInPlace(z);
        Lp.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
        return z;
    }

  private:
    const RMat &G_;
    RMat L_;
    std::vector<int> idx_;
};

inline double quad_objective(const RMat &G, const RVec &Btr, double rhs_norm2, const RVec &x)
{
    return std::max(0.0, x.dot(G * x) - 2.0 * x.dot(Btr) + rhs_norm2);
}

} // namespace detail

// Lawson-Hanson active-set NNLS on the normal equations: minimizes
// x^T G x - 2 x^T Btr over x >= 0, with G = B^T B and Btr = B^T rhs.
// Entering columns whose refit would be nonpositive are skipped until x
// changes again, which prevents the classic add/remove cycle.
inline NnlsResult nnls_gram(const RMat &G, const RVec &Btr, double rhs_norm2, const NnlsOptions &opt = {})
{
    const auto n = Btr.size();
    if (n == 0 || G.rows() != n || G.cols() != n)
        throw std::invalid_argument("nnls: empty or inconsistent system");
    if (!G.allFinite() || !Btr.allFinite() || !std::isfinite(rhs_norm2))
        throw std::invalid_argument("nnls: non-finite input");

    const double scale = std::max(Btr.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double thresh = opt.tol * scale;
    const int max_outer = opt.max_outer > 0 ? opt.max_outer : static_cast<int>(3 * n);

    NnlsResult res;
    RVec x = RVec::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    detail::PassiveFactor factor(G);
    RVec w = Btr;

    while (res.iterations < max_outer)
    {
        Eigen::Index j = -1;
        double best = thresh;
        for (Eigen::Index k = 0; k < n; ++k)
            if (!passive[static_cast<std::size_t>(k)] && !blocked[static_cast<std::size_t>(k)] && w(k) > best)
            {
                best = w(k);
                j = k;
            }
        if (j < 0)
        {
            res.converged = true;
            break;
        }
        ++res.iterations;

        if (!factor.add(static_cast<int>(j)))
        {
            blocked[static_cast<std::size_t>(j)] = true;
            continue;
        }
        passive[static_cast<std::size_t>(j)] = true;

        RVec z = factor.solve(Btr);
        if (z(z.size() - 1) <= 0.0)
        {
            // rounding made the entering column useless; try another one
            std::vector<bool> drop(static_cast<std::size_t>(n), false);
            drop[static_cast<std::size_t>(j)] = true;
            for (int k : factor.remove_if(drop))
            {
                x(k) = 0.0;
                passive[static_cast<std::size_t>(k)] = false;
            }
            passive[static_cast<std::size_t>(j)] = false;
            blocked[static_cast<std::size_t>(j)] = true;
            continue;
        }

        // inner loop: step back toward feasibility until the refit is positive
        for (int inner = 0; inner < static_cast<int>(3 * n); ++inner)
        {
            const auto &set = factor.set();
            double alpha = 1.0;
            bool feasible = true;
            for (std::size_t a = 0; a < set.size(); ++a)
                if (z(static_cast<Eigen::Index>(a)) <= 0.0)
                {
                    feasible = false;
                    const double xa = x(set[a]);
                    const double gap = xa - z(static_cast<Eigen::Index>(a));
                    alpha = std::min(alpha, gap > 0.0 ? xa / gap : 0.0);
                }
            if (feasible)
                break;
            std::vector<bool> drop(static_cast<std::size_t>(n), false);
            for (std::size_t a = 0; a < set.size(); ++a)
            {
                const int k = set[a];
                const double za = z(static_cast<Eigen::Index>(a));
                const double xa = x(k);
                x(k) += alpha * (za - xa);
                // the blocking index lands on zero up to rounding
                if (x(k) <= 0.0 || (za <= 0.0 && (xa - za <= 0.0 || alpha == xa / (xa - za) || x(k) <= 1e-14 * xa)))
                {
                    x(k) = 0.0;
                    drop[static_cast<std::size_t>(k)] = true;
                    passive[static_cast<std::size_t>(k)] = false;
                }
            }
            for (int k : factor.remove_if(drop))
            {
                x(k) = 0.0;
                passive[static_cast<std::size_t>(k)] = false;
            }
            z = factor.solve(Btr);
        }
        x.setZero();
        const auto &set = factor.set();
        for (std::size_t a = 0; a < set.size(); ++a)
            x(set[a]) = z(static_cast<Eigen::Index>(a));
        std::fill(blocked.begin(), blocked.end(), false);

        // gradient from the passive columns only
        w = Btr;
        for (std::size_t a = 0; a < set.size(); ++a)
            w.noalias() -= G.col(set[a]) * z(static_cast<Eigen::Index>(a));
        // x^T G x = x^T (Btr - w)
        res.objective.push_back(std::max(0.0, rhs_norm2 - x.dot(Btr) - x.dot(w)));
    }

    res.estimate = x;
    res.residual_norm = std::sqrt(detail::quad_objective(G, Btr, rhs_norm2, x));
    double viol = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        viol = std::max(viol, x(k) > 0.0 ? std::abs(w(k)) : std::max(w(k), 0.0));
    res.kkt_violation = viol / scale;
    return res;
}

// KKT violation of x for min ||B x - rhs||^2, x >= 0, relative to ||B^T rhs||_inf.
inline double kkt_violation(const RMat &B, const RVec &rhs, const RVec &x)
{
    const RVec grad = B.transpose() * (B * x - rhs);
    const double scale = std::max((B.transpose() * rhs).cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    double viol = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k)
        viol = std::max(viol, x(k) > 0.0 ? std::abs(grad(k)) : std::max(-grad(k), 0.0));
    return viol / scale;
}

inline NnlsResult nnls(const RMat &B, const RVec &rhs, const NnlsOptions &opt = {})
{
    if (B.rows() == 0 || B.cols() == 0)
        throw std::invalid_argument("nnls: empty system");
    if (B.rows() != rhs.size())
        throw std::invalid_argument("nnls: dimension mismatch");
    if (!B.allFinite() || !rhs.allFinite())
        throw std::invalid_argument("nnls: non-finite input");
    RMat A = B;
    if (opt.offset_column)
    {
        A.conservativeResize(Eigen::NoChange, B.cols() + 1);
        A.col(B.cols()).setOnes();
    }
    const RMat G = A.transpose() * A;
    const RVec Btr = A.transpose() * rhs;
    NnlsResult res = nnls_gram(G, Btr, rhs.squaredNorm(), opt);
    res.residual_norm = (A * res.estimate - rhs).norm();
    res.kkt_violation = kkt_violation(A, rhs, res.estimate);
    if (opt.offset_column)
    {
        res.offset = res.estimate(B.cols());
        res.estimate.conservativeResize(B.cols());
    }
    return res;
}

/// Gram matrix and right-hand side of a binary measurement system, built
/// from the row windows. Rows can be appended as more slots arrive.
class BinaryGram
{
  public:
    BinaryGram(int columns, bool offset_column)
        : n_(columns), offset_(offset_column), G_(RMat::Zero(columns + offset_column, columns + offset_column)),
          Btr_(RVec::Zero(columns + offset_column))
    {
    }

    void add_row(const std::vector<int> &window, double rhs)
    {
        for (int a : window)
        {
            auto col = G_.col(a);
            for (int b : window)
                col(b) += 1.0;
            Btr_(a) += rhs;
        }
        if (offset_)
        {
            for (int a : window)
            {
                G_(a, n_) += 1.0;
                G_(n_, a) += 1.0;
            }
            G_(n_, n_) += 1.0;
            Btr_(n_) += rhs;
        }
        rhs_norm2_ += rhs * rhs;
        ++rows_;
    }

    const RMat &gram() const { return G_; }
    const RVec &btr() const { return Btr_; }
    double rhs_norm2() const { return rhs_norm2_; }
    int rows() const { return rows_; }
    bool offset_column() const { return offset_; }

  private:
    int n_;
    bool offset_;
    RMat G_;
    RVec Btr_;
    double rhs_norm2_ = 0.0;
    int rows_ = 0;
};

// Residual and KKT check directly on the windows, used to certify a Gram solve.
inline void certify(NnlsResult &res, const std::vector<std::vector<int>> &windows, const RVec &rhs, bool offset_column)
{
    const auto n = res.estimate.size();
    RVec r(static_cast<Eigen::Index>(windows.size()));
    for (std::size_t row = 0; row < windows.size(); ++row)
    {
        double acc = offset_column ? res.estimate(n - 1) : 0.0;
        for (int c : windows[row])
            acc += res.estimate(c);
        r(static_cast<Eigen::Index>(row)) = acc - rhs(static_cast<Eigen::Index>(row));
    }
    RVec grad = RVec::Zero(n);
    RVec btr = RVec::Zero(n);
    for (std::size_t row = 0; row < windows.size(); ++row)
    {
        for (int c : windows[row])
        {
            grad(c) += r(static_cast<Eigen::Index>(row));
            btr(c) += rhs(static_cast<Eigen::Index>(row));
        }
        if (offset_column)
        {
            grad(n - 1) += r(static_cast<Eigen::Index>(row));
            btr(n - 1) += rhs(static_cast<Eigen::Index>(row));
        }
    }
    const double scale = std::max(btr.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    double viol = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
        viol = std::max(viol, res.estimate(k) > 0.0 ? std::abs(grad(k)) : std::max(-grad(k), 0.0));
    res.residual_norm = r.norm();
    res.kkt_violation = viol / scale;
}

// NNLS on q - offset (or on q with a free offset column).
inline NnlsResult solve_measurements(const MeasurementSystem &sys, const NnlsOptions &opt = {})
{
    if (sys.rows() == 0)
        throw std::invalid_argument("nnls: empty system");
    const RVec rhs = opt.offset_column ? sys.q : sys.rhs();
    BinaryGram gram(sys.cols(), opt.offset_column);
    for (int r = 0; r < sys.rows(); ++r)
        gram.add_row(sys.windows[static_cast<std::size_t>(r)], rhs(r));
    NnlsResult res = nnls_gram(gram.gram(), gram.btr(), gram.rhs_norm2(), opt);
    certify(res, sys.windows, rhs, opt.offset_column);
    if (opt.offset_column)
    {
        res.offset = res.estimate(sys.cols());
        res.estimate.conservativeResize(sys.cols());
    }
    return res;
}

// Projected gradient with fixed step 1 / ||B||_2^2, for systems too large for
// the active-set method. The spectral norm comes from power iteration on G.
inline NnlsResult nnls_projected_gradient(const RMat &B, const RVec &rhs, const NnlsOptions &opt = {},
                                          int max_iter = 20000)
{
    if (B.rows() == 0 || B.cols() == 0 || B.rows() != rhs.size())
        throw std::invalid_argument("nnls_projected_gradient: empty or inconsistent system");
    const RMat G = B.transpose() * B;
    const RVec Btr = B.transpose() * rhs;
    RVec v = RVec::Ones(G.rows()).normalized();
    double lipschitz = 0.0;
    for (int it = 0; it < 200; ++it)
    {
        RVec Gv = G * v;
        const double nrm = Gv.norm();
        if (nrm == 0.0)
            break;
        const double next = v.dot(Gv);
        v = Gv / nrm;
        if (std::abs(next - lipschitz) <= 1e-12 * next)
        {
            lipschitz = next;
            break;
        }
        lipschitz = next;
    }
    const double step = lipschitz > 0.0 ? 1.0 / (1.01 * lipschitz) : 1.0;
    NnlsResult res;
    RVec x = RVec::Zero(G.rows());
    for (int it = 0; it < max_iter; ++it)
    {
        x = (x - step * (G * x - Btr)).cwiseMax(0.0);
        ++res.iterations;
        if (it % 50 == 0)
        {
            res.objective.push_back((B * x - rhs).squaredNorm());
            if (kkt_violation(B, rhs, x) <= opt.tol)
            {
                res.converged = true;
                break;
            }
        }
    }
    res.estimate = x;
    res.residual_norm = (B * x - rhs).norm();
    res.kkt_violation = kkt_violation(B, rhs, x);
    return res;
}

// Strongest (aoa, aod) cell of an estimate over an N-row map; none when the
// estimate has no positive entry.
inline std::optional<CellIndex> detect(const NnlsResult &res, int N)
{
    const Eigen::Index k = argmax_first(res.estimate);
    if (k < 0)
        return std::nullopt;
    return CellIndex{static_cast<int>(k % N), static_cast<int>(k / N)};
}

} // namespace tdba

#endif
