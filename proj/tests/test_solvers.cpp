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


#include "tdba/experiments.hpp"
#include "tdba/validation.hpp"

#include <catch_amalgamated.hpp>

using namespace tdba;

TEST_CASE("identity system projects onto the orthant", "[solvers]")
{
    const RMat B = RMat::Identity(5, 5);
    RVec rhs(5);
    rhs << 1.0, -2.0, 0.5, 0.0, -0.1;
    const auto res = nnls(B, rhs);
    CHECK(res.converged);
    CHECK((res.estimate - rhs.cwiseMax(0.0)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(res.residual_norm == Catch::Approx(std::sqrt(4.01)).epsilon(1e-12));
}

TEST_CASE("single row system splits the mass", "[solvers]")
{
    RMat B(1, 2);
    B << 1.0, 1.0;
    RVec rhs(1);
    rhs << 2.0;
    const auto res = nnls(B, rhs);
    CHECK((B * res.estimate)(0) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(res.estimate.minCoeff() >= 0.0);
    rhs << -1.0;
    CHECK(nnls(B, rhs).estimate.isZero());
}

TEST_CASE("binary systems recover a sparse nonnegative vector", "[solvers]")
{
    Rng rng(5, StreamTag::instance, {0});
    RMat B = RMat::Zero(30, 50);
    for (Eigen::Index r = 0; r < B.rows(); ++r)
        for (Eigen::Index k = 0; k < B.cols(); ++k)
            B(r, k) = rng.uniform() < 0.3 ? 1.0 : 0.0;
    RVec x = RVec::Zero(50);
    x(7) = 3.0;
    x(31) = 1.0;
    const RVec rhs = B * x;
    const auto res = nnls(B, rhs);
    CHECK(res.converged);
    CHECK(res.residual_norm < 1e-9);
    CHECK(argmax_first(res.estimate) == 7);
    CHECK(res.kkt_violation < 1e-9);
    // objective never increases
    for (std::size_t k = 1; k < res.objective.size(); ++k)
        CHECK(res.objective[k] <= res.objective[k - 1] * (1.0 + 1e-12) + 1e-12);

    SECTION("scaling the data scales the solution")
    {
        const auto scaled = nnls(B, 1e6 * rhs);
        CHECK((scaled.estimate - 1e6 * res.estimate).cwiseAbs().maxCoeff() < 1e-3);
    }
    SECTION("projected gradient reaches the same fit")
    {
        const auto pg = nnls_projected_gradient(B, rhs);
        CHECK((B * pg.estimate - rhs).norm() < 1e-3 * rhs.norm());
    }
}

TEST_CASE("Gram accumulation matches the dense solver", "[solvers]")
{
    Rng rng(9, StreamTag::instance, {1});
    MeasurementSystem sys;
    const int rows = 40, cols = 36;
    sys.B = RMat::Zero(rows, cols);
    sys.q = RVec(rows);
    sys.noise_offset = 0.25;
    for (int r = 0; r < rows; ++r)
    {
        std::vector<int> w;
        for (int k = 0; k < cols; ++k)
            if (rng.uniform() < 0.25)
            {
                w.push_back(k);
                sys.B(r, k) = 1.0;
            }
        sys.windows.push_back(w);
        sys.q(r) = rng.uniform() * 4.0;
    }
    const auto dense = nnls(sys.B, sys.rhs());
    const auto gram = solve_measurements(sys);
    CHECK((sys.B * (dense.estimate - gram.estimate)).norm() < 1e-8);
    CHECK(gram.kkt_violation < 1e-9);

    SECTION("offset column soaks up a constant shift")
    {
        RVec x = RVec::Zero(cols);
        x(3) = 2.0;
        sys.q = sys.B * x + RVec::Constant(rows, 0.7);
        NnlsOptions opt;
        opt.offset_column = true;
        const auto res = solve_measurements(sys, opt);
        REQUIRE(res.offset.has_value());
        CHECK(res.estimate.size() == cols);
        CHECK(res.residual_norm < 1e-8);
    }
}

TEST_CASE("detection maps the column to beamspace cells", "[solvers]")
{
    NnlsResult res;
    res.estimate = RVec::Zero(64);
    CHECK_FALSE(detect(res, 8).has_value()); // all-zero estimate has no detection
    res.estimate(17) = 1.0;
    const auto cell = detect(res, 8);
    REQUIRE(cell.has_value());
    CHECK(cell->aoa == 1);
    CHECK(cell->aod == 2);
    res.estimate = RVec::Zero(32 * 32);
    res.estimate(17) = 1.0;
    CHECK(detect(res, 32)->aoa == 17);
    CHECK(detect(res, 32)->aod == 0);
}

TEST_CASE("property suite for the solver passes", "[solvers]")
{
    const auto c = check_nnls();
    INFO(c.detail);
    CHECK(c.passed);
}

TEST_CASE("OMP recovers the strongest cell without noise", "[solvers]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 63;
    c.d_max = 4;
    c.L = 1;
    c.variation = ChannelVariation::slow;
    c.cross_correlation = CrossCorrelation::exact;
    const TrialContext ctx = make_context(c);
    int hits = 0;
    for (std::uint64_t t = 0; t < 10; ++t)
    {
        const auto ps = trial_paths(ctx.config, 3, t);
        const auto cb = sample_codebook(ctx.config, codebook_seed(3, t), 40);
        SimulationOptions opt;
        opt.noise = false;
        opt.keep_coherent = true;
        const auto data = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 3, t, 40, opt);
        const auto res = omp_baseline(data.coherent, cb, ctx.R, ctx.config, 1);
        const auto truth = trial_truth(ps, ctx, 3, t);
        hits += res.cell && res.cell->aoa == truth.aoa && res.cell->aod == truth.aod;
    }
    CHECK(hits >= 9);
}

TEST_CASE("OMP sparsity argument", "[solvers]")
{
    SystemConfig c;
    c.M = c.N = 4;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 31;
    c.d_max = 2;
    const TrialContext ctx = make_context(c);
    const auto ps = trial_paths(ctx.config, 1, 0);
    const auto cb = sample_codebook(ctx.config, 1, 3);
    SimulationOptions opt;
    opt.keep_coherent = true;
    const auto data = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 1, 0, 3, opt);
    CHECK_THROWS(omp_baseline(data.coherent, cb, ctx.R, ctx.config, -1));
    const auto none = omp_baseline(data.coherent, cb, ctx.R, ctx.config, 0);
    CHECK(none.support_cells.empty());
}

TEST_CASE("noiseless sparse probing finds the single path", "[solvers]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 63;
    c.d_max = 4;
    c.L = 1;
    const TrialContext ctx = make_context(c);
    for (std::uint64_t t = 0; t < 10; ++t)
    {
        const auto ps = trial_paths(ctx.config, 2, t);
        const auto cb = sample_codebook(ctx.config, codebook_seed(2, t), 30);
        SimulationOptions opt;
        opt.noise = false;
        const auto data = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 2, t, 30, opt);
        auto sys = assemble_system(cb, data.q, ctx.config, ctx.link);
        sys.noise_offset = 0.0; // nothing to subtract without noise
        const auto cell = detect(solve_measurements(sys), c.N);
        const auto truth = trial_truth(ps, ctx, 2, t);
        REQUIRE(cell.has_value());
        CHECK(cell->aoa == truth.aoa);
        CHECK(cell->aod == truth.aod);
    }
}
