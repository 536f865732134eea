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


#include "tdba/validation.hpp"

#include <catch_amalgamated.hpp>

using namespace tdba;

TEST_CASE("closed form agrees with chip-level synthesis", "[measurements]")
{
    const auto c = check_chip_level_equivalence(20);
    INFO(c.detail);
    CHECK(c.passed);
}

TEST_CASE("energy expansion reproduces |y|^2", "[measurements]")
{
    const auto c = check_energy_identity(100);
    INFO(c.detail);
    CHECK(c.passed);
}

TEST_CASE("single RF chain: approximate and exact modes coincide", "[measurements]")
{
    auto in = detail::small_instance(3, 0);
    in.config.M_RF = 1;
    in.codebook = sample_codebook(in.config, 5, 1);
    in.sequences.resize(1);
    in.R = CorrelationTable(in.sequences, in.link.Rx0);
    const auto h = realize_sequence(in.paths, in.slot, 0, in.link.t0, in.config.variation);
    SystemConfig exact = in.config, approx = in.config;
    exact.cross_correlation = CrossCorrelation::exact;
    approx.cross_correlation = CrossCorrelation::approx;
    for (int j = 0; j < in.config.N_RF; ++j)
    {
        const auto &v = in.codebook.user[0][static_cast<std::size_t>(j)];
        CHECK(closed_form_mf_output(h, in.codebook.bs[0], v, 0, in.R, exact) ==
              closed_form_mf_output(h, in.codebook.bs[0], v, 0, in.R, approx));
    }
}

TEST_CASE("window gain is nonzero only inside the probed window", "[measurements]")
{
    const auto u = make_beam(8, {1, 4}), v = make_beam(8, {0, 2, 5, 7});
    const cd g = window_gain(u, v, 5, 4, cd(2.0, 0.0), 2);
    CHECK(std::abs(g - cd(2.0 / std::sqrt(2.0 * 4.0 * 2.0), 0.0)) < 1e-15);
    CHECK(window_gain(u, v, 5, 3, cd(2.0, 0.0), 2) == cd{});
    CHECK(window_gain(u, v, 1, 4, cd(2.0, 0.0), 2) == cd{});
}

TEST_CASE("measurement system rows are the binary windows", "[measurements]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 3;
    c.T = 4;
    const auto link = derive_link(c);
    const auto cb = sample_codebook(c, 2);
    std::vector<double> q(static_cast<std::size_t>(c.T * c.rows_per_slot()));
    for (std::size_t k = 0; k < q.size(); ++k)
        q[k] = static_cast<double>(k);
    const auto sys = assemble_system(cb, q, c, link);
    REQUIRE(sys.rows() == c.T * c.rows_per_slot());
    REQUIRE(sys.cols() == c.M * c.N);
    CHECK(sys.noise_offset == link.Ncheck * c.N0 * link.Rx0);
    for (int s = 0; s < c.T; ++s)
        for (int i = 0; i < c.M_RF; ++i)
            for (int j = 0; j < c.N_RF; ++j)
            {
                const int r = row_index(s, i, j, c);
                CHECK(sys.B.row(r).transpose() == binary_window(cb.bs[s][i], cb.user[s][j]));
                CHECK(sys.rhs()(r) == q[static_cast<std::size_t>(r)] - sys.noise_offset);
            }
    CHECK(sys.head(6).rows() == 6);
    CHECK_THROWS(sys.head(sys.rows() + 1));
}

TEST_CASE("training prefixes do not depend on the total length", "[measurements]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 31;
    c.d_max = 4;
    c.L = 2;
    const TrialContext ctx = make_context(c);
    const auto ps = trial_paths(ctx.config, 1, 0);
    const auto cb = sample_codebook(ctx.config, 4, 6);
    const auto a = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 1, 0, 3);
    const auto b = simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 1, 0, 6);
    for (std::size_t k = 0; k < a.q.size(); ++k)
        CHECK(a.q[k] == b.q[k]);
    CHECK_THROWS(simulate_training(ps, cb, ctx.R, ctx.config, ctx.link, 1, 0, 7));
}

TEST_CASE("averaging S sequences scales the noise variance by 1/S", "[measurements]")
{
    auto noise_var = [](int S)
    {
        SystemConfig c;
        c.M = c.N = 4;
        c.kappa_u = c.kappa_v = 2;
        c.M_RF = 1;
        c.N_RF = 1;
        c.N_c = 31;
        c.d_max = 0;
        c.S = S;
        const TrialContext ctx = make_context(c);
        const auto ps = trial_paths(ctx.config, 1, 0);
        const auto cb = sample_codebook(ctx.config, 1, 1);
        SimulationOptions opt;
        double m = 0.0, m2 = 0.0;
        const int n = 4000;
        for (int t = 0; t < n; ++t)
        {
            // noise only: a zero-gain path leaves the signal terms empty
            PathSet silent = ps;
            silent.paths[0].gamma = 0.0;
            const double q = simulate_training(silent, cb, ctx.R, ctx.config, ctx.link, 3, static_cast<std::uint64_t>(t), 1, opt).q[0];
            m += q / n;
            m2 += q * q / n;
        }
        return std::pair{m / (ctx.link.Ncheck * ctx.link.noise_var_chip), (m2 - m * m)};
    };
    const auto [mean2, var2] = noise_var(2);
    const auto [mean8, var8] = noise_var(8);
    CHECK(std::abs(mean2 - 1.0) < 0.02);
    CHECK(std::abs(mean8 - 1.0) < 0.02);
    CHECK(std::abs(var2 / var8 / 4.0 - 1.0) < 0.15);
}

TEST_CASE("slot average and energy helpers", "[measurements]")
{
    const double v[] = {1.0, 2.0, 6.0};
    CHECK(slot_average(v) == 3.0);
    const cd y[] = {cd(3.0, 4.0), cd(0.0, 1.0)};
    CHECK(energy(y) == 26.0);
    SystemConfig c;
    CHECK(frame_length(c) == c.N_c + c.d_max + c.N_c - 1);
}
