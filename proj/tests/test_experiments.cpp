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

#include <catch_amalgamated.hpp>

using namespace tdba;

namespace
{

ExperimentSpec small_spec()
{
    ExperimentSpec spec;
    auto &c = spec.base;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 63;
    c.d_max = 4;
    c.L = 1;
    spec.T_grid = {0, 5, 10};
    spec.trials = 24;
    spec.seed = 11;
    return spec;
}

} // namespace

TEST_CASE("Wilson interval", "[experiments]")
{
    const auto a = wilson_interval(50, 100);
    CHECK(a.low == Catch::Approx(0.4038).margin(1e-4));
    CHECK(a.high == Catch::Approx(0.5962).margin(1e-4));
    const auto z = wilson_interval(0, 20);
    CHECK(z.low == 0.0);
    CHECK(z.high == Catch::Approx(0.1611).margin(1e-4));
    const auto f = wilson_interval(20, 20);
    CHECK(f.high == 1.0);
    CHECK(f.low == Catch::Approx(0.8389).margin(1e-4));
    CHECK(wilson_interval(0, 0).low == 0.0); // no data, no information
    CHECK(wilson_interval(0, 0).high == 1.0);
    CHECK_THROWS(wilson_interval(3, 2));
}

TEST_CASE("Wilson interval covers the true rate", "[experiments]")
{
    Rng rng(2, StreamTag::instance, {0});
    const double p = 0.3;
    int covered = 0;
    const int reps = 2000;
    for (int r = 0; r < reps; ++r)
    {
        int s = 0;
        for (int k = 0; k < 100; ++k)
            s += rng.uniform() < p;
        const auto ci = wilson_interval(s, 100);
        covered += ci.low <= p && p <= ci.high;
    }
    CHECK(covered > 0.93 * reps);
}

TEST_CASE("experiment setup validation", "[experiments]")
{
    auto spec = small_spec();
    CHECK_NOTHROW(validate(spec));
    spec.T_grid = {5, 5};
    CHECK_THROWS_AS(validate(spec), config_error);
    spec = small_spec();
    spec.trials = 0;
    CHECK_THROWS_AS(validate(spec), config_error);
    spec = small_spec();
    spec.T_grid.clear();
    CHECK_THROWS_AS(validate(spec), config_error);
    spec = small_spec();
    spec.threads = 0;
    CHECK_THROWS_AS(run_pd_curve(spec), config_error);
}

TEST_CASE("P_D curves are deterministic and thread independent", "[experiments]")
{
    auto spec = small_spec();
    const auto a = to_csv(run_pd_curve(spec));
    const auto b = to_csv(run_pd_curve(spec));
    CHECK(a == b);
    spec.threads = 3;
    CHECK(to_csv(run_pd_curve(spec)) == a);
    spec.threads = 1;
    spec.seed = 12;
    CHECK(to_csv(run_pd_curve(spec)) != a);
}

TEST_CASE("T = 0 falls back to a uniform guess", "[experiments]")
{
    auto spec = small_spec();
    spec.T_grid = {0};
    spec.trials = 400;
    const auto curves = run_pd_curve(spec);
    const auto &pt = curves.front().points.front();
    // 1/64 chance level
    CHECK(pt.successes <= 20);
}

TEST_CASE("P_D grows with training", "[experiments]")
{
    auto spec = small_spec();
    spec.T_grid = {1, 40};
    spec.trials = 60;
    const auto pts = run_pd_curve(spec).front().points;
    CHECK(pts[1].p_d > pts[0].p_d);
    CHECK(pts[1].p_d > 0.5);
    CHECK(pts[0].ci_low <= pts[0].p_d);
    CHECK(pts[0].p_d <= pts[0].ci_high);
}

TEST_CASE("CSV layout", "[experiments]")
{
    CHECK(to_csv({}) == "sweep_value,T,trials,successes,p_d,ci_low,ci_high\n");
    PdCurve cv;
    cv.sweep_value = "L=2";
    cv.points.push_back({10, 4, 3, 0.75, 0.3, 0.95});
    CHECK(to_csv({cv}) == "sweep_value,T,trials,successes,p_d,ci_low,ci_high\nL=2,10,4,3,0.750000,0.300000,0.950000\n");
    CHECK(to_json({cv}).find("[\"L=2\", 10, 4, 3, 0.750000, 0.300000, 0.950000]") != std::string::npos);
    CHECK(cv.at(10).successes == 3);
    CHECK_THROWS(cv.at(11));
}

TEST_CASE("sweep builders label and adjust configs", "[experiments]")
{
    SystemConfig base;
    const auto paths = sweep_paths(base, {1, 3});
    REQUIRE(paths.size() == 2);
    CHECK(paths[1].config.L == 3);
    const auto kap = sweep_kappa(base, {4, 16});
    CHECK(kap[1].config.kappa_u == 16);
    CHECK(kap[1].config.kappa_v == 16);
    const auto chips = sweep_chips(base, {127});
    CHECK(chips[0].config.N_c == 127);
    CHECK(chips[0].config.N_c * chips[0].config.S >= base.N_c * base.S - 127);
    const auto var = sweep_variation(base);
    CHECK(var[0].config.variation == ChannelVariation::slow);
    CHECK(var[1].config.variation == ChannelVariation::fast);
}

TEST_CASE("chip duration sweep keeps the per-measurement SNR", "[experiments]")
{
    SystemConfig base;
    const auto sweep = sweep_chip_duration(base, {1, 2, 4});
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[1].config.N_c == 256);
    CHECK(sweep[2].config.N_c == 128);
    const double g[] = {1.0};
    const double ref = snr_measurement(derive_link(sweep[0].config), sweep[0].config, g);
    for (const auto &pt : sweep)
        CHECK(snr_measurement(derive_link(pt.config), pt.config, g) == Catch::Approx(ref).epsilon(1e-12));
    base.N_c = 31;
    CHECK_THROWS_AS(sweep_chip_duration(base, {4}), config_error);
    CHECK_THROWS_AS(sweep_chip_duration(base, {0}), config_error);
}

TEST_CASE("both solvers see the same realizations", "[experiments]")
{
    auto spec = small_spec();
    spec.trials = 6;
    spec.T_grid = {5};
    const auto res = run_robustness_compare(spec);
    REQUIRE(res.curves.size() == 4);
    CHECK(res.curves[0].sweep_value == "nnls/slow");
    CHECK(res.curves[1].sweep_value == "omp/slow");
    REQUIRE(res.checksums.size() == 12);
    // re-running a trial with only NNLS reproduces the checksum
    const auto ctx = make_context(spec.sweep.empty() ? sweep_variation(spec.base)[0].config : spec.base);
    CHECK(run_trial(ctx, spec.seed, 2, spec.T_grid, true, false).checksum == res.checksums[2]);
}

TEST_CASE("power delay profile concentrates after alignment", "[experiments]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    c.N_c = 63;
    c.d_max = 8;
    c.L = 3;
    const auto r = run_pdp(c, 400, 4, true);
    REQUIRE(r.before.size() == 9);
    double before = 0.0, after = 0.0;
    for (std::size_t k = 0; k < r.before.size(); ++k)
    {
        before += r.before[k];
        after += r.after[k];
    }
    const auto tap = static_cast<std::size_t>(std::max_element(r.after.begin(), r.after.end()) - r.after.begin());
    CHECK(r.after[tap] > 0.5 * after);
    CHECK(after > before);
    CHECK_THROWS(run_pdp(c, 0, 1));
}
