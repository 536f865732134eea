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


#include "tdba/system_model.hpp"

#include <catch_amalgamated.hpp>

using namespace tdba;
using Catch::Matchers::WithinRel;

TEST_CASE("link budget at the 32x32 reference operating point", "[system_model]")
{
    SystemConfig c; // M=N=32, M_RF=3, N_RF=2, kappa 16, B' = B, -15 dB
    const auto link = derive_link(c);
    // reference values computed independently from the closed-form expressions
    CHECK_THAT(link.P_tot, WithinRel(56991832902.6186, 1e-12));
    CHECK_THAT(link.Rx0, WithinRel(5515.686858567823, 1e-12));
    CHECK_THAT(link.t0, WithinRel(2.903409090909091e-07, 1e-12));
    CHECK(link.Ncheck == 527);
    CHECK_THAT(link.noise_var_chip, WithinRel(c.N0 * link.Rx0, 1e-15));

    const double g[] = {1.0};
    const int d[] = {3};
    CHECK_THAT(snr_per_chip(link, c, g, 3, d), WithinRel(10.77282589564028, 1e-12));
    CHECK(snr_per_chip(link, c, g, 4, d) == 0.0);
    CHECK_THAT(snr_measurement(link, c, g), WithinRel(0.021081851067789197, 1e-12));
    CHECK_THAT(snr_measurement(link, c, g, true), WithinRel(0.02044179486838763, 1e-12));
}

TEST_CASE("512-chip sequence duration", "[system_model]")
{
    SystemConfig c;
    c.N_c = 512;
    const auto link = derive_link(c);
    CHECK_THAT(link.t0, WithinRel(512.0 / 1.76e9, 1e-15));
    CHECK_THAT(link.t0 * c.S, WithinRel(1.745454545e-6, 1e-9));
}

TEST_CASE("exact and approximate measurement SNR agree without delay spread", "[system_model]")
{
    SystemConfig c;
    c.d_max = 0;
    const auto link = derive_link(c);
    const double g[] = {0.6, 0.4};
    CHECK(snr_measurement(link, c, g) == snr_measurement(link, c, g, true));
}

TEST_CASE("halving the bandwidth doubles the measurement SNR", "[system_model]")
{
    SystemConfig a, b;
    b.p = 2;
    const double g[] = {1.0};
    CHECK_THAT(snr_measurement(derive_link(b), b, g) / snr_measurement(derive_link(a), a, g), WithinRel(2.0, 1e-14));
}

TEST_CASE("derived link is deterministic", "[system_model]")
{
    SystemConfig c;
    const auto a = derive_link(c), b = derive_link(c);
    CHECK(a.Rx0 == b.Rx0);
    CHECK(a.P_tot == b.P_tot);
}

TEST_CASE("invalid configurations are rejected", "[system_model]")
{
    auto bad = [](auto edit)
    {
        SystemConfig c;
        edit(c);
        return c;
    };
    CHECK_THROWS_AS(validate(bad([](SystemConfig &c) { c.M = 0; })), config_error);
    CHECK_THROWS_AS(validate(bad([](SystemConfig &c) { c.kappa_u = 33; })), config_error);
    CHECK_THROWS_AS(validate(bad([](SystemConfig &c) { c.S = 0; })), config_error);
    CHECK_THROWS_AS(validate(bad([](SystemConfig &c) { c.d_max = -1; })), config_error);
    CHECK_THROWS_AS(validate(bad([](SystemConfig &c) { c.gammas = {0.5, -0.1}; })), config_error);
    CHECK_THROWS_AS(derive_link(SystemConfig{}, 0.0), config_error);
    CHECK_NOTHROW(validate(SystemConfig{}));
}

TEST_CASE("dB conversions", "[system_model]")
{
    CHECK_THAT(db_to_linear(-15.0), WithinRel(0.031622776601683794, 1e-14));
    CHECK_THAT(linear_to_db(2.0), WithinRel(3.010299956639812, 1e-14));
}
