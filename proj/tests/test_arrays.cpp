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


#include "tdba/arrays.hpp"

#include <catch_amalgamated.hpp>

#include <map>

using namespace tdba;

TEST_CASE("DFT basis is unitary", "[arrays]")
{
    for (int n : {1, 4, 8, 32})
    {
        const CMat F = dft_basis(n);
        CHECK((F.adjoint() * F - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS(dft_basis(0));
}

TEST_CASE("grid steering vectors are scaled DFT columns", "[arrays]")
{
    const CMat F = dft_basis(16);
    for (int k : {0, 3, 15})
    {
        const CVec a = steering_vector(16, k);
        CHECK((a - 4.0 * F.col(k)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
        // the angle form lands on the same grid point
        CHECK((steering_vector_angle(16, grid_angle(16, k)) - a).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK_THROWS_AS(steering_vector(16, 16), std::out_of_range);
    CHECK_THROWS_AS(steering_vector(16, -1), std::out_of_range);
}

TEST_CASE("beamformed gain equals the Kronecker probe on the beamspace channel", "[arrays]")
{
    // v^H H u with u = F_M u_b, v = F_N v_b equals (u_b kron conj v_b)^T vec(F_N^H H F_M)
    const int M = 8, N = 4;
    for (int n = 0; n < 100; ++n)
    {
        Rng rng(5, StreamTag::instance, {static_cast<std::uint64_t>(n)});
        CMat H(N, M);
        for (Eigen::Index r = 0; r < N; ++r)
            for (Eigen::Index c = 0; c < M; ++c)
                H(r, c) = rng.complex_normal(1.0);
        const SparseBeam u = draw_sparse_beam(M, 1 + static_cast<int>(rng.uniform_index(M)), rng);
        const SparseBeam v = draw_sparse_beam(N, 1 + static_cast<int>(rng.uniform_index(N)), rng);
        const cd direct = antenna_weights(v).dot(H * antenna_weights(u));
        const CMat Hb = dft_basis(N).adjoint() * H * dft_basis(M);
        const CVec vecHb = Eigen::Map<const CVec>(Hb.data(), Hb.size());
        const cd probe = combined_probe(u, v).transpose() * vecHb;
        CHECK(std::abs(direct - probe) < 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("binary window marks exactly the probed cells (exhaustive 4x4)", "[arrays]")
{
    const int M = 4, N = 4;
    for (int um = 1; um < (1 << M); ++um)
        for (int vm = 1; vm < (1 << N); ++vm)
        {
            std::vector<int> us, vs;
            for (int k = 0; k < M; ++k)
                if (um & (1 << k))
                    us.push_back(k);
            for (int k = 0; k < N; ++k)
                if (vm & (1 << k))
                    vs.push_back(k);
            const auto u = make_beam(M, us), v = make_beam(N, vs);
            const RVec w = binary_window(u, v);
            const CVec g = combined_probe(u, v);
            std::vector<int> expect;
            for (int aod = 0; aod < M; ++aod)
                for (int aoa = 0; aoa < N; ++aoa)
                {
                    const int k = cell_index(aoa, aod, N);
                    const bool hit = (um >> aod & 1) && (vm >> aoa & 1);
                    REQUIRE(w(k) == (hit ? 1.0 : 0.0));
                    REQUIRE((std::abs(g(k)) > 0.0) == hit);
                    if (hit)
                        expect.push_back(k);
                }
            REQUIRE(window_cells(u, v) == expect);
        }
}

TEST_CASE("sparse beams have unit norm and kappa distinct entries", "[arrays]")
{
    Rng rng(3, StreamTag::instance, {1});
    for (int kappa : {1, 4, 16, 32})
    {
        const auto b = draw_sparse_beam(32, kappa, rng);
        CHECK(b.kappa() == kappa);
        CHECK(std::is_sorted(b.support.begin(), b.support.end()));
        CHECK(std::adjacent_find(b.support.begin(), b.support.end()) == b.support.end());
        CHECK(std::abs(b.dense().norm() - 1.0) < 1e-14);
        CHECK(std::abs(antenna_weights(b).norm() - 1.0) < 1e-12);
    }
    CHECK_THROWS(draw_sparse_beam(8, 9, rng));
    CHECK_THROWS(draw_sparse_beam(8, 0, rng));
    CHECK_THROWS(make_beam(8, {1, 1}));
    CHECK_THROWS(make_beam(8, {8}));
}

TEST_CASE("codebook index frequencies are uniform", "[arrays]")
{
    SystemConfig c;
    c.M = c.N = 8;
    c.kappa_u = c.kappa_v = 2;
    const auto cb = sample_codebook(c, 1, 100);
    std::map<int, int> bs_count;
    int bs_beams = 0;
    for (const auto &slot : cb.bs)
        for (const auto &b : slot)
        {
            ++bs_beams;
            for (int k : b.support)
                ++bs_count[k];
        }
    // each index lies in a beam with probability kappa / M = 0.25
    for (int k = 0; k < c.M; ++k)
        CHECK(std::abs(static_cast<double>(bs_count[k]) / bs_beams - 0.25) <= 0.05);
}

TEST_CASE("codebook draws are keyed per slot", "[arrays]")
{
    SystemConfig c;
    const auto short_cb = sample_codebook(c, 9, 10);
    const auto long_cb = sample_codebook(c, 9, 50);
    for (int s = 0; s < 10; ++s)
    {
        CHECK(short_cb.bs[s] == long_cb.bs[s]);
        CHECK(short_cb.user[s] == long_cb.user[s]);
    }
    CHECK(sample_codebook(c, 9, 10) == short_cb);
    CHECK_FALSE(sample_codebook(c, 10, 10) == short_cb);
    CHECK(short_cb.bs_chains() == c.M_RF);
    CHECK(short_cb.user_chains() == c.N_RF);
    SystemConfig bad = c;
    bad.kappa_u = 40;
    CHECK_THROWS_AS(sample_codebook(bad, 1, 1), config_error);
}
