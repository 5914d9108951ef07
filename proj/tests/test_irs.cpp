// SPDX-License-Identifier: Apache-2.0
//
// irskey: secret key generation with randomly phase-shifted reflecting surfaces
// Copyright (C) 2026 The irskey authors
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

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

#include "irskey/irs.hpp"
#include "irskey/propagation.hpp"

#include <numbers>
#include <random>

using namespace irskey;
using Catch::Approx;

namespace
{
    constexpr double pi = std::numbers::pi;

    ChannelSet<double> random_channels(std::mt19937_64 &rng, int N, double direct_var = 1.0)
    {
        ChannelSet<double> ch;
        ch.h_ab = complex_gaussian(rng, direct_var);
        ch.u = complex_gaussian_vector(rng, N, 1.0);
        ch.v = complex_gaussian_vector(rng, N, 1.0);
        return ch;
    }

    PhaseConfig<double> grid_config(int code, int N, int B)
    {
        PhaseConfig<double> p{RVector<double>(N), B};
        const int M = 1 << B;
        for (int n = 0; n < N; ++n, code /= M)
            p.theta(n) = grid_angle<double>(code % M, B);
        return p;
    }
}

TEST_CASE("IRS - Random configurations lie on the grid")
{
    std::mt19937_64 rng(1);
    const auto p = random_phase_config<double>(4, 1, rng);
    REQUIRE(p.size() == 4);
    REQUIRE(p.bits == 1);
    for (Eigen::Index n = 0; n < 4; ++n)
        CHECK((p.theta(n) == 0.0 || p.theta(n) == pi));

    for (int B = 1; B <= 6; ++B)
    {
        const auto q = random_phase_config<double>(200, B, rng);
        for (Eigen::Index n = 0; n < q.size(); ++n)
            CHECK(on_phase_grid(q.theta(n), B));
    }
    CHECK_THROWS_AS(random_phase_config<double>(4, 0, rng), DomainError);
    CHECK_THROWS_AS(random_phase_config<double>(4, 17, rng), DomainError);
    CHECK_THROWS_AS(random_phase_config<double>(0, 2, rng), DomainError);
}

TEST_CASE("IRS - Random phases are uniform, zero-mean and independent across rounds")
{
    std::mt19937_64 rng(2);
    for (int B = 1; B <= 4; ++B)
    {
        const int M = 1 << B;
        const int draws = 100000;
        std::vector<std::int64_t> counts(std::size_t(M), 0);
        std::complex<double> sum{}, lag{};
        std::complex<double> prev{};
        for (int i = 0; i < draws; ++i)
        {
            const auto p = random_phase_config<double>(1, B, rng);
            const int m = int(std::lround(p.theta(0) / (2 * pi) * M));
            ++counts[std::size_t(m)];
            const auto z = std::polar(1.0, p.theta(0));
            sum += z;
            if (i > 0)
                lag += z * std::conj(prev);
            prev = z;
        }
        INFO("B = " << B);
        CHECK(std::abs(sum) / draws < 0.01);
        CHECK(std::abs(lag) / (draws - 1) < 0.01);
        CHECK(oracle::chi_square_p_value(counts) > 0.01);
    }
}

TEST_CASE("IRS - Phase quantization")
{
    CHECK(quantize_phase(0.1, 2) == 0.0);
    CHECK(quantize_phase(pi / 2 - 0.1, 2) == grid_angle<double>(1, 2));
    // Exactly half-way between grid points 0 and 1: smaller index.
    CHECK(quantize_phase(pi / 4, 2) == 0.0);
    CHECK(quantize_phase(3 * pi / 4, 2) == grid_angle<double>(1, 2));
    // Wraps around 2 pi and negative angles.
    CHECK(quantize_phase(2 * pi - 0.01, 3) == 0.0);
    CHECK(quantize_phase(-0.01, 3) == 0.0);
    CHECK(quantize_phase(-pi / 2, 2) == grid_angle<double>(3, 2));
    CHECK(quantize_phase(5 * pi, 1) == pi);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i)
    {
        const int B = 1 + i % 5;
        const double a = angle(rng);
        const double q = quantize_phase(a, B);
        CHECK(on_phase_grid(q, B));
        const double err = std::abs(std::remainder(a - q, 2 * pi));
        CHECK(err <= pi / (1 << B) + 1e-12);
    }
    CHECK_THROWS_AS(quantize_phase(0.0, 0), DomainError);
}

TEST_CASE("IRS - MRT configuration")
{
    ChannelSet<double> one;
    one.h_ab = 1.0;
    one.u = CVector<double>::Constant(1, -1.0);
    one.v = CVector<double>::Constant(1, 1.0);
    const auto p = mrt_phase_config(one, std::nullopt);
    CHECK(p.theta(0) == Approx(pi));
    CHECK(std::abs(combined_channel(one.h_ab, one.cascade(), p) - std::complex<double>(2.0, 0.0)) < 1e-12);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 200; ++t)
    {
        const auto ch = random_channels(rng, 1 + t % 40);
        const CVector<double> c = ch.cascade();
        const double bound = std::abs(ch.h_ab) + c.cwiseAbs().sum();
        const auto cont = mrt_phase_config(ch, std::nullopt);
        CHECK(std::abs(combined_channel(ch.h_ab, c, cont)) == Approx(bound).epsilon(1e-12));
        for (Eigen::Index n = 0; n < cont.size(); ++n)
            CHECK((cont.theta(n) >= 0 && cont.theta(n) < 2 * pi));

        const auto q3 = mrt_phase_config(ch, std::optional<int>(3));
        for (Eigen::Index n = 0; n < q3.size(); ++n)
            CHECK(on_phase_grid(q3.theta(n), 3));
        CHECK(std::abs(combined_channel(ch.h_ab, c, q3)) >=
              std::cos(pi / 8) * c.cwiseAbs().sum() + std::abs(ch.h_ab) - 1e-12);
    }

    // Vanishing direct path: the zero-phase reference.
    ChannelSet<double> nodirect = random_channels(rng, 5);
    nodirect.h_ab = 0.0;
    const auto z = mrt_phase_config(nodirect, std::nullopt);
    const auto g = combined_channel(nodirect.h_ab, nodirect.cascade(), z);
    CHECK(std::abs(std::arg(g)) < 1e-12);
    CHECK(std::abs(g) == Approx(nodirect.cascade().cwiseAbs().sum()));
}

TEST_CASE("IRS - Continuous MRT dominates every grid configuration")
{
    std::mt19937_64 rng(5);
    for (int N = 1; N <= 3; ++N)
        for (int B = 1; B <= 2; ++B)
            for (int t = 0; t < 100; ++t)
            {
                const auto ch = random_channels(rng, N, t % 2 ? 1.0 : 0.01);
                const CVector<double> c = ch.cascade();
                const double best = std::abs(combined_channel(ch.h_ab, c, mrt_phase_config(ch, std::nullopt)));
                const int total = 1 << (B * N);
                for (int code = 0; code < total; ++code)
                    CHECK(std::abs(combined_channel(ch.h_ab, c, grid_config(code, N, B))) <= best * (1 + 1e-12));
            }
}

TEST_CASE("IRS - Per-element rounding need not be the grid optimum")
{
    // Weak direct path along 0 rad, two cascade terms at 80 and 100 degrees.
    // Rounding each element towards the direct path sends the terms to 80 and
    // 280 degrees; leaving both unrotated keeps them nearly aligned.
    ChannelSet<double> ch;
    ch.h_ab = 0.01;
    ch.u.resize(2);
    ch.v = CVector<double>::Ones(2);
    ch.u(0) = std::polar(1.0, 80.0 * pi / 180);
    ch.u(1) = std::polar(1.0, 100.0 * pi / 180);
    const CVector<double> c = ch.cascade();
    const double rounded = std::abs(combined_channel(ch.h_ab, c, mrt_phase_config(ch, std::optional<int>(1))));
    double best = 0;
    for (int code = 0; code < 4; ++code)
        best = std::max(best, std::abs(combined_channel(ch.h_ab, c, grid_config(code, 2, 1))));
    CHECK(rounded == Approx(2 * std::cos(80.0 * pi / 180) + 0.01).epsilon(1e-9));
    CHECK(best > 5 * rounded);
}

TEST_CASE("IRS - Combined channel")
{
    PhaseConfig<double> empty{RVector<double>(0), std::nullopt};
    CHECK(combined_channel<double>({}, CVector<double>(0), empty) == std::complex<double>{});

    PhaseConfig<double> flip{RVector<double>::Constant(1, pi), 1};
    CHECK(std::abs(combined_channel<double>(1.0, CVector<double>::Ones(1), flip)) < 1e-15);

    CHECK_THROWS_AS(combined_channel<double>(1.0, CVector<double>::Ones(2), flip), ContractViolation);

    // Random phases: variance of g equals the cascade energy.
    std::mt19937_64 rng(6);
    const CVector<double> c = complex_gaussian_vector(rng, 8, 1.0);
    const std::complex<double> direct(0.3, -0.2);
    const int draws = 100000;
    std::complex<double> m{};
    double p = 0;
    for (int i = 0; i < draws; ++i)
    {
        const auto g = combined_channel(direct, c, random_phase_config<double>(8, 3, rng));
        m += g;
        p += std::norm(g - direct);
    }
    CHECK(std::abs(m / double(draws) - direct) < 0.05);
    CHECK(p / draws == Approx(c.squaredNorm()).epsilon(0.02));
}
