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
#include "irskey/keygen.hpp"

#include <random>

using namespace irskey;
using Catch::Approx;

namespace
{
    ChannelSet<double> unit_channels(std::mt19937_64 &rng, int N, double direct_var)
    {
        ChannelSet<double> ch;
        ch.h_ab = complex_gaussian(rng, direct_var);
        ch.u = complex_gaussian_vector(rng, N, 1.0);
        ch.v = complex_gaussian_vector(rng, N, 1.0);
        ch.sigma_ab2 = direct_var;
        ch.sigma_u2 = ch.sigma_v2 = 1.0;
        return ch;
    }

    std::vector<PhaseConfig<double>> configs(std::mt19937_64 &rng, int Q, int N, int B = 3)
    {
        std::vector<PhaseConfig<double>> out;
        for (int q = 0; q < Q; ++q)
            out.push_back(random_phase_config<double>(N, B, rng));
        return out;
    }

    ObservationRecord<double> white_record(std::mt19937_64 &rng, int Q)
    {
        ObservationRecord<double> r;
        r.h_a = complex_gaussian_vector(rng, Q, 1.0);
        r.h_b = complex_gaussian_vector(rng, Q, 1.0);
        r.h_ae.push_back(complex_gaussian_vector(rng, Q, 1.0));
        r.h_be.push_back(complex_gaussian_vector(rng, Q, 1.0));
        return r;
    }
}

TEST_CASE("Keygen - Closed-form rate examples")
{
    CHECK(kgr_closed_form(0.9, std::sqrt(0.9), 1e-3) == Approx(0.0).margin(1e-9));
    CHECK(kgr_closed_form(0.99, 0.0, 1e-3) == Approx(2825.6).margin(0.1));
    CHECK(kgr_closed_form(0.9, 0.3, 1e-3) == Approx(500.0 * std::log2(0.8281 / 0.172)).epsilon(1e-12));
    CHECK(kgr_closed_form(0.9, 0.3, 1e-3) == Approx(1133.8).margin(0.15));
    CHECK(kgr_closed_form(0.0, 0.0, 1e-3) == Approx(0.0).margin(1e-12));
    CHECK(kgr_closed_form(0.5, 0.0, 2e-3) == Approx(0.5 * kgr_closed_form(0.5, 0.0, 1e-3)));
}

TEST_CASE("Keygen - Closed-form rate errors")
{
    CHECK_THROWS_AS(kgr_closed_form(0.5, 0.8, 1e-3), NoSecrecyError);
    CHECK_THROWS_AS(kgr_closed_form(1.0, 0.0, 1e-3), DomainError);
    CHECK_THROWS_AS(kgr_closed_form(0.5, 0.1, 0.0), DomainError);
    CHECK_THROWS_AS(kgr_closed_form(0.5, -0.1, 1e-3), DomainError);
    CHECK_THROWS_AS(kgr_closed_form(-0.5, 0.1, 1e-3), DomainError);
    try
    {
        kgr_closed_form(1.0, 0.0, 1e-3);
    }
    catch (const DomainError &e)
    {
        CHECK(std::string(e.what()).find("rho_L >= 1") != std::string::npos);
    }
}

TEST_CASE("Keygen - Conditional mutual information")
{
    CHECK(conditional_mutual_information(0.0, 0.0) == Approx(0.0).margin(1e-15));
    // A and B independent but both tied to BE: conditioning on Eve induces a
    // partial correlation of -e / (1 - e) = -1/3 at rho_e = 0.5.
    CHECK(conditional_mutual_information(0.0, 0.5) == Approx(-std::log2(8.0 / 9.0)).epsilon(1e-12));

    double worst_oracle = 0, worst_closed = 0;
    for (int i = 0; i <= 99; ++i)
        for (int j = 0; j <= 90; ++j)
        {
            const double rl = 0.99 * i / 99.0, re = 0.9 * j / 90.0;
            if (!(re * re < rl))
                continue;
            const double mi = conditional_mutual_information(rl, re);
            worst_oracle = std::max(worst_oracle, std::abs(mi - oracle::partial_correlation_mi(rl, re)));
            worst_closed = std::max(worst_closed, std::abs(mi - 2e-3 * kgr_closed_form(rl, re, 1e-3)));
        }
    CHECK(worst_oracle < 1e-9);
    CHECK(worst_closed < 1e-9);

    CHECK_THROWS_AS(conditional_mutual_information(1.0, 0.0), DomainError);

    // Sub-determinants in closed form.
    for (const double rl : {0.3, 0.8})
    {
        const double re = 0.5;
        const auto w = observation_covariance(rl, re);
        const std::vector<int> a_cond{0, 2, 3}, b_cond{1, 2, 3};
        CHECK(w(a_cond, a_cond).determinant() == Approx(0.75).epsilon(1e-14));
        CHECK(w(b_cond, b_cond).determinant() == Approx(0.75).epsilon(1e-14));
        CHECK(w.bottomRightCorner<2, 2>().determinant() == Approx(1.0).epsilon(1e-14));
        CHECK(w.determinant() == Approx(1 + 2 * rl * re * re - 2 * re * re - rl * rl).epsilon(1e-12));
    }
}

TEST_CASE("Keygen - Rate is monotone in both correlations")
{
    for (double rl = 0.02; rl < 0.98; rl += 0.02)
        for (double re = 0.01; re * re < rl - 0.02; re += 0.02)
        {
            const double h = 1e-5;
            const double d_l = kgr_closed_form(rl + h, re, 1e-3) - kgr_closed_form(rl - h, re, 1e-3);
            const double e = re * re;
            const double d_e = kgr_closed_form(rl, std::sqrt(e + h), 1e-3) - kgr_closed_form(rl, std::sqrt(e - h), 1e-3);
            CHECK(d_l > 0);
            CHECK(d_e < 0);
        }
}

TEST_CASE("Keygen - Noiseless reciprocity and perfect-correlation Eve")
{
    std::mt19937_64 rng(1);
    auto ch = unit_channels(rng, 20, 0.5);
    EveChannels<double> eve;
    eve.h_be = 2.0 * ch.h_ab;
    eve.h_ae = complex_gaussian(rng, 1.0);
    eve.e = ch.u;
    ch.eves.push_back(eve);
    // An Eve with e = 2u sees Bob's channel exactly scaled by 2.
    ch.eves[0].e = 2.0 * ch.u;
    const auto cfg = configs(rng, 30, 20);
    const auto rec = observe_rounds<double>(ch, cfg, 0.0, 1e-3, rng);
    CHECK(rec.h_a == rec.h_b);
    CHECK((rec.h_be[0] - 2.0 * rec.h_b).norm() < 1e-12 * rec.h_b.norm());
    for (int q = 0; q < 30; ++q)
        CHECK(std::abs(rec.h_a(q) - combined_channel(ch.h_ab, ch.cascade(), cfg[std::size_t(q)])) < 1e-12);
    const auto est = estimate_correlations(normalize(rec));
    CHECK(est.rho_l == Approx(1.0).margin(1e-12));
    CHECK(est.rho_e_max() == Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(observe_rounds<double>(ch, std::span<const PhaseConfig<double>>{}, 0.0, 1e-3, rng), ContractViolation);
    CHECK_THROWS_AS(observe_rounds<double>(ch, cfg, -1.0, 1e-3, rng), DomainError);
    const auto wrong = configs(rng, 3, 19);
    CHECK_THROWS_AS(observe_rounds<double>(ch, wrong, 0.0, 1e-3, rng), ContractViolation);
}

TEST_CASE("Keygen - Observation noise has the configured variance")
{
    std::mt19937_64 rng(2);
    auto ch = unit_channels(rng, 4, 1.0);
    const auto cfg = configs(rng, 20000, 4);
    const auto rec = observe_rounds<double>(ch, cfg, 0.25, 1e-3, rng);
    const CVector<double> diff = rec.h_a - rec.h_b;
    CHECK(diff.squaredNorm() / 20000.0 == Approx(0.5).epsilon(0.03));
}

TEST_CASE("Keygen - Normalization")
{
    std::mt19937_64 rng(3);
    const auto rec = white_record(rng, 50);
    for (const bool mr : {false, true})
    {
        const auto n = normalize(rec, mr);
        CHECK(n.h_a.squaredNorm() == Approx(1.0).margin(1e-12));
        CHECK(n.h_b.squaredNorm() == Approx(1.0).margin(1e-12));
        CHECK(n.h_ae[0].squaredNorm() == Approx(1.0).margin(1e-12));
        CHECK(n.h_be[0].squaredNorm() == Approx(1.0).margin(1e-12));
        if (mr)
            CHECK(std::abs(n.h_a.mean()) < 1e-15);

        auto scaled = rec;
        scaled.h_a *= 37.5;
        scaled.h_b *= 1e-6;
        scaled.h_be[0] *= 4e3;
        const auto m = normalize(scaled, mr);
        CHECK((m.h_a - n.h_a).norm() < 1e-14);
        CHECK((m.h_b - n.h_b).norm() < 1e-14);
        CHECK((m.h_be[0] - n.h_be[0]).norm() < 1e-14);
    }

    CHECK_THROWS_AS(normalize(rec.prefix(1), true), DomainError);
    CHECK_NOTHROW(normalize(rec.prefix(1), false));
    auto zero = rec;
    zero.h_b.setZero();
    CHECK_THROWS_AS(normalize(zero), DomainError);
    CHECK_THROWS_AS(rec.prefix(0), ContractViolation);
    CHECK_THROWS_AS(rec.prefix(51), ContractViolation);
}

TEST_CASE("Keygen - Correlation estimates of independent streams")
{
    std::mt19937_64 rng(4);
    int below = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t)
    {
        const auto est = estimate_correlations(normalize(white_record(rng, 400)));
        below += est.rho_e_max() < 0.15;
        REQUIRE(est.rho_l >= 0);
        REQUIRE(est.rho_l <= 1);
    }
    CHECK(below >= 990);
}

TEST_CASE("Keygen - Autocorrelation prediction")
{
    CHECK(autocorrelation_theoretical(0.0, 1.0, 1.0, 10, false) == 0.0);
    CHECK(autocorrelation_theoretical(1e-10, 1.0, 1.0, 10, true) == 1.0);
    CHECK(autocorrelation_theoretical(1e-10, 3.34e-13, 1.0, 50, false) == Approx(0.857).margin(1e-3));
    CHECK_THROWS_AS(autocorrelation_theoretical(0.0, 0.0, 0.0, 5, false), DomainError);
    CHECK_THROWS_AS(autocorrelation_theoretical(1.0, 1.0, 1.0, 0, false), DomainError);

    // Empirical lag-one correlation in both regimes, pooled over intervals.
    for (const double direct : {50.0, 0.5})
    {
        std::mt19937_64 rng(5);
        std::vector<LagSums<double>> sums;
        for (int i = 0; i < 300; ++i)
        {
            const auto ch = unit_channels(rng, 10, direct);
            const auto rec = observe_rounds<double>(ch, configs(rng, 40, 10), 0.0, 1e-3, rng);
            sums.push_back(round_lag_sums<double>(rec.h_a));
        }
        const auto est = pooled_autocorrelation<double>(sums);
        const double want = autocorrelation_theoretical(direct, 1.0, 1.0, 10, false);
        INFO("direct " << direct << ": estimate " << est.value << " +- " << est.standard_error << ", predicted " << want);
        CHECK(std::abs(est.value - want) < 3 * est.standard_error);
    }
}

TEST_CASE("Keygen - Combined channel is Gaussian over random phases")
{
    std::mt19937_64 rng(6);
    const auto ch = unit_channels(rng, 100, 1.0);
    const CVector<double> c = ch.cascade();
    const double sd = std::sqrt(c.squaredNorm() / 2);
    std::vector<double> re;
    for (int i = 0; i < 10000; ++i)
        re.push_back(std::real(combined_channel(ch.h_ab, c, random_phase_config<double>(100, 3, rng))));
    const double mu = std::real(ch.h_ab);
    const double p = oracle::ks_p_value(re, [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sd * std::sqrt(2.0))); });
    CHECK(p > 0.01);
}

TEST_CASE("Keygen - Sample-average rate")
{
    // Cascade-dominated channel, no Eves, moderate SNR.
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t)
    {
        const auto ch = unit_channels(rng, 64, 0.0);
        const double noise = 0.02 * ch.cascade().squaredNorm();
        const auto cfg = configs(rng, 400, 64);
        const auto rec = observe_rounds<double>(ch, cfg, noise, 1e-3, rng);
        const double sim = kgr_sample_average(rec);
        const double p = ch.cascade().squaredNorm();
        const double analytic = kgr_closed_form(p / (p + noise), 0.0, 1e-3);
        CHECK(sim == Approx(analytic).epsilon(0.10));
    }

    std::mt19937_64 a(8), b(8);
    auto make = [](std::mt19937_64 &r) {
        const auto ch = unit_channels(r, 16, 1.0);
        return kgr_sample_average(observe_rounds<double>(ch, configs(r, 100, 16), 0.1, 1e-3, r), true);
    };
    CHECK(make(a) == make(b));
}

TEST_CASE("Keygen - Analytic correlations match long-run estimates")
{
    std::mt19937_64 rng(9);
    auto ch = unit_channels(rng, 32, 0.3);
    EveChannels<double> eve;
    eve.h_be = 0.5 * ch.h_ab + complex_gaussian(rng, 0.75);
    eve.h_ae = complex_gaussian(rng, 1.0);
    eve.e = 0.5 * ch.u + complex_gaussian_vector(rng, 32, 0.75);
    ch.eves.push_back(eve);
    const double noise = 0.5;
    for (const bool mr : {false, true})
    {
        const auto rec = observe_rounds<double>(ch, configs(rng, 40000, 32), noise, 1e-3, rng);
        const auto est = estimate_correlations(normalize(rec, mr));
        const auto ana = analytic_correlations(ch, noise, mr);
        CHECK(est.rho_l == Approx(ana.rho_l).margin(0.01));
        CHECK(est.rho_e_max() == Approx(ana.rho_e_max()).margin(0.02));
    }
}

TEST_CASE("Keygen - Key quantization and one-time pad")
{
    std::mt19937_64 rng(10);
    const auto ch = unit_channels(rng, 16, 0.2);
    const auto clean = normalize(observe_rounds<double>(ch, configs(rng, 200, 16), 0.0, 1e-3, rng), true);
    const auto km = quantize_keys(clean);
    CHECK(km.bits_alice.size() == 200);
    CHECK(km.bits_alice == km.bits_bob);
    CHECK(km.kdr == 0.0);

    const auto indep = quantize_keys(normalize(white_record(rng, 1000)));
    CHECK(indep.kdr == Approx(0.5).margin(0.05));
    std::size_t ones = 0;
    for (auto b : indep.bits_alice)
        ones += b;
    CHECK(double(ones) / 1000.0 == Approx(0.5).margin(0.05));

    for (int t = 0; t < 50; ++t)
    {
        BitString data(128), key(128);
        for (std::size_t i = 0; i < 128; ++i)
        {
            data[i] = std::uint8_t(rng() & 1);
            key[i] = std::uint8_t(rng() & 1);
        }
        const auto cipher = otp_xor(data, key);
        CHECK(otp_xor(cipher, key) == data);
        for (std::size_t i = 0; i < 128; ++i)
            REQUIRE(cipher[i] == (data[i] ^ key[i]));
    }
    CHECK_THROWS_AS(otp_xor(BitString(10, 1), BitString(9, 0)), ContractViolation);
    CHECK(otp_xor(BitString{}, BitString{}).empty());
}
