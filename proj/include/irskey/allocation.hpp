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

#ifndef IRSKEY_ALLOCATION_HPP
#define IRSKEY_ALLOCATION_HPP

#include "irskey/keygen.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace irskey
{
    // Largest admissible training length, ceil(L/2) - 1.
    inline std::int64_t max_training_rounds(std::int64_t L) { return (L + 1) / 2 - 1; }

    template <typename Scalar = double>
    struct AllocationResult
    {
        std::int64_t q_star{};
        Scalar r_skg{};
        Scalar r_mrt{};
        Scalar r_edt{};
        Scalar c_edt{};
        Scalar alpha{};
        std::int64_t L{};
        std::int64_t q_th{};
        // diagnostics
        std::int64_t iterations{};
        std::int64_t rounds_observed{};
        Scalar rho_l{};
        Scalar rho_e_max{};
        Scalar round_autocorrelation{};  // lag-one correlation of Alice's raw observations
    };

    // |g*|^2 with the phase-aligned configuration
    template <typename Scalar = double>
    Scalar mrt_gain(const ChannelSet<Scalar> &channels, std::optional<int> bits)
    {
        const PhaseConfig<Scalar> opt = mrt_phase_config(channels, bits);
        return std::norm(combined_channel(channels.h_ab, channels.cascade(), opt));
    }

    template <typename Scalar = double>
    Scalar mrt_rate(Scalar gamma_b, const ChannelSet<Scalar> &channels, std::optional<int> bits, Scalar delta_t)
    {
        if (!(gamma_b >= 0))
            throw DomainError("mrt_rate: reference SNR must be non-negative");
        return std::log2(Scalar(1) + gamma_b * mrt_gain(channels, bits)) / delta_t;
    }

    // Secure rate for Q training rounds out of L slots: key-limited while
    // alpha = R_SKG / R_MRT <= (L - 2Q)/Q, data-limited afterwards.
    template <typename Scalar = double>
    Scalar edt_rate(Scalar r_skg, Scalar r_mrt, std::int64_t Q, std::int64_t L)
    {
        if (Q < 1 || Q > max_training_rounds(L))
            throw DomainError("edt_rate: Q must lie in [1, ceil(L/2) - 1]");
        if (r_skg < 0 || r_mrt < 0)
            throw DomainError("edt_rate: rates must be non-negative");
        const auto q = static_cast<Scalar>(Q);
        const auto l = static_cast<Scalar>(L);
        // alpha <= (L-2Q)/Q rewritten without dividing by R_MRT
        if (r_skg * q <= r_mrt * (l - Scalar(2) * q))
            return r_skg * q / l;
        return r_mrt * (l - Scalar(2) * q) / l;
    }

    // Bisection on the increasing gap Q R_SKG - (L - 2Q) R_MRT over
    // [q_min, ceil(L/2) - 1]. Both final endpoints are compared and the smaller
    // |gap| wins, ties going to the smaller Q.
    template <typename Scalar = double>
    std::int64_t optimal_q_bisection(Scalar r_skg, Scalar r_mrt, std::int64_t L, std::int64_t q_min)
    {
        if (!(r_skg > 0 || r_mrt > 0))
            throw DomainError("optimal_q_bisection: at least one rate must be positive");
        std::int64_t lo = q_min;
        std::int64_t hi = max_training_rounds(L);
        if (lo < 1 || lo > hi)
            throw DomainError("optimal_q_bisection: empty search range");

        auto gap = [&](std::int64_t q) {
            return static_cast<Scalar>(q) * r_skg - static_cast<Scalar>(L - 2 * q) * r_mrt;
        };
        while (hi - lo > 1)
        {
            const std::int64_t mid = (lo + hi) / 2;
            if (gap(mid) <= 0)
                lo = mid;
            else
                hi = mid;
        }
        return std::abs(gap(hi)) < std::abs(gap(lo)) ? hi : lo;
    }

    enum class AllocationMode
    {
        faithful,  // accumulate observations round by round and re-estimate the key rate
        fast       // key rate from the analytic correlations of the realization
    };

    template <typename Scalar = double>
    struct AllocationParams
    {
        std::int64_t L = 1000;
        std::int64_t q_th = 100;
        Scalar gamma_b{};    // P / sigma^2
        Scalar noise_var{};  // sigma^2 / P
        Scalar delta_t = Scalar(1e-3);
        int bits = 3;
        bool mean_removal = true;
        AllocationMode mode = AllocationMode::faithful;
    };

    // Key rate that treats an eavesdropper at least as informed as Bob as zero secrecy.
    template <typename Scalar = double>
    Scalar kgr_or_zero(const CorrelationEstimates<Scalar> &est, Scalar delta_t)
    {
        try
        {
            return kgr_from_correlations(est, delta_t);
        }
        catch (const NoSecrecyError &)
        {
            return Scalar(0);
        }
    }

    namespace detail
    {
        template <typename Scalar>
        AllocationResult<Scalar> finish(AllocationResult<Scalar> r)
        {
            r.r_edt = edt_rate(r.r_skg, r.r_mrt, r.q_star, r.L);
            r.c_edt = r.r_edt;
            r.alpha = r.r_mrt > 0 ? r.r_skg / r.r_mrt : std::numeric_limits<Scalar>::infinity();
            return r;
        }
    }

    // Optimal time-slot allocation. In faithful mode, starting from Q = q_th:
    // observe Q rounds, estimate R_SKG, bisect for Q* over [Q, ceil(L/2)-1],
    // increment Q, and stop once Q reaches the previous Q*.
    template <typename Scalar, typename Rng>
    AllocationResult<Scalar> run_algorithm_1(const ChannelSet<Scalar> &channels, const AllocationParams<Scalar> &params,
                                             Rng &phase_rng, Rng &noise_rng)
    {
        const std::int64_t q_max = max_training_rounds(params.L);
        if (params.q_th < 1 || params.L < 2 * params.q_th + 1)
            throw DomainError("run_algorithm_1: need q_th >= 1 and L >= 2 q_th + 1");

        AllocationResult<Scalar> r;
        r.L = params.L;
        r.q_th = params.q_th;
        r.r_mrt = mrt_rate(params.gamma_b, channels, std::optional<int>(params.bits), params.delta_t);

        if (params.mode == AllocationMode::fast)
        {
            const auto est = analytic_correlations(channels, params.noise_var, params.mean_removal);
            r.rho_l = est.rho_l;
            r.rho_e_max = est.rho_e_max();
            r.r_skg = kgr_or_zero(est, params.delta_t);
            r.q_star = optimal_q_bisection(r.r_skg, r.r_mrt, params.L, params.q_th);
            const Scalar direct = std::norm(channels.h_ab);
            r.round_autocorrelation = direct / (direct + channels.cascade().squaredNorm() + params.noise_var);
            return detail::finish(r);
        }

        // Phases for every round that could ever be needed, consumed in order.
        std::vector<PhaseConfig<Scalar>> configs;
        configs.reserve(static_cast<std::size_t>(q_max));
        for (std::int64_t q = 0; q < q_max; ++q)
            configs.push_back(random_phase_config<Scalar>(channels.elements(), params.bits, phase_rng));
        const ObservationRecord<Scalar> all =
            observe_rounds<Scalar>(channels, configs, params.noise_var, params.delta_t, noise_rng);

        std::int64_t q_t = params.q_th;
        std::int64_t q_star_prev = 0;
        std::int64_t iterations = 0;
        do
        {
            if (++iterations > q_max + 1)
                throw DomainError("run_algorithm_1: outer loop failed to converge");
            const auto est = estimate_correlations(normalize(all.prefix(q_t), params.mean_removal));
            r.rho_l = est.rho_l;
            r.rho_e_max = est.rho_e_max();
            r.r_skg = kgr_or_zero(est, params.delta_t);
            r.rounds_observed = q_t;
            q_star_prev = optimal_q_bisection(r.r_skg, r.r_mrt, params.L, q_t);
            ++q_t;
        } while (q_t < q_star_prev);

        r.q_star = q_star_prev;
        r.iterations = iterations;
        const auto lag = round_lag_sums<Scalar>(all.h_a.head(r.rounds_observed));
        r.round_autocorrelation = lag.power > 0 ? lag.cross / lag.power : Scalar(0);
        return detail::finish(r);
    }
}

#endif
