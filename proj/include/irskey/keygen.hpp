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

#ifndef IRSKEY_KEYGEN_HPP
#define IRSKEY_KEYGEN_HPP

#include "irskey/irs.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace irskey
{
    // Noisy least-squares estimates of the combined channel over Q training rounds.
    template <typename Scalar = double>
    struct ObservationRecord
    {
        CVector<Scalar> h_a;                // Alice's estimate of g_ba
        CVector<Scalar> h_b;                // Bob's estimate of g_ab
        std::vector<CVector<Scalar>> h_ae;  // Eve k listening to Alice's pilots
        std::vector<CVector<Scalar>> h_be;  // Eve k listening to Bob's pilots
        Scalar noise_var{};                 // sigma^2 / P
        Scalar delta_t = Scalar(1e-3);

        Eigen::Index rounds() const { return h_a.size(); }
        std::size_t eves() const { return h_be.size(); }

        // The first q rounds, used when observations accumulate round by round.
        ObservationRecord prefix(Eigen::Index q) const
        {
            if (q < 1 || q > rounds())
                throw ContractViolation("ObservationRecord::prefix: round count out of range");
            ObservationRecord out{h_a.head(q), h_b.head(q), {}, {}, noise_var, delta_t};
            for (const auto &s : h_ae)
                out.h_ae.push_back(s.head(q));
            for (const auto &s : h_be)
                out.h_be.push_back(s.head(q));
            return out;
        }
    };

    // Unit-norm observation streams.
    template <typename Scalar = double>
    struct NormalizedRecord
    {
        CVector<Scalar> h_a;
        CVector<Scalar> h_b;
        std::vector<CVector<Scalar>> h_ae;
        std::vector<CVector<Scalar>> h_be;
        bool mean_removed = false;
        Scalar delta_t = Scalar(1e-3);
    };

    template <typename Scalar = double>
    struct CorrelationEstimates
    {
        Scalar rho_l{};
        std::vector<Scalar> rho_e;

        Scalar rho_e_max() const { return rho_e.empty() ? Scalar(0) : *std::max_element(rho_e.begin(), rho_e.end()); }
    };

    using BitString = std::vector<std::uint8_t>;

    struct KeyMaterial
    {
        BitString bits_alice;
        BitString bits_bob;
        double kdr = 0.0;
    };

    // Raised by the rate formula when rho_L <= rho_E^2: the eavesdropper knows
    // at least as much as the legitimate pair and no secret bits remain.
    class NoSecrecyError : public DomainError
    {
    public:
        using DomainError::DomainError;
    };

    template <typename Scalar, typename Rng>
    ObservationRecord<Scalar> observe_rounds(const ChannelSet<Scalar> &channels,
                                             std::span<const PhaseConfig<Scalar>> configs, Scalar noise_var,
                                             Scalar delta_t, Rng &rng)
    {
        const auto Q = static_cast<Eigen::Index>(configs.size());
        if (Q < 1)
            throw ContractViolation("observe_rounds: need at least one round");
        if (!(noise_var >= 0))
            throw DomainError("observe_rounds: noise variance must be non-negative");
        const Eigen::Index N = channels.elements();
        for (const auto &c : configs)
            if (c.size() != N)
                throw ContractViolation("observe_rounds: phase configuration length differs from element count");

        const std::size_t K = channels.eves.size();
        const CVector<Scalar> ab = channels.cascade();
        std::vector<CVector<Scalar>> ae(K), be(K);
        for (std::size_t k = 0; k < K; ++k)
        {
            ae[k] = channels.eves[k].e.cwiseProduct(channels.u);
            be[k] = channels.eves[k].e.cwiseProduct(channels.v);
        }

        ObservationRecord<Scalar> rec;
        rec.h_a.resize(Q);
        rec.h_b.resize(Q);
        rec.h_ae.assign(K, CVector<Scalar>(Q));
        rec.h_be.assign(K, CVector<Scalar>(Q));
        rec.noise_var = noise_var;
        rec.delta_t = delta_t;

        // Legitimate noise is drawn before any Eve noise so the legitimate
        // observations do not depend on how many Eves are present.
        std::vector<CVector<Scalar>> phasors;
        phasors.reserve(configs.size());
        for (const auto &c : configs)
            phasors.push_back(c.phasors());
        for (Eigen::Index q = 0; q < Q; ++q)
        {
            const Complex<Scalar> g = channels.h_ab + ab.cwiseProduct(phasors[std::size_t(q)]).sum();
            rec.h_a(q) = g + complex_gaussian(rng, noise_var);
            rec.h_b(q) = g + complex_gaussian(rng, noise_var);
        }
        for (std::size_t k = 0; k < K; ++k)
        {
            const auto &eve = channels.eves[k];
            for (Eigen::Index q = 0; q < Q; ++q)
            {
                const auto &p = phasors[std::size_t(q)];
                rec.h_ae[k](q) = eve.h_ae + ae[k].cwiseProduct(p).sum() + complex_gaussian(rng, noise_var);
                rec.h_be[k](q) = eve.h_be + be[k].cwiseProduct(p).sum() + complex_gaussian(rng, noise_var);
            }
        }
        return rec;
    }

    namespace detail
    {
        template <typename Scalar>
        CVector<Scalar> unit_stream(const CVector<Scalar> &raw, bool mean_removal, const char *name)
        {
            CVector<Scalar> x = raw;
            if (mean_removal)
                x.array() -= x.mean();
            const Scalar norm = x.norm();
            if (!(norm > Scalar(0)) || !std::isfinite(norm))
                throw DomainError(std::string("normalize: degenerate (zero-norm) stream ") + name);
            return x / norm;
        }
    }

    // Divides every stream by its Euclidean norm over the Q rounds, optionally
    // after subtracting the per-stream sample mean.
    template <typename Scalar = double>
    NormalizedRecord<Scalar> normalize(const ObservationRecord<Scalar> &record, bool mean_removal = false)
    {
        if (record.rounds() < 1)
            throw ContractViolation("normalize: empty record");
        NormalizedRecord<Scalar> out;
        out.mean_removed = mean_removal;
        out.delta_t = record.delta_t;
        out.h_a = detail::unit_stream(record.h_a, mean_removal, "A");
        out.h_b = detail::unit_stream(record.h_b, mean_removal, "B");
        for (const auto &s : record.h_ae)
            out.h_ae.push_back(detail::unit_stream(s, mean_removal, "AE"));
        for (const auto &s : record.h_be)
            out.h_be.push_back(detail::unit_stream(s, mean_removal, "BE"));
        return out;
    }

    // Magnitudes of the inner products <h_A, h_B> and <h_B, h_BE_k> of unit streams.
    template <typename Scalar = double>
    CorrelationEstimates<Scalar> estimate_correlations(const NormalizedRecord<Scalar> &normalized)
    {
        auto corr = [](const CVector<Scalar> &x, const CVector<Scalar> &y) {
            if (x.size() != y.size())
                throw ContractViolation("estimate_correlations: stream lengths differ");
            return std::clamp(std::abs(y.dot(x)), Scalar(0), Scalar(1));
        };
        CorrelationEstimates<Scalar> est;
        est.rho_l = corr(normalized.h_a, normalized.h_b);
        for (const auto &be : normalized.h_be)
            est.rho_e.push_back(corr(normalized.h_b, be));
        return est;
    }

    // Secret key rate in bit/s from the legitimate correlation rho_l and the
    // strongest eavesdropper correlation:
    //   R = 1/(2 dT) log2( (1 - e)^2 / (1 + 2 rho_l e - 2 e - rho_l^2) ),  e = rho_e^2.
    // The denominator is evaluated in its factored form (1 - rho_l)(1 + rho_l - 2e).
    template <typename Scalar = double>
    Scalar kgr_closed_form(Scalar rho_l, Scalar rho_e_max, Scalar delta_t)
    {
        if (!(delta_t > 0))
            throw DomainError("kgr_closed_form: slot duration must be positive");
        if (!(rho_e_max >= 0) || !(rho_e_max <= 1) || !(rho_l >= 0))
            throw DomainError("kgr_closed_form: correlations must lie in [0, 1]");
        if (!(rho_l < 1))
            throw DomainError("kgr_closed_form: rho_L >= 1 (noiseless observations carry unbounded rate)");
        const Scalar e = rho_e_max * rho_e_max;
        const Scalar slack = std::numeric_limits<Scalar>::epsilon() * Scalar(16);
        if (e > rho_l * (Scalar(1) + slack))
            throw NoSecrecyError("kgr_closed_form: rho_L <= rho_E^2, no extractable secrecy");
        if (e >= rho_l)
            return Scalar(0);
        const Scalar num = (Scalar(1) - e) * (Scalar(1) - e);
        const Scalar den = (Scalar(1) - rho_l) * (Scalar(1) + rho_l - Scalar(2) * e);
        return std::log2(num / den) / (Scalar(2) * delta_t);
    }

    // I(A; B | AE, BE) in bits per sample for jointly Gaussian unit-variance
    // observations, from determinants of covariance sub-matrices. Only the
    // A-B (rho_l) and A-BE, B-BE (rho_e) entries are non-zero.
    // Covariance of the unit-variance observations in the order A, B, AE, BE.
    template <typename Scalar = double>
    Eigen::Matrix<Scalar, 4, 4> observation_covariance(Scalar rho_l, Scalar rho_e)
    {
        Eigen::Matrix<Scalar, 4, 4> w = Eigen::Matrix<Scalar, 4, 4>::Identity();
        w(0, 1) = w(1, 0) = rho_l;
        w(0, 3) = w(3, 0) = rho_e;
        w(1, 3) = w(3, 1) = rho_e;
        return w;
    }

    template <typename Scalar = double>
    Scalar conditional_mutual_information(Scalar rho_l, Scalar rho_e)
    {
        const Eigen::Matrix<Scalar, 4, 4> w = observation_covariance(rho_l, rho_e);

        auto det = [&w](std::initializer_list<int> idx) {
            const auto n = static_cast<Eigen::Index>(idx.size());
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sub(n, n);
            Eigen::Index i = 0;
            for (int r : idx)
            {
                Eigen::Index j = 0;
                for (int c : idx)
                    sub(i, j++) = w(r, c);
                ++i;
            }
            const Scalar d = sub.fullPivLu().determinant();
            if (!(d > 0))
                throw DomainError("conditional_mutual_information: covariance matrix is not positive definite");
            return d;
        };
        const Scalar d_a_cond = det({0, 2, 3});
        const Scalar d_b_cond = det({1, 2, 3});
        const Scalar d_cond = det({2, 3});
        const Scalar d_all = det({0, 1, 2, 3});
        return std::log2(d_a_cond * d_b_cond / (d_cond * d_all));
    }

    // Correlation between observations from two distinct rounds when phases are
    // uniform on the grid, so E{e^{j theta}} = 0: only the static direct path survives.
    template <typename Scalar = double>
    Scalar autocorrelation_theoretical(Scalar sigma_direct2, Scalar sigma_u2, Scalar sigma_v2, Eigen::Index N,
                                       bool same_round)
    {
        if (sigma_direct2 < 0 || sigma_u2 < 0 || sigma_v2 < 0 || N < 1)
            throw DomainError("autocorrelation_theoretical: powers must be non-negative and N >= 1");
        const Scalar total = sigma_direct2 + Scalar(N) * sigma_u2 * sigma_v2;
        if (!(total > 0))
            throw DomainError("autocorrelation_theoretical: all powers are zero");
        return same_round ? Scalar(1) : sigma_direct2 / total;
    }

    template <typename Scalar = double>
    Scalar kgr_from_correlations(const CorrelationEstimates<Scalar> &est, Scalar delta_t)
    {
        return kgr_closed_form(est.rho_l, est.rho_e_max(), delta_t);
    }

    // Normalize, estimate correlations, and evaluate the rate at the strongest Eve.
    template <typename Scalar = double>
    Scalar kgr_sample_average(const ObservationRecord<Scalar> &record, bool mean_removal = false)
    {
        return kgr_from_correlations(estimate_correlations(normalize(record, mean_removal)), record.delta_t);
    }

    // Correlations the estimator converges to for a fixed channel realization
    // over random grid phases (independent elements, zero-mean phasors).
    template <typename Scalar = double>
    CorrelationEstimates<Scalar> analytic_correlations(const ChannelSet<Scalar> &channels, Scalar noise_var,
                                                       bool mean_removal)
    {
        const CVector<Scalar> ab = channels.cascade();
        Scalar p_b = ab.squaredNorm();
        if (!mean_removal)
            p_b += std::norm(channels.h_ab);
        CorrelationEstimates<Scalar> est;
        est.rho_l = p_b / (p_b + noise_var);
        for (const auto &eve : channels.eves)
        {
            const CVector<Scalar> be = eve.e.cwiseProduct(channels.v);
            Complex<Scalar> cross = be.dot(ab);
            Scalar p_e = be.squaredNorm();
            if (!mean_removal)
            {
                cross += channels.h_ab * std::conj(eve.h_be);
                p_e += std::norm(eve.h_be);
            }
            est.rho_e.push_back(std::min(Scalar(1), std::abs(cross) / std::sqrt((p_b + noise_var) * (p_e + noise_var))));
        }
        return est;
    }

    // Lag-one sums for one stream: sum_q Re{h(q) h(q+1)^*} and sum_q |h(q)|^2 (both over q < Q-1).
    template <typename Scalar = double>
    struct LagSums
    {
        Scalar cross{};
        Scalar power{};
        Eigen::Index pairs{};
    };

    template <typename Scalar = double>
    LagSums<Scalar> round_lag_sums(const CVector<Scalar> &stream)
    {
        LagSums<Scalar> s;
        for (Eigen::Index q = 0; q + 1 < stream.size(); ++q)
        {
            s.cross += std::real(stream(q) * std::conj(stream(q + 1)));
            s.power += Scalar(0.5) * (std::norm(stream(q)) + std::norm(stream(q + 1)));
            ++s.pairs;
        }
        return s;
    }

    template <typename Scalar = double>
    struct AutocorrelationEstimate
    {
        Scalar value{};
        Scalar standard_error{};
    };

    // Ratio-of-sums estimate of the round-to-round correlation pooled across
    // coherence intervals, with a delta-method standard error over intervals.
    template <typename Scalar = double>
    AutocorrelationEstimate<Scalar> pooled_autocorrelation(std::span<const LagSums<Scalar>> intervals)
    {
        if (intervals.size() < 2)
            throw ContractViolation("pooled_autocorrelation: need at least two intervals");
        Scalar cross = 0, power = 0;
        for (const auto &s : intervals)
        {
            cross += s.cross;
            power += s.power;
        }
        if (!(power > 0))
            throw DomainError("pooled_autocorrelation: zero power");
        const Scalar ratio = cross / power;
        const auto m = static_cast<Scalar>(intervals.size());
        const Scalar mean_power = power / m;
        Scalar ss = 0;
        for (const auto &s : intervals)
        {
            const Scalar r = s.cross - ratio * s.power;
            ss += r * r;
        }
        return {ratio, std::sqrt(ss / (m * (m - 1))) / mean_power};
    }

    // One bit per round and party: the sign of the real part of the mean-removed sample.
    template <typename Scalar = double>
    KeyMaterial quantize_keys(const NormalizedRecord<Scalar> &normalized)
    {
        auto bits = [](const CVector<Scalar> &s) {
            const Complex<Scalar> mean = s.mean();
            BitString out(static_cast<std::size_t>(s.size()));
            for (Eigen::Index q = 0; q < s.size(); ++q)
                out[static_cast<std::size_t>(q)] = std::real(s(q) - mean) > 0 ? 1 : 0;
            return out;
        };
        KeyMaterial km{bits(normalized.h_a), bits(normalized.h_b), 0.0};
        std::size_t diff = 0;
        for (std::size_t i = 0; i < km.bits_alice.size(); ++i)
            diff += km.bits_alice[i] != km.bits_bob[i];
        km.kdr = km.bits_alice.empty() ? 0.0 : double(diff) / double(km.bits_alice.size());
        return km;
    }

    inline BitString otp_xor(const BitString &data, const BitString &key)
    {
        if (key.size() < data.size())
            throw ContractViolation("otp_xor: key shorter than data, refusing to reuse key bits");
        BitString out(data.size());
        for (std::size_t i = 0; i < data.size(); ++i)
            out[i] = static_cast<std::uint8_t>((data[i] ^ key[i]) & 1u);
        return out;
    }
}

#endif
