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

#ifndef IRSKEY_PROPAGATION_HPP
#define IRSKEY_PROPAGATION_HPP

#include "irskey/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace irskey
{
    // Planar deployment. Alice sits at the origin, Bob at (d_ab, 0) and the
    // reflecting surface at (d_ab - d2, d1). Eve positions are relative to Alice.
    template <typename Scalar = double>
    struct Geometry
    {
        Scalar d_ab = Scalar(100);
        Scalar d1 = Scalar(5);
        Scalar d2 = Scalar(5);
        std::vector<Point2<Scalar>> eve_positions;

        Point2<Scalar> alice() const { return {Scalar(0), Scalar(0)}; }
        Point2<Scalar> bob() const { return {d_ab, Scalar(0)}; }
        Point2<Scalar> surface() const { return {d_ab - d2, d1}; }

        Scalar d_ar() const { return std::hypot(d_ab - d2, d1); }
        Scalar d_rb() const { return std::hypot(d2, d1); }

        Scalar d_ae(std::size_t k) const { return eve_positions.at(k).norm(); }
        Scalar d_be(std::size_t k) const { return (eve_positions.at(k) - bob()).norm(); }
        Scalar d_er(std::size_t k) const { return (eve_positions.at(k) - surface()).norm(); }

        void validate() const
        {
            if (!(d_ab > 0) || !(d1 > 0) || !(d2 > 0))
                throw DomainError("Geometry: distances d_ab, d1, d2 must be strictly positive");
            if (!(d2 < d_ab))
                throw DomainError("Geometry: d2 must be smaller than d_ab");
        }
    };

    // Log-distance path loss PL(d) = PL0 + 10 zeta log10(d / d0) with one exponent per link class.
    template <typename Scalar = double>
    struct PathLossModel
    {
        Scalar pl0_db = Scalar(30);
        Scalar d0 = Scalar(1);
        Scalar zeta_ar = Scalar(2.2);
        Scalar zeta_rb = Scalar(2.5);
        Scalar zeta_ab = Scalar(3.5);
        Scalar zeta_er = Scalar(2.2);
        Scalar zeta_eb = Scalar(3.5);

        // Exponents below free-space are legal but unusual; they are reported, not rejected.
        std::vector<std::string> warnings() const
        {
            if (!std::isfinite(pl0_db) || !(d0 > 0))
                throw DomainError("PathLossModel: pl0_db must be finite and d0 positive");
            std::vector<std::string> out;
            const std::pair<const char *, Scalar> exps[] = {{"zeta_ar", zeta_ar}, {"zeta_rb", zeta_rb}, {"zeta_ab", zeta_ab},
                                                            {"zeta_er", zeta_er}, {"zeta_eb", zeta_eb}};
            for (const auto &[name, value] : exps)
                if (value < Scalar(2))
                    out.push_back(std::string(name) + " < 2 (below free-space exponent)");
            return out;
        }
    };

    template <typename Scalar = double>
    Scalar path_loss_db(Scalar d, Scalar zeta, const PathLossModel<Scalar> &model)
    {
        if (!(d > Scalar(0)))
            throw DomainError("path_loss_db: distance must be positive");
        return model.pl0_db + Scalar(10) * zeta * std::log10(d / model.d0);
    }

    // Linear power gain 10^(-PL/10)
    template <typename Scalar = double>
    Scalar path_gain(Scalar d, Scalar zeta, const PathLossModel<Scalar> &model)
    {
        return std::pow(Scalar(10), -path_loss_db(d, zeta, model) / Scalar(10));
    }

    // Amplitude correlation J0(2 pi d / wavelength); its square is the spatial
    // correlation of the combined channels seen at two nodes d apart.
    template <typename Scalar = double>
    Scalar eve_correlation_coefficient(Scalar d, Scalar wavelength)
    {
        if (!(d >= Scalar(0)) || !(wavelength > Scalar(0)))
            throw DomainError("eve_correlation_coefficient: need d >= 0 and wavelength > 0");
        return std::cyl_bessel_j(Scalar(0), two_pi<Scalar> * d / wavelength);
    }

    template <typename Scalar = double>
    Scalar wavelength_from_carrier(Scalar carrier_hz)
    {
        if (!(carrier_hz > 0))
            throw DomainError("carrier frequency must be positive");
        return speed_of_light<Scalar> / carrier_hz;
    }

    // How the spatial correlation enters the Eve coefficients. With j0 the
    // per-coefficient mixing amplitude is J0(2 pi d / wavelength), so the
    // squared combined-channel correlation is J0^2. With j0_squared the mixing
    // amplitude itself is J0^2.
    enum class EveCorrelationModel
    {
        j0,
        j0_squared
    };

    template <typename Scalar = double>
    Scalar eve_mixing_amplitude(Scalar d, Scalar wavelength, EveCorrelationModel model)
    {
        const Scalar c = eve_correlation_coefficient(d, wavelength);
        return model == EveCorrelationModel::j0 ? c : c * c;
    }

    template <typename Scalar = double>
    struct EveChannels
    {
        Complex<Scalar> h_be;  // Bob - Eve direct
        Complex<Scalar> h_ae;  // Alice - Eve direct
        CVector<Scalar> e;     // surface - Eve per element
        Scalar correlation{};  // J0 amplitude coefficient used for mixing
        Scalar sigma_e2{};
        Scalar sigma_be2{};
        Scalar sigma_ae2{};
    };

    // One coherence interval of small-scale fading. A single coefficient per
    // physical link serves both directions, so the uplink and downlink
    // combined channels are identical.
    template <typename Scalar = double>
    struct ChannelSet
    {
        Complex<Scalar> h_ab;
        CVector<Scalar> u;  // Alice - surface per element
        CVector<Scalar> v;  // surface - Bob per element
        std::vector<EveChannels<Scalar>> eves;
        Scalar sigma_ab2{};
        Scalar sigma_u2{};
        Scalar sigma_v2{};

        Eigen::Index elements() const { return u.size(); }

        // u_n v_n, the per-element terms rotated by the surface phases
        CVector<Scalar> cascade() const { return u.cwiseProduct(v); }
    };

    template <typename Scalar, typename Rng>
    CVector<Scalar> complex_gaussian_vector(Rng &rng, Eigen::Index n, Scalar variance)
    {
        CVector<Scalar> out(n);
        for (Eigen::Index i = 0; i < n; ++i)
            out(i) = complex_gaussian(rng, variance);
        return out;
    }

    // Draws h_ab, u, v i.i.d. Rayleigh with link-specific variances. Each Eve's
    // Bob-side direct coefficient and per-element coefficients are Gaussian
    // mixtures with amplitude correlation c (see EveCorrelationModel) against
    // h_ab and u respectively; h_ae is independent.
    template <typename Scalar, typename Rng>
    ChannelSet<Scalar> sample_channel_set(const Geometry<Scalar> &geometry, const PathLossModel<Scalar> &model,
                                          Eigen::Index N, Scalar wavelength, Rng &rng,
                                          EveCorrelationModel correlation = EveCorrelationModel::j0_squared)
    {
        if (N < 1)
            throw DomainError("sample_channel_set: need at least one surface element");
        geometry.validate();

        ChannelSet<Scalar> cs;
        cs.sigma_ab2 = path_gain(geometry.d_ab, model.zeta_ab, model);
        cs.sigma_u2 = path_gain(geometry.d_ar(), model.zeta_ar, model);
        cs.sigma_v2 = path_gain(geometry.d_rb(), model.zeta_rb, model);

        cs.h_ab = complex_gaussian(rng, cs.sigma_ab2);
        cs.u = complex_gaussian_vector(rng, N, cs.sigma_u2);
        cs.v = complex_gaussian_vector(rng, N, cs.sigma_v2);

        const Scalar sigma_ab = std::sqrt(cs.sigma_ab2);
        const Scalar sigma_u = std::sqrt(cs.sigma_u2);

        cs.eves.reserve(geometry.eve_positions.size());
        for (std::size_t k = 0; k < geometry.eve_positions.size(); ++k)
        {
            EveChannels<Scalar> eve;
            const Scalar d_ae = geometry.d_ae(k);
            eve.correlation = eve_mixing_amplitude(d_ae, wavelength, correlation);
            eve.sigma_be2 = path_gain(geometry.d_be(k), model.zeta_eb, model);
            eve.sigma_e2 = path_gain(geometry.d_er(k), model.zeta_er, model);
            // An Eve inside the reference distance sees the reference loss.
            eve.sigma_ae2 = path_gain(std::max(d_ae, model.d0), model.zeta_ab, model);

            const Scalar c = eve.correlation;
            const Scalar residual = std::sqrt(std::max(Scalar(0), Scalar(1) - c * c));
            const Scalar sigma_be = std::sqrt(eve.sigma_be2);
            const Scalar sigma_e = std::sqrt(eve.sigma_e2);

            eve.h_be = c * (sigma_be / sigma_ab) * cs.h_ab + residual * sigma_be * complex_gaussian(rng, Scalar(1));
            eve.h_ae = complex_gaussian(rng, eve.sigma_ae2);
            eve.e.resize(N);
            for (Eigen::Index n = 0; n < N; ++n)
                eve.e(n) = c * (sigma_e / sigma_u) * cs.u(n) + residual * sigma_e * complex_gaussian(rng, Scalar(1));
            cs.eves.push_back(std::move(eve));
        }
        return cs;
    }
}

#endif
