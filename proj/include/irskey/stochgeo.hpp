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

#ifndef IRSKEY_STOCHGEO_HPP
#define IRSKEY_STOCHGEO_HPP

#include "irskey/keygen.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace irskey
{
    // Homogeneous Poisson field of eavesdroppers restricted to a disk around Alice.
    template <typename Scalar = double>
    struct PppConfig
    {
        Scalar lambda_e = Scalar(1);  // Eves per m^2
        Scalar radius = Scalar(1);    // m
        Scalar wavelength = speed_of_light<Scalar> / Scalar(1e9);

        void validate() const
        {
            if (!(lambda_e > 0) || !(radius > 0) || !(wavelength > 0))
                throw DomainError("PppConfig: intensity, radius and wavelength must be positive");
        }
    };

    // Density of the distance to the k-th nearest point of a planar PPP:
    //   f(d) = exp(-lambda pi d^2) 2 (lambda pi)^k d^(2k-1) / Gamma(k)
    template <typename Scalar = double>
    Scalar nearest_eve_pdf(int k, Scalar d, Scalar lambda_e)
    {
        if (k < 1 || !(d >= 0) || !(lambda_e > 0))
            throw DomainError("nearest_eve_pdf: need k >= 1, d >= 0, lambda_e > 0");
        if (d == Scalar(0))
            return Scalar(0);
        const Scalar lp = lambda_e * std::numbers::pi_v<Scalar>;
        const Scalar log_f = -lp * d * d + Scalar(k) * std::log(lp) + Scalar(2 * k - 1) * std::log(d) - std::lgamma(Scalar(k));
        return Scalar(2) * std::exp(log_f);
    }

    template <typename Scalar = double>
    Scalar expected_min_distance(Scalar lambda_e)
    {
        if (!(lambda_e > 0))
            throw DomainError("expected_min_distance: lambda_e must be positive");
        return std::sqrt(Scalar(1) / (Scalar(4) * lambda_e));
    }

    // Point count ~ Poisson(lambda pi R^2), positions uniform on the disk.
    template <typename Scalar, typename Rng>
    std::vector<Point2<Scalar>> sample_ppp(const PppConfig<Scalar> &config, Rng &rng)
    {
        config.validate();
        const Scalar mean = config.lambda_e * std::numbers::pi_v<Scalar> * config.radius * config.radius;
        std::poisson_distribution<long> count(static_cast<double>(mean));
        std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
        const long n = count(rng);
        std::vector<Point2<Scalar>> pts;
        pts.reserve(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i)
        {
            const Scalar r = config.radius * std::sqrt(unit(rng));
            const Scalar phi = two_pi<Scalar> * unit(rng);
            pts.emplace_back(r * std::cos(phi), r * std::sin(phi));
        }
        return pts;
    }

    // Uniform points on a disk, fixed count
    template <typename Scalar, typename Rng>
    std::vector<Point2<Scalar>> sample_disk(std::size_t n, Scalar radius, Rng &rng)
    {
        std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
        std::vector<Point2<Scalar>> pts;
        pts.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            const Scalar r = radius * std::sqrt(unit(rng));
            const Scalar phi = two_pi<Scalar> * unit(rng);
            pts.emplace_back(r * std::cos(phi), r * std::sin(phi));
        }
        return pts;
    }

    // Combined-channel spatial correlation [J0(2 pi d / wavelength)]^2
    template <typename Scalar = double>
    Scalar spatial_correlation(Scalar d, Scalar wavelength)
    {
        const Scalar c = eve_correlation_coefficient(d, wavelength);
        return c * c;
    }

    // E{|x||y|} for independent circular Gaussians with powers p_x, p_y.
    template <typename Scalar = double>
    Scalar envelope_cross_moment(Scalar p_x, Scalar p_y)
    {
        return std::numbers::pi_v<Scalar> / Scalar(4) * std::sqrt(p_x * p_y);
    }

    // Worst-case eavesdropper correlation with the nearest Eve placed at the
    // expected minimum distance sqrt(1 / (4 lambda_e)).
    template <typename Scalar = double>
    Scalar rho_e_max(Scalar exp_abs_cross, Scalar exp_g_ab2, Scalar exp_g_be2, Scalar noise_var, Scalar lambda_e,
                     Scalar wavelength)
    {
        if (!(exp_g_ab2 > 0) || !(exp_g_be2 > 0) || !(noise_var >= 0) || !(exp_abs_cross >= 0))
            throw DomainError("rho_e_max: powers must be positive and noise non-negative");
        const Scalar tilde = spatial_correlation(expected_min_distance(lambda_e), wavelength);
        const Scalar rho = exp_abs_cross * tilde / (std::sqrt(exp_g_ab2 + noise_var) * std::sqrt(exp_g_be2 + noise_var));
        if (!(rho >= 0) || rho > 1)
            throw DomainError("rho_e_max: result outside [0, 1], inconsistent moments");
        return rho;
    }

    template <typename Scalar = double>
    Scalar kgr_ppp(Scalar rho_l, Scalar rho_e_max_value, Scalar delta_t)
    {
        return kgr_closed_form(rho_l, rho_e_max_value, delta_t);
    }
}

#endif
