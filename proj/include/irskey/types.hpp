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

#ifndef IRSKEY_TYPES_HPP
#define IRSKEY_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace irskey
{
    template <typename Scalar>
    using Complex = std::complex<Scalar>;

    // Column vectors of complex channel coefficients or observations
    template <typename Scalar>
    using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    template <typename Scalar>
    using Point2 = Eigen::Matrix<Scalar, 2, 1>;

    // Thrown when an input lies outside the mathematical domain of an operation
    class DomainError : public std::domain_error
    {
    public:
        using std::domain_error::domain_error;
    };

    // Thrown on caller contract violations (size mismatches, empty inputs)
    class ContractViolation : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    template <typename Scalar>
    inline constexpr Scalar speed_of_light = Scalar(299792458.0);

    template <typename Scalar>
    inline constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    // Draws a circularly-symmetric complex Gaussian with E|z|^2 = variance
    template <typename Scalar, typename Rng>
    Complex<Scalar> complex_gaussian(Rng &rng, Scalar variance)
    {
        if (variance <= Scalar(0))
            return {};
        std::normal_distribution<Scalar> normal(Scalar(0), std::sqrt(variance / Scalar(2)));
        const Scalar re = normal(rng);
        const Scalar im = normal(rng);
        return {re, im};
    }
}

#endif
