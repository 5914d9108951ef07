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

// Reference computations written independently of the library code.

#ifndef IRSKEY_TESTS_ORACLES_HPP
#define IRSKEY_TESTS_ORACLES_HPP

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle
{
    // J0 by its power series, sum_m (-1)^m (x/2)^(2m) / (m!)^2. Good to ~1e-13 for |x| < 15.
    inline double bessel_j0_series(double x)
    {
        const double q = -(x * x) / 4.0;
        double term = 1.0, sum = 1.0;
        for (int m = 1; m < 80; ++m)
        {
            term *= q / (double(m) * double(m));
            sum += term;
            if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)))
                break;
        }
        return sum;
    }

    // Conditional mutual information for complex Gaussians where only Bob's
    // observation is correlated with Eve: partial correlation given Eve, then
    // -log2(1 - rho^2).
    inline double partial_correlation_mi(double rho_l, double rho_e)
    {
        const double e = rho_e * rho_e;
        const double rc = (rho_l - e) / (1.0 - e);
        return -std::log2(1.0 - rc * rc);
    }

    // Smallest q in [lo, hi] minimizing |q s - (L - 2q) m|.
    inline std::int64_t argmin_gap(double s, double m, std::int64_t L, std::int64_t lo, std::int64_t hi)
    {
        std::int64_t best = lo;
        double best_gap = std::abs(double(lo) * s - double(L - 2 * lo) * m);
        for (std::int64_t q = lo + 1; q <= hi; ++q)
        {
            const double g = std::abs(double(q) * s - double(L - 2 * q) * m);
            if (g < best_gap)
            {
                best = q;
                best_gap = g;
            }
        }
        return best;
    }

    inline double quad(const std::function<double(double)> &f, double a, double b)
    {
        return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
    }

    // Upper-tail probability of Pearson's statistic for equiprobable bins.
    inline double chi_square_p_value(const std::vector<std::int64_t> &counts)
    {
        double total = 0;
        for (auto c : counts)
            total += double(c);
        const double expect = total / double(counts.size());
        double stat = 0;
        for (auto c : counts)
            stat += (double(c) - expect) * (double(c) - expect) / expect;
        boost::math::chi_squared dist(double(counts.size() - 1));
        return boost::math::cdf(boost::math::complement(dist, stat));
    }

    // One-sample Kolmogorov-Smirnov test against a continuous cdf, asymptotic p-value.
    inline double ks_p_value(std::vector<double> x, const std::function<double(double)> &cdf)
    {
        std::sort(x.begin(), x.end());
        const double n = double(x.size());
        double d = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            const double f = cdf(x[i]);
            d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
        }
        const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
        double p = 0;
        for (int k = 1; k < 100; ++k)
            p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
        return std::clamp(p, 0.0, 1.0);
    }

    inline double mean(const std::vector<double> &x)
    {
        double s = 0;
        for (double v : x)
            s += v;
        return s / double(x.size());
    }
}

#endif
