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

#ifndef IRSKEY_IRS_HPP
#define IRSKEY_IRS_HPP

#include "irskey/propagation.hpp"

#include <optional>
#include <random>

namespace irskey
{
    // Phase shifts for one round. With bits set, every angle lies on the grid
    // {2 pi m / 2^bits}; without, the phases are continuous.
    template <typename Scalar = double>
    struct PhaseConfig
    {
        RVector<Scalar> theta;
        std::optional<int> bits;

        Eigen::Index size() const { return theta.size(); }

        CVector<Scalar> phasors() const
        {
            CVector<Scalar> out(theta.size());
            for (Eigen::Index n = 0; n < theta.size(); ++n)
                out(n) = std::polar(Scalar(1), theta(n));
            return out;
        }
    };

    constexpr int max_phase_bits = 16;

    template <typename Scalar = double>
    Scalar grid_angle(int index, int bits)
    {
        return two_pi<Scalar> * Scalar(index) / Scalar(1 << bits);
    }

    // True when angle is exactly one of the grid points for `bits`.
    template <typename Scalar = double>
    bool on_phase_grid(Scalar angle, int bits)
    {
        const int levels = 1 << bits;
        const auto m = static_cast<long>(std::llround(angle / two_pi<Scalar> * Scalar(levels)));
        return m >= 0 && m < levels && grid_angle<Scalar>(static_cast<int>(m), bits) == angle;
    }

    inline void check_bits(int bits)
    {
        if (bits < 1 || bits > max_phase_bits)
            throw DomainError("phase resolution must be between 1 and 16 bits");
    }

    template <typename Scalar, typename Rng>
    PhaseConfig<Scalar> random_phase_config(Eigen::Index N, int bits, Rng &rng)
    {
        if (N < 1)
            throw DomainError("random_phase_config: need at least one element");
        check_bits(bits);
        std::uniform_int_distribution<int> index(0, (1 << bits) - 1);
        PhaseConfig<Scalar> cfg{RVector<Scalar>(N), bits};
        for (Eigen::Index n = 0; n < N; ++n)
            cfg.theta(n) = grid_angle<Scalar>(index(rng), bits);
        return cfg;
    }

    // Nearest grid point; exact half-way cases go to the smaller index.
    template <typename Scalar = double>
    Scalar quantize_phase(Scalar angle, int bits)
    {
        check_bits(bits);
        const int levels = 1 << bits;
        Scalar wrapped = std::fmod(angle, two_pi<Scalar>);
        if (wrapped < 0)
            wrapped += two_pi<Scalar>;
        const Scalar steps = wrapped / two_pi<Scalar> * Scalar(levels);
        auto m = static_cast<int>(std::ceil(steps - Scalar(0.5)));
        if (m >= levels)
            m -= levels;
        return grid_angle<Scalar>(m, bits);
    }

    // Aligns every cascade term with the direct path: theta_n = arg(h_ab) - arg(u_n v_n).
    // A vanishing direct path aligns to the zero-phase reference.
    template <typename Scalar = double>
    PhaseConfig<Scalar> mrt_phase_config(const ChannelSet<Scalar> &channels, std::optional<int> bits)
    {
        const Eigen::Index N = channels.elements();
        if (N < 1)
            throw DomainError("mrt_phase_config: need at least one element");
        const Scalar reference = channels.h_ab == Complex<Scalar>{} ? Scalar(0) : std::arg(channels.h_ab);
        PhaseConfig<Scalar> cfg{RVector<Scalar>(N), bits};
        for (Eigen::Index n = 0; n < N; ++n)
        {
            Scalar angle = std::fmod(reference - std::arg(channels.u(n) * channels.v(n)), two_pi<Scalar>);
            if (angle < 0)
                angle += two_pi<Scalar>;
            cfg.theta(n) = bits ? quantize_phase(angle, *bits) : angle;
        }
        return cfg;
    }

    // g = direct + sum_n cascade_n e^{j theta_n}
    template <typename Scalar = double>
    Complex<Scalar> combined_channel(const Complex<Scalar> &direct, const CVector<Scalar> &cascade,
                                     const PhaseConfig<Scalar> &config)
    {
        if (cascade.size() != config.size())
            throw ContractViolation("combined_channel: cascade and phase configuration lengths differ");
        Complex<Scalar> g = direct;
        for (Eigen::Index n = 0; n < cascade.size(); ++n)
            g += cascade(n) * std::polar(Scalar(1), config.theta(n));
        return g;
    }
}

#endif
