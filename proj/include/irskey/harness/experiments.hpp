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

#ifndef IRSKEY_HARNESS_EXPERIMENTS_HPP
#define IRSKEY_HARNESS_EXPERIMENTS_HPP

#include "irskey/harness/table.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace irskey::harness
{
    enum class Scheme
    {
        no_irs,
        fixed_irs,
        random_irs
    };

    Scheme parse_scheme(const std::string &name);
    std::string scheme_name(Scheme s);

    // Independent generator streams of one Monte Carlo trial. A trial is one
    // coherence interval; the same (seed, trial) reproduces the same draws at
    // every sweep point, so sweep points share common random numbers.
    enum class Stream : std::uint32_t
    {
        channels = 1,
        eves = 2,
        phases = 3,
        noise = 4
    };

    std::mt19937_64 trial_stream(std::uint64_t seed, std::int64_t trial, Stream stream);

    struct TrialOutcome
    {
        double r_skg{};
        double r_mrt{};
        double q_star{};
        double r_edt{};
        double c_edt{};
        double rho_l{};
        double rho_e_max{};
        double autocorrelation{};
    };

    struct SchemePoint
    {
        Scheme scheme = Scheme::random_irs;
        double P_dbm = 20.0;
        int N = 50;
        int B = 3;
    };

    TrialOutcome run_scheme_trial(const ExperimentConfig &config, const SchemePoint &point, std::int64_t trial);

    // Calls body(i) for i in [0, count) on up to `workers` threads. Each index
    // writes only its own slot, so results do not depend on scheduling.
    void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &body);

    RunOutput run_scheme_comparison(const ExperimentConfig &config, int workers = 1);
    RunOutput run_allocation_sweep(const ExperimentConfig &config, int workers = 1);
    RunOutput run_ppp_sweep(const ExperimentConfig &config, int workers = 1);

    // Closed-form key rate for planar PPP eavesdroppers at the given element count and power.
    struct PppTheory
    {
        double rho_l{};
        double rho_e_max{};
        double r_skg{};
    };

    PppTheory ppp_theory(const ExperimentConfig &config, int N, double lambda_e, double P_dbm);

    // Round-to-round correlation of Alice's observations under random phases,
    // pooled over independent coherence intervals, next to its prediction from
    // the path-loss variances.
    struct AutocorrelationCheck
    {
        double predicted{};
        double estimate{};
        double standard_error{};
        std::int64_t rounds{};
    };

    AutocorrelationCheck measure_round_autocorrelation(const ExperimentConfig &config, int intervals,
                                                       int rounds_per_interval, bool noiseless = true);
}

#endif
