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

#ifndef IRSKEY_HARNESS_CONFIG_HPP
#define IRSKEY_HARNESS_CONFIG_HPP

#include "irskey/allocation.hpp"
#include "irskey/propagation.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irskey::harness
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // All system parameters. Defaults are the reference deployment: 100 m link,
    // surface 5 m off the line and 5 m from Bob, 1 GHz carrier.
    struct ExperimentConfig
    {
        double fc_hz = 1e9;
        double P_dbm = 20.0;
        double noise_dbm = -96.0;
        double delta_t = 1e-3;
        std::int64_t L = 1000;
        std::int64_t q_th = 100;
        int N = 50;
        int B = 3;
        int K = 4;
        double d_ab = 100.0;
        double d1 = 5.0;
        double d2 = 5.0;
        PathLossModel<double> path_loss{};
        double eve_radius = 1.0;
        int trials = 500;
        std::uint64_t seed = 1;
        bool mean_removal = true;
        AllocationMode alloc_mode = AllocationMode::faithful;
        EveCorrelationModel eve_correlation = EveCorrelationModel::j0_squared;

        // compare
        std::vector<std::string> schemes{"random-irs", "fixed-irs", "no-irs"};
        std::vector<double> sweep_P_dbm{0.0, 10.0, 20.0, 30.0};
        std::vector<double> sweep_N{50.0};
        std::vector<double> sweep_B{3.0};
        // allocate
        std::vector<double> sweep_L{500.0, 1000.0, 2000.0};
        std::vector<double> alloc_P_dbm{20.0, 0.0};
        // ppp
        std::vector<double> sweep_lambda_e{0.5, 2.0};
        std::vector<double> sweep_radius{0.1, 1.0};
        std::vector<double> ppp_N{20.0, 40.0, 60.0, 80.0, 100.0};
        int ppp_rounds = 400;

        double wavelength() const { return wavelength_from_carrier(fc_hz); }
        double noise_var(double p_dbm) const { return dbm_to_watt(noise_dbm) / dbm_to_watt(p_dbm); }
        double gamma_b(double p_dbm) const { return dbm_to_watt(p_dbm) / dbm_to_watt(noise_dbm); }
        Geometry<double> geometry() const { return {d_ab, d1, d2, {}}; }

        // Applies one key=value assignment; unknown keys and malformed values raise ConfigError.
        void set(const std::string &key, const std::string &value);

        // Resolved configuration in a stable key order.
        std::vector<std::pair<std::string, std::string>> to_pairs() const;

        void validate() const;
    };

    std::vector<std::string> config_keys();

    // Flat key = value text, '#' starts a comment.
    ExperimentConfig parse_config_text(const std::string &text, ExperimentConfig base = {});
    ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base = {});

    // Shortest round-trip decimal form.
    std::string format_number(double x);
}

#endif
