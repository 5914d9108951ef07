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

#include "irskey/harness/experiments.hpp"

#include "irskey/stochgeo.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace irskey::harness
{
    Scheme parse_scheme(const std::string &name)
    {
        if (name == "no-irs")
            return Scheme::no_irs;
        if (name == "fixed-irs")
            return Scheme::fixed_irs;
        if (name == "random-irs")
            return Scheme::random_irs;
        throw ConfigError("unknown scheme '" + name + "'");
    }

    std::string scheme_name(Scheme s)
    {
        switch (s)
        {
        case Scheme::no_irs:
            return "no-irs";
        case Scheme::fixed_irs:
            return "fixed-irs";
        case Scheme::random_irs:
            return "random-irs";
        }
        return "?";
    }

    std::mt19937_64 trial_stream(std::uint64_t seed, std::int64_t trial, Stream stream)
    {
        const auto t = static_cast<std::uint64_t>(trial);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32),
                          static_cast<std::uint32_t>(stream)};
        return std::mt19937_64(seq);
    }

    void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)> &body)
    {
        const std::size_t threads = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
        if (threads <= 1)
        {
            for (std::size_t i = 0; i < count; ++i)
                body(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++)
                {
                    try
                    {
                        body(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                    }
                }
            });
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    namespace
    {
        ChannelSet<double> draw_channels(const ExperimentConfig &config, std::vector<Point2<double>> eves, int N,
                                         std::int64_t trial)
        {
            Geometry<double> geometry = config.geometry();
            geometry.eve_positions = std::move(eves);
            auto rng = trial_stream(config.seed, trial, Stream::channels);
            return sample_channel_set(geometry, config.path_loss, Eigen::Index(N), config.wavelength(), rng,
                                      config.eve_correlation);
        }

        // Static channel: one key sample per coherence interval. The legitimate
        // correlation follows from the realized SNR; an Eve with amplitude
        // correlation c sees the same channel scaled by c, attenuated by both
        // ends' noise.
        TrialOutcome single_sample_outcome(const ExperimentConfig &config, const SchemePoint &point,
                                           const ChannelSet<double> &channels, bool with_surface)
        {
            const double noise = config.noise_var(point.P_dbm);
            const double gamma = config.gamma_b(point.P_dbm);
            const std::optional<int> bits(point.B);

            Complex<double> g = channels.h_ab;
            PhaseConfig<double> fixed;
            if (with_surface)
            {
                fixed = mrt_phase_config(channels, bits);
                g = combined_channel(channels.h_ab, channels.cascade(), fixed);
            }
            const double p_g = std::norm(g);

            TrialOutcome out;
            out.rho_l = p_g / (p_g + noise);
            for (const auto &eve : channels.eves)
            {
                Complex<double> g_be = eve.h_be;
                if (with_surface)
                    g_be = combined_channel(eve.h_be, CVector<double>(eve.e.cwiseProduct(channels.v)), fixed);
                const double p_e = std::norm(g_be);
                const double rho = std::abs(eve.correlation) * std::sqrt(out.rho_l * p_e / (p_e + noise));
                out.rho_e_max = std::max(out.rho_e_max, rho);
            }
            out.r_skg = kgr_or_zero(CorrelationEstimates<double>{out.rho_l, {out.rho_e_max}}, config.delta_t);
            out.r_mrt = with_surface ? mrt_rate(gamma, channels, bits, config.delta_t)
                                     : std::log2(1.0 + gamma * std::norm(channels.h_ab)) / config.delta_t;
            out.q_star = 1;
            out.r_edt = edt_rate(out.r_skg, out.r_mrt, 1, config.L);
            out.c_edt = out.r_edt;
            out.autocorrelation = 1.0;
            return out;
        }

        AllocationParams<double> allocation_params(const ExperimentConfig &config, double P_dbm, int B, std::int64_t L)
        {
            AllocationParams<double> p;
            p.L = L;
            p.q_th = config.q_th;
            p.gamma_b = config.gamma_b(P_dbm);
            p.noise_var = config.noise_var(P_dbm);
            p.delta_t = config.delta_t;
            p.bits = B;
            p.mean_removal = config.mean_removal;
            p.mode = config.alloc_mode;
            return p;
        }

        const std::vector<std::string> outcome_columns = {"r_skg", "r_mrt", "q_star", "r_edt", "c_edt",
                                                          "rho_l", "rho_e_max", "autocorrelation"};

        std::vector<double> outcome_values(const TrialOutcome &o)
        {
            return {o.r_skg, o.r_mrt, o.q_star, o.r_edt, o.c_edt, o.rho_l, o.rho_e_max, o.autocorrelation};
        }

        std::vector<Point2<double>> fixed_count_eves(const ExperimentConfig &config, std::int64_t trial)
        {
            auto rng = trial_stream(config.seed, trial, Stream::eves);
            return sample_disk<double>(static_cast<std::size_t>(config.K), config.eve_radius, rng);
        }
    }

    TrialOutcome run_scheme_trial(const ExperimentConfig &config, const SchemePoint &point, std::int64_t trial)
    {
        const auto channels = draw_channels(config, fixed_count_eves(config, trial), point.N, trial);
        switch (point.scheme)
        {
        case Scheme::no_irs:
            return single_sample_outcome(config, point, channels, false);
        case Scheme::fixed_irs:
            return single_sample_outcome(config, point, channels, true);
        case Scheme::random_irs:
            break;
        }
        auto phase_rng = trial_stream(config.seed, trial, Stream::phases);
        auto noise_rng = trial_stream(config.seed, trial, Stream::noise);
        const auto r = run_algorithm_1(channels, allocation_params(config, point.P_dbm, point.B, config.L), phase_rng,
                                       noise_rng);
        return {r.r_skg, r.r_mrt, double(r.q_star), r.r_edt, r.c_edt, r.rho_l, r.rho_e_max, r.round_autocorrelation};
    }

    RunOutput run_scheme_comparison(const ExperimentConfig &config, int workers)
    {
        config.validate();
        std::vector<SchemePoint> points;
        for (double p : config.sweep_P_dbm)
            for (double n : config.sweep_N)
                for (double b : config.sweep_B)
                    for (const auto &s : config.schemes)
                        points.push_back({parse_scheme(s), p, int(n), int(b)});

        const auto trials = static_cast<std::size_t>(config.trials);
        std::vector<TrialOutcome> results(points.size() * trials);
        parallel_for(results.size(), workers, [&](std::size_t i) {
            results[i] = run_scheme_trial(config, points[i / trials], std::int64_t(i % trials));
        });

        RunOutput run{"compare", config, {}, {}};
        run.table.key_columns = {"scheme", "P_dbm", "N", "B"};
        run.table.value_columns = outcome_columns;
        for (std::size_t i = 0; i < results.size(); ++i)
        {
            const auto &pt = points[i / trials];
            run.table.rows.push_back({{scheme_name(pt.scheme), format_number(pt.P_dbm), std::to_string(pt.N),
                                       std::to_string(pt.B)},
                                      std::int64_t(i % trials),
                                      outcome_values(results[i])});
        }
        return run;
    }

    RunOutput run_allocation_sweep(const ExperimentConfig &config, int workers)
    {
        config.validate();
        struct Point
        {
            std::int64_t L;
            double P_dbm;
        };
        std::vector<Point> points;
        for (double l : config.sweep_L)
            for (double p : config.alloc_P_dbm)
                points.push_back({std::int64_t(l), p});

        const auto trials = static_cast<std::size_t>(config.trials);
        std::vector<AllocationResult<double>> results(points.size() * trials);
        parallel_for(results.size(), workers, [&](std::size_t i) {
            const auto &pt = points[i / trials];
            const auto trial = std::int64_t(i % trials);
            const auto channels = draw_channels(config, fixed_count_eves(config, trial), config.N, trial);
            auto phase_rng = trial_stream(config.seed, trial, Stream::phases);
            auto noise_rng = trial_stream(config.seed, trial, Stream::noise);
            results[i] = run_algorithm_1(channels, allocation_params(config, pt.P_dbm, config.B, pt.L), phase_rng,
                                         noise_rng);
        });

        RunOutput run{"allocate", config, {}, {}};
        run.table.key_columns = {"L", "P_dbm"};
        run.table.value_columns = {"q_star", "q_star_over_L", "r_skg", "r_mrt", "c_edt",
                                   "rho_l", "rho_e_max", "iterations"};
        nlohmann::ordered_json curves = nlohmann::ordered_json::array();
        for (std::size_t p = 0; p < points.size(); ++p)
        {
            const auto &pt = points[p];
            const std::int64_t q_max = max_training_rounds(pt.L);
            std::vector<double> curve(std::size_t(q_max - config.q_th + 1), 0.0);
            double q_star_sum = 0;
            for (std::size_t t = 0; t < trials; ++t)
            {
                const auto &r = results[p * trials + t];
                run.table.rows.push_back({{std::to_string(pt.L), format_number(pt.P_dbm)},
                                          std::int64_t(t),
                                          {double(r.q_star), double(r.q_star) / double(pt.L), r.r_skg, r.r_mrt, r.c_edt,
                                           r.rho_l, r.rho_e_max, double(r.iterations)}});
                q_star_sum += double(r.q_star);
                for (std::int64_t q = config.q_th; q <= q_max; ++q)
                    curve[std::size_t(q - config.q_th)] += edt_rate(r.r_skg, r.r_mrt, q, pt.L);
            }
            std::int64_t argmax = config.q_th;
            for (auto &c : curve)
                c /= double(trials);
            for (std::int64_t q = config.q_th; q <= q_max; ++q)
                if (curve[std::size_t(q - config.q_th)] > curve[std::size_t(argmax - config.q_th)])
                    argmax = q;
            nlohmann::ordered_json entry;
            entry["L"] = pt.L;
            entry["P_dbm"] = pt.P_dbm;
            entry["q_first"] = config.q_th;
            entry["mean_r_edt"] = curve;
            entry["curve_argmax"] = argmax;
            entry["mean_q_star"] = q_star_sum / double(trials);
            entry["mean_q_star_over_L"] = q_star_sum / double(trials) / double(pt.L);
            curves.push_back(std::move(entry));
        }
        run.extras["curves"] = std::move(curves);
        return run;
    }

    PppTheory ppp_theory(const ExperimentConfig &config, int N, double lambda_e, double P_dbm)
    {
        const auto geometry = config.geometry();
        const auto &pl = config.path_loss;
        const double noise = config.noise_var(P_dbm);
        const double s_ab = path_gain(geometry.d_ab, pl.zeta_ab, pl);
        const double s_u = path_gain(geometry.d_ar(), pl.zeta_ar, pl);
        const double s_v = path_gain(geometry.d_rb(), pl.zeta_rb, pl);
        // Eves close to Alice: their links to the surface and to Bob span Alice's distances.
        const double s_e = path_gain(geometry.d_ar(), pl.zeta_er, pl);
        const double s_be = path_gain(geometry.d_ab, pl.zeta_eb, pl);

        double p_ab = double(N) * s_u * s_v;
        double p_be = double(N) * s_e * s_v;
        if (!config.mean_removal)
        {
            p_ab += s_ab;
            p_be += s_be;
        }
        PppTheory t;
        t.rho_l = p_ab / (p_ab + noise);
        t.rho_e_max = rho_e_max(envelope_cross_moment(p_ab, p_be), p_ab, p_be, noise, lambda_e, config.wavelength());
        t.r_skg = kgr_ppp(t.rho_l, t.rho_e_max, config.delta_t);
        return t;
    }

    RunOutput run_ppp_sweep(const ExperimentConfig &config, int workers)
    {
        config.validate();
        struct Point
        {
            double radius;
            double lambda_e;
            int N;
        };
        std::vector<Point> points;
        for (double r : config.sweep_radius)
            for (double l : config.sweep_lambda_e)
                for (double n : config.ppp_N)
                    points.push_back({r, l, int(n)});

        struct Sim
        {
            double n_eves, rho_l, rho_e_max, r_skg;
        };
        const auto trials = static_cast<std::size_t>(config.trials);
        std::vector<Sim> results(points.size() * trials);
        parallel_for(results.size(), workers, [&](std::size_t i) {
            const auto &pt = points[i / trials];
            const auto trial = std::int64_t(i % trials);
            auto eve_rng = trial_stream(config.seed, trial, Stream::eves);
            auto eves = sample_ppp(PppConfig<double>{pt.lambda_e, pt.radius, config.wavelength()}, eve_rng);
            const double n_eves = double(eves.size());
            const auto channels = draw_channels(config, std::move(eves), pt.N, trial);

            auto phase_rng = trial_stream(config.seed, trial, Stream::phases);
            auto noise_rng = trial_stream(config.seed, trial, Stream::noise);
            std::vector<PhaseConfig<double>> configs;
            for (int q = 0; q < config.ppp_rounds; ++q)
                configs.push_back(random_phase_config<double>(pt.N, config.B, phase_rng));
            const auto record =
                observe_rounds<double>(channels, configs, config.noise_var(config.P_dbm), config.delta_t, noise_rng);
            const auto est = estimate_correlations(normalize(record, config.mean_removal));
            results[i] = {n_eves, est.rho_l, est.rho_e_max(), kgr_or_zero(est, config.delta_t)};
        });

        RunOutput run{"ppp", config, {}, {}};
        run.table.key_columns = {"radius", "lambda_e", "N"};
        run.table.value_columns = {"n_eves", "rho_l", "rho_e_max", "r_skg_sim", "r_skg_theory"};
        nlohmann::ordered_json theory = nlohmann::ordered_json::array();
        for (std::size_t p = 0; p < points.size(); ++p)
        {
            const auto &pt = points[p];
            const auto th = ppp_theory(config, pt.N, pt.lambda_e, config.P_dbm);
            for (std::size_t t = 0; t < trials; ++t)
            {
                const auto &s = results[p * trials + t];
                run.table.rows.push_back({{format_number(pt.radius), format_number(pt.lambda_e), std::to_string(pt.N)},
                                          std::int64_t(t),
                                          {s.n_eves, s.rho_l, s.rho_e_max, s.r_skg, th.r_skg}});
            }
            theory.push_back({{"radius", pt.radius},
                              {"lambda_e", pt.lambda_e},
                              {"N", pt.N},
                              {"rho_l", th.rho_l},
                              {"rho_e_max", th.rho_e_max},
                              {"r_skg_theory", th.r_skg}});
        }
        run.extras["theory"] = std::move(theory);
        return run;
    }

    AutocorrelationCheck measure_round_autocorrelation(const ExperimentConfig &config, int intervals,
                                                       int rounds_per_interval, bool noiseless)
    {
        if (intervals < 2 || rounds_per_interval < 2)
            throw ConfigError("autocorrelation: need at least two intervals of two rounds");
        const double noise = noiseless ? 0.0 : config.noise_var(config.P_dbm);
        std::vector<LagSums<double>> sums(static_cast<std::size_t>(intervals));
        ChannelSet<double> first;
        for (int i = 0; i < intervals; ++i)
        {
            const ChannelSet<double> channels = draw_channels(config, {}, config.N, i);
            auto phase_rng = trial_stream(config.seed, i, Stream::phases);
            auto noise_rng = trial_stream(config.seed, i, Stream::noise);
            std::vector<PhaseConfig<double>> configs;
            for (int q = 0; q < rounds_per_interval; ++q)
                configs.push_back(random_phase_config<double>(config.N, config.B, phase_rng));
            const auto rec = observe_rounds<double>(channels, configs, noise, config.delta_t, noise_rng);
            sums[std::size_t(i)] = round_lag_sums<double>(rec.h_a);
            if (i == 0)
                first = channels;
        }
        const auto est = pooled_autocorrelation<double>(sums);
        AutocorrelationCheck out;
        out.predicted = autocorrelation_theoretical(first.sigma_ab2, first.sigma_u2, first.sigma_v2,
                                                    Eigen::Index(config.N), false);
        out.estimate = est.value;
        out.standard_error = est.standard_error;
        out.rounds = std::int64_t(intervals) * rounds_per_interval;
        return out;
    }
}
