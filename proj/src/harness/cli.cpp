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

#include "irskey/harness/cli.hpp"

#include "irskey/harness/experiments.hpp"
#include "irskey/harness/validate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <thread>

namespace irskey::harness
{
    namespace
    {
        struct Options
        {
            std::string config_path;
            std::optional<std::uint64_t> seed;
            std::optional<int> trials;
            std::string out;
            std::string format = "csv";
            std::vector<std::string> sets;
            int workers = 0;
        };

        void add_common(CLI::App *sub, Options &o)
        {
            sub->add_option("--config", o.config_path, "key=value configuration file")->check(CLI::ExistingFile);
            sub->add_option("--seed", o.seed, "master seed");
            sub->add_option("--trials", o.trials, "Monte Carlo trials per sweep point")->check(CLI::PositiveNumber);
            sub->add_option("--out", o.out, "output file (stdout when omitted)");
            sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
            sub->add_option("--set", o.sets, "override one parameter, key=value (repeatable)")->allow_extra_args(false);
            sub->add_option("--workers", o.workers, "worker threads (0: hardware concurrency)")
                ->check(CLI::NonNegativeNumber);
        }

        ExperimentConfig resolve(const Options &o)
        {
            ExperimentConfig c;
            if (!o.config_path.empty())
                c = load_config_file(o.config_path);
            for (const auto &kv : o.sets)
            {
                const auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ConfigError("--set expects key=value, got '" + kv + "'");
                c.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            if (o.seed)
                c.seed = *o.seed;
            if (o.trials)
                c.trials = *o.trials;
            c.validate();
            return c;
        }

        int worker_count(const Options &o)
        {
            if (o.workers > 0)
                return o.workers;
            return int(std::max(1u, std::thread::hardware_concurrency()));
        }

        void write_file(const std::filesystem::path &path, const std::string &text)
        {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw ConfigError("cannot open output file '" + path.string() + "'");
            f << text;
            if (!f)
                throw ConfigError("failed writing '" + path.string() + "'");
        }

        void emit(const RunOutput &run, const Options &o, std::ostream &out)
        {
            if (o.format == "json")
            {
                const std::string text = summary_json(run, true).dump(2) + "\n";
                if (o.out.empty())
                    out << text;
                else
                    write_file(o.out, text);
                return;
            }
            std::ostringstream csv;
            write_csv(csv, run);
            if (o.out.empty())
            {
                out << csv.str();
                return;
            }
            write_file(o.out, csv.str());
            std::filesystem::path side(o.out);
            side.replace_extension(".summary.json");
            write_file(side, summary_json(run, false).dump(2) + "\n");
        }

        int emit_validation(const ValidationReport &report, const Options &o, std::ostream &out)
        {
            std::string text;
            if (o.format == "json")
                text = report.to_json().dump(2) + "\n";
            else
            {
                for (const auto &c : report.checks)
                    text += std::string(c.passed ? "PASS " : "FAIL ") + c.name + ": " + c.detail + "\n";
                text += "passed " + std::to_string(report.passed()) + " of " + std::to_string(report.checks.size()) +
                        ", failed " + std::to_string(report.failed()) + "\n";
            }
            if (o.out.empty())
                out << text;
            else
                write_file(o.out, text);
            return report.failed() == 0 ? 0 : 1;
        }
    }

    int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
    {
        CLI::App app{"Secret key generation with randomly phase-shifted reflecting surfaces", "irskey"};
        app.require_subcommand(1, 1);
        Options o;
        auto *compare = app.add_subcommand("compare", "key/data throughput of no-IRS, fixed-IRS and random-IRS");
        auto *allocate = app.add_subcommand("allocate", "training/transmission slot allocation sweep over L and P");
        auto *ppp = app.add_subcommand("ppp", "key rate with Poisson-distributed eavesdroppers, simulation and theory");
        auto *validate = app.add_subcommand("validate", "run the property suite and report pass/fail counts");
        for (auto *sub : {compare, allocate, ppp, validate})
            add_common(sub, o);

        try
        {
            app.parse(argc, argv);
        }
        catch (const CLI::CallForHelp &e)
        {
            out << app.help();
            return 0;
        }
        catch (const CLI::ParseError &e)
        {
            err << "irskey: " << e.what() << "\n";
            return 2;
        }

        try
        {
            const ExperimentConfig config = resolve(o);
            for (const auto &w : config.path_loss.warnings())
                err << "irskey: warning: " << w << "\n";
            const int workers = worker_count(o);
            if (*validate)
                return emit_validation(run_validation(config, workers), o, out);
            RunOutput run;
            if (*compare)
                run = run_scheme_comparison(config, workers);
            else if (*allocate)
                run = run_allocation_sweep(config, workers);
            else
                run = run_ppp_sweep(config, workers);
            emit(run, o, out);
            return 0;
        }
        catch (const ConfigError &e)
        {
            err << "irskey: configuration error: " << e.what() << "\n";
            return 2;
        }
        catch (const std::domain_error &e)
        {
            err << "irskey: domain error: " << e.what() << "\n";
            return 3;
        }
        catch (const std::invalid_argument &e)
        {
            err << "irskey: contract violation: " << e.what() << "\n";
            return 3;
        }
        catch (const std::exception &e)
        {
            err << "irskey: error: " << e.what() << "\n";
            return 1;
        }
    }
}
