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

#include "irskey/harness/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irskey::harness
{
    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r\n");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r\n");
            return s.substr(b, e - b + 1);
        }

        double parse_double(const std::string &key, const std::string &v)
        {
            const std::string t = trim(v);
            double out = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
            return out;
        }

        template <typename Int>
        Int parse_int(const std::string &key, const std::string &v)
        {
            const std::string t = trim(v);
            Int out = 0;
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
            if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
                throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
            return out;
        }

        bool parse_bool(const std::string &key, const std::string &v)
        {
            const std::string t = trim(v);
            if (t == "true" || t == "1" || t == "on" || t == "yes")
                return true;
            if (t == "false" || t == "0" || t == "off" || t == "no")
                return false;
            throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
        }

        // Empty items are an error, a single trailing comma is tolerated.
        std::vector<std::string> split_list(const std::string &key, const std::string &v)
        {
            std::vector<std::string> out;
            std::string body = trim(v);
            if (!body.empty() && body.back() == ',')
                body.pop_back();
            if (trim(body).empty())
                return out;
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ','))
            {
                item = trim(item);
                if (item.empty())
                    throw ConfigError("config key '" + key + "': empty list item in '" + v + "'");
                out.push_back(item);
            }
            if (body.back() == ',')
                throw ConfigError("config key '" + key + "': empty list item in '" + v + "'");
            return out;
        }

        std::vector<double> parse_list(const std::string &key, const std::string &v)
        {
            std::vector<double> out;
            for (const auto &item : split_list(key, v))
                out.push_back(parse_double(key, item));
            if (out.empty())
                throw ConfigError("config key '" + key + "': empty list");
            return out;
        }

        std::string join(const std::vector<double> &xs)
        {
            std::string out;
            for (std::size_t i = 0; i < xs.size(); ++i)
                out += (i ? "," : "") + format_number(xs[i]);
            return out;
        }

        std::string join(const std::vector<std::string> &xs)
        {
            std::string out;
            for (std::size_t i = 0; i < xs.size(); ++i)
                out += (i ? "," : "") + xs[i];
            return out;
        }

        struct Field
        {
            std::function<void(ExperimentConfig &, const std::string &, const std::string &)> set;
            std::function<std::string(const ExperimentConfig &)> get;
        };

        template <typename T>
        Field number_field(T ExperimentConfig::*member)
        {
            return {[member](ExperimentConfig &c, const std::string &k, const std::string &v) {
                        if constexpr (std::is_floating_point_v<T>)
                            c.*member = parse_double(k, v);
                        else
                            c.*member = parse_int<T>(k, v);
                    },
                    [member](const ExperimentConfig &c) {
                        if constexpr (std::is_floating_point_v<T>)
                            return format_number(c.*member);
                        else
                            return std::to_string(c.*member);
                    }};
        }

        Field path_loss_field(double PathLossModel<double>::*member)
        {
            return {[member](ExperimentConfig &c, const std::string &k, const std::string &v) { c.path_loss.*member = parse_double(k, v); },
                    [member](const ExperimentConfig &c) { return format_number(c.path_loss.*member); }};
        }

        Field list_field(std::vector<double> ExperimentConfig::*member)
        {
            return {[member](ExperimentConfig &c, const std::string &k, const std::string &v) { c.*member = parse_list(k, v); },
                    [member](const ExperimentConfig &c) { return join(c.*member); }};
        }

        // Ordered so that emitted configurations are stable.
        const std::vector<std::pair<std::string, Field>> &registry()
        {
            static const std::vector<std::pair<std::string, Field>> fields = {
                {"fc_hz", number_field(&ExperimentConfig::fc_hz)},
                {"P_dbm", number_field(&ExperimentConfig::P_dbm)},
                {"noise_dbm", number_field(&ExperimentConfig::noise_dbm)},
                {"delta_t", number_field(&ExperimentConfig::delta_t)},
                {"L", number_field(&ExperimentConfig::L)},
                {"q_th", number_field(&ExperimentConfig::q_th)},
                {"N", number_field(&ExperimentConfig::N)},
                {"B", number_field(&ExperimentConfig::B)},
                {"K", number_field(&ExperimentConfig::K)},
                {"d_ab", number_field(&ExperimentConfig::d_ab)},
                {"d1", number_field(&ExperimentConfig::d1)},
                {"d2", number_field(&ExperimentConfig::d2)},
                {"pl0_db", path_loss_field(&PathLossModel<double>::pl0_db)},
                {"d0", path_loss_field(&PathLossModel<double>::d0)},
                {"zeta_ar", path_loss_field(&PathLossModel<double>::zeta_ar)},
                {"zeta_rb", path_loss_field(&PathLossModel<double>::zeta_rb)},
                {"zeta_ab", path_loss_field(&PathLossModel<double>::zeta_ab)},
                {"zeta_er", path_loss_field(&PathLossModel<double>::zeta_er)},
                {"zeta_eb", path_loss_field(&PathLossModel<double>::zeta_eb)},
                {"eve_radius", number_field(&ExperimentConfig::eve_radius)},
                {"trials", number_field(&ExperimentConfig::trials)},
                {"seed", number_field(&ExperimentConfig::seed)},
                {"mean_removal",
                 {[](ExperimentConfig &c, const std::string &k, const std::string &v) { c.mean_removal = parse_bool(k, v); },
                  [](const ExperimentConfig &c) { return std::string(c.mean_removal ? "true" : "false"); }}},
                {"alloc_mode",
                 {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                      const std::string t = trim(v);
                      if (t == "faithful")
                          c.alloc_mode = AllocationMode::faithful;
                      else if (t == "fast")
                          c.alloc_mode = AllocationMode::fast;
                      else
                          throw ConfigError("config key '" + k + "': expected faithful or fast, got '" + v + "'");
                  },
                  [](const ExperimentConfig &c) {
                      return std::string(c.alloc_mode == AllocationMode::fast ? "fast" : "faithful");
                  }}},
                {"eve_correlation",
                 {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                      const std::string t = trim(v);
                      if (t == "j0")
                          c.eve_correlation = EveCorrelationModel::j0;
                      else if (t == "j0_squared")
                          c.eve_correlation = EveCorrelationModel::j0_squared;
                      else
                          throw ConfigError("config key '" + k + "': expected j0 or j0_squared, got '" + v + "'");
                  },
                  [](const ExperimentConfig &c) {
                      return std::string(c.eve_correlation == EveCorrelationModel::j0 ? "j0" : "j0_squared");
                  }}},
                {"schemes",
                 {[](ExperimentConfig &c, const std::string &k, const std::string &v) {
                      auto names = split_list(k, v);
                      if (names.empty())
                          throw ConfigError("config key '" + k + "': empty list");
                      for (const auto &n : names)
                          if (n != "random-irs" && n != "fixed-irs" && n != "no-irs")
                              throw ConfigError("config key '" + k + "': unknown scheme '" + n + "'");
                      c.schemes = names;
                  },
                  [](const ExperimentConfig &c) { return join(c.schemes); }}},
                {"sweep_P_dbm", list_field(&ExperimentConfig::sweep_P_dbm)},
                {"sweep_N", list_field(&ExperimentConfig::sweep_N)},
                {"sweep_B", list_field(&ExperimentConfig::sweep_B)},
                {"sweep_L", list_field(&ExperimentConfig::sweep_L)},
                {"alloc_P_dbm", list_field(&ExperimentConfig::alloc_P_dbm)},
                {"sweep_lambda_e", list_field(&ExperimentConfig::sweep_lambda_e)},
                {"sweep_radius", list_field(&ExperimentConfig::sweep_radius)},
                {"ppp_N", list_field(&ExperimentConfig::ppp_N)},
                {"ppp_rounds", number_field(&ExperimentConfig::ppp_rounds)},
            };
            return fields;
        }
    }

    std::string format_number(double x)
    {
        // Shortest text that parses back to the same double.
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        return std::string(buf, res.ptr);
    }

    void ExperimentConfig::set(const std::string &key, const std::string &value)
    {
        for (const auto &[name, field] : registry())
            if (name == key)
            {
                field.set(*this, key, value);
                return;
            }
        throw ConfigError("unknown config key '" + key + "'");
    }

    std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_pairs() const
    {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto &[name, field] : registry())
            out.emplace_back(name, field.get(*this));
        return out;
    }

    std::vector<std::string> config_keys()
    {
        std::vector<std::string> out;
        for (const auto &entry : registry())
            out.push_back(entry.first);
        return out;
    }

    void ExperimentConfig::validate() const
    {
        auto require = [](bool ok, const char *key, const char *what) {
            if (!ok)
                throw ConfigError(std::string("config key '") + key + "': " + what);
        };
        require(fc_hz > 0, "fc_hz", "must be positive");
        require(delta_t > 0, "delta_t", "must be positive");
        require(q_th >= 1, "q_th", "must be at least 1");
        require(L >= 2 * q_th + 1, "L", "must be at least 2 q_th + 1");
        require(N >= 1, "N", "must be at least 1");
        require(B >= 1 && B <= max_phase_bits, "B", "must be between 1 and 16");
        require(K >= 0, "K", "must be non-negative");
        require(d_ab > 0 && d1 > 0 && d2 > 0 && d2 < d_ab, "d_ab", "geometry needs 0 < d2 < d_ab and d1 > 0");
        require(eve_radius > 0, "eve_radius", "must be positive");
        require(trials >= 1, "trials", "must be at least 1");
        require(ppp_rounds >= 2, "ppp_rounds", "must be at least 2");
        for (double n : sweep_N)
            require(n >= 1 && n == std::floor(n), "sweep_N", "entries must be positive integers");
        for (double b : sweep_B)
            require(b >= 1 && b <= max_phase_bits && b == std::floor(b), "sweep_B", "entries must be integers in [1, 16]");
        for (double l : sweep_L)
            require(l == std::floor(l) && l >= 2.0 * double(q_th) + 1, "sweep_L", "entries must be integers >= 2 q_th + 1");
        for (double n : ppp_N)
            require(n >= 1 && n == std::floor(n), "ppp_N", "entries must be positive integers");
        for (double x : sweep_lambda_e)
            require(x > 0, "sweep_lambda_e", "entries must be positive");
        for (double x : sweep_radius)
            require(x > 0, "sweep_radius", "entries must be positive");
        path_loss.warnings();
    }

    ExperimentConfig parse_config_text(const std::string &text, ExperimentConfig base)
    {
        std::stringstream ss(text);
        std::string line;
        int lineno = 0;
        while (std::getline(ss, line))
        {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value, got '" + line + "'");
            base.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return base;
    }

    ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config_text(buf.str(), std::move(base));
    }
}
