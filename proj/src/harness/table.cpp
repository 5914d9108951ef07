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

#include "irskey/harness/table.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace irskey::harness
{
    std::vector<Aggregate> aggregate(const Table &table)
    {
        std::vector<Aggregate> out;
        std::map<std::vector<std::string>, std::size_t> index;
        std::vector<std::vector<const Table::Row *>> members;
        for (const auto &row : table.rows)
        {
            auto [it, inserted] = index.try_emplace(row.keys, out.size());
            if (inserted)
            {
                out.push_back({row.keys, 0, {}, {}});
                members.emplace_back();
            }
            members[it->second].push_back(&row);
        }
        const std::size_t m = table.value_columns.size();
        for (std::size_t g = 0; g < out.size(); ++g)
        {
            auto &agg = out[g];
            const auto &rows = members[g];
            agg.n = static_cast<std::int64_t>(rows.size());
            agg.mean.assign(m, 0.0);
            agg.stddev.assign(m, 0.0);
            for (std::size_t j = 0; j < m; ++j)
            {
                double sum = 0;
                for (const auto *r : rows)
                    sum += r->values[j];
                const double mean = sum / double(rows.size());
                double ss = 0;
                for (const auto *r : rows)
                    ss += (r->values[j] - mean) * (r->values[j] - mean);
                agg.mean[j] = mean;
                agg.stddev[j] = rows.size() > 1 ? std::sqrt(ss / double(rows.size() - 1)) : 0.0;
            }
        }
        return out;
    }

    std::size_t value_index(const Table &table, const std::string &column)
    {
        for (std::size_t j = 0; j < table.value_columns.size(); ++j)
            if (table.value_columns[j] == column)
                return j;
        throw std::out_of_range("no value column '" + column + "'");
    }

    void write_csv(std::ostream &os, const RunOutput &run)
    {
        os << "# irskey " << run.command << "\n";
        for (const auto &[key, value] : run.config.to_pairs())
            os << "# " << key << "=" << value << "\n";
        const auto &t = run.table;
        bool first = true;
        auto cell = [&](const std::string &s) {
            os << (first ? "" : ",") << s;
            first = false;
        };
        for (const auto &c : t.key_columns)
            cell(c);
        cell("trial");
        for (const auto &c : t.value_columns)
            cell(c);
        os << "\n";
        for (const auto &row : t.rows)
        {
            first = true;
            for (const auto &k : row.keys)
                cell(k);
            cell(std::to_string(row.trial));
            for (double v : row.values)
                cell(format_number(v));
            os << "\n";
        }
    }

    nlohmann::ordered_json summary_json(const RunOutput &run, bool include_rows)
    {
        nlohmann::ordered_json j;
        j["command"] = run.command;
        j["seed"] = run.config.seed;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto &[key, value] : run.config.to_pairs())
            cfg[key] = value;
        j["config"] = cfg;
        const auto &t = run.table;
        j["key_columns"] = t.key_columns;
        j["value_columns"] = t.value_columns;

        nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
        for (const auto &a : aggregate(t))
        {
            nlohmann::ordered_json e;
            for (std::size_t i = 0; i < t.key_columns.size(); ++i)
                e["keys"][t.key_columns[i]] = a.keys[i];
            e["n"] = a.n;
            for (std::size_t i = 0; i < t.value_columns.size(); ++i)
            {
                e["mean"][t.value_columns[i]] = a.mean[i];
                e["stddev"][t.value_columns[i]] = a.stddev[i];
            }
            aggs.push_back(std::move(e));
        }
        j["aggregates"] = std::move(aggs);
        j["extras"] = run.extras;
        if (include_rows)
        {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const auto &r : t.rows)
            {
                nlohmann::ordered_json e;
                e["keys"] = r.keys;
                e["trial"] = r.trial;
                e["values"] = r.values;
                rows.push_back(std::move(e));
            }
            j["rows"] = std::move(rows);
        }
        return j;
    }

    Table read_csv(std::istream &is, std::size_t key_column_count)
    {
        Table t;
        std::string line;
        bool header = true;
        while (std::getline(is, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string c;
            while (std::getline(ss, c, ','))
                cells.push_back(c);
            if (cells.size() < key_column_count + 1)
                throw std::runtime_error("read_csv: short row");
            if (header)
            {
                t.key_columns.assign(cells.begin(), cells.begin() + std::ptrdiff_t(key_column_count));
                t.value_columns.assign(cells.begin() + std::ptrdiff_t(key_column_count) + 1, cells.end());
                header = false;
                continue;
            }
            Table::Row r;
            r.keys.assign(cells.begin(), cells.begin() + std::ptrdiff_t(key_column_count));
            r.trial = std::stoll(cells[key_column_count]);
            for (std::size_t i = key_column_count + 1; i < cells.size(); ++i)
                r.values.push_back(std::stod(cells[i]));
            t.rows.push_back(std::move(r));
        }
        return t;
    }
}
