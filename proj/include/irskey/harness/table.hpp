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

#ifndef IRSKEY_HARNESS_TABLE_HPP
#define IRSKEY_HARNESS_TABLE_HPP

#include "irskey/harness/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace irskey::harness
{
    // One row per (sweep point, trial). Sweep-point labels are kept as text so
    // that grouping is exact; measured quantities are doubles.
    struct Table
    {
        struct Row
        {
            std::vector<std::string> keys;
            std::int64_t trial{};
            std::vector<double> values;
        };

        std::vector<std::string> key_columns;
        std::vector<std::string> value_columns;
        std::vector<Row> rows;
    };

    struct Aggregate
    {
        std::vector<std::string> keys;
        std::int64_t n{};
        std::vector<double> mean;
        std::vector<double> stddev;
    };

    // Mean and sample standard deviation per sweep point, in first-seen order.
    std::vector<Aggregate> aggregate(const Table &table);

    // Index of a value column; throws std::out_of_range when absent.
    std::size_t value_index(const Table &table, const std::string &column);

    struct RunOutput
    {
        std::string command;
        ExperimentConfig config;
        Table table;
        nlohmann::ordered_json extras = nlohmann::ordered_json::object();
    };

    void write_csv(std::ostream &os, const RunOutput &run);
    nlohmann::ordered_json summary_json(const RunOutput &run, bool include_rows);

    // Parses the CSV written by write_csv back into a table; comment lines are skipped.
    Table read_csv(std::istream &is, std::size_t key_column_count);
}

#endif
