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

#ifndef IRSKEY_HARNESS_VALIDATE_HPP
#define IRSKEY_HARNESS_VALIDATE_HPP

#include "irskey/harness/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace irskey::harness
{
    struct CheckResult
    {
        std::string name;
        bool passed = false;
        std::string detail;
    };

    struct ValidationReport
    {
        std::vector<CheckResult> checks;

        int passed() const;
        int failed() const;
        nlohmann::ordered_json to_json() const;
    };

    // Property suite over every module. Monte Carlo checks use the config's
    // seed and geometry; sizes are fixed so the whole run stays in seconds.
    ValidationReport run_validation(const ExperimentConfig &config, int workers = 1);
}

#endif
