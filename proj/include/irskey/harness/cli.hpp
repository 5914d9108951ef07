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

#ifndef IRSKEY_HARNESS_CLI_HPP
#define IRSKEY_HARNESS_CLI_HPP

#include <iostream>

namespace irskey::harness
{
    // Exit codes: 0 success, 1 failed validation checks, 2 usage or configuration
    // error, 3 domain error raised by the model.
    int cli_main(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr);
}

#endif
