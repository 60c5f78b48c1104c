/*
 * Copyright 2026 The cwtvc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Command-line front end. Kept in the library so tests can drive it
// in-process.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cwtvc/config.h"

namespace cwtvc {

/// `args` excludes the program name. Returns the process exit status;
/// diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --seed flag, else VC_SEED, else the config's seed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const Config& config);

}  // namespace cwtvc
