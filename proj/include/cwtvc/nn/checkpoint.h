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

// VCM1 parameter checkpoints. Little-endian:
//   "VCM1" | u32 version | u32 n_params |
//   per parameter: u16 name length | name | u8 rank | u32 extents[rank] | f64 data

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cwtvc/nn/networks.h"

namespace cwtvc::nn {

inline constexpr std::uint32_t kVcmVersion = 1;

std::string encode_checkpoint(const std::vector<Parameter>& params);
/// Throws cwtvc::FormatError.
std::vector<Parameter> decode_checkpoint(std::string_view bytes);

void save_checkpoint(const Network& net, const std::string& path);
/// Replaces the network's parameter values. Names and shapes must match
/// the network exactly.
void load_checkpoint(Network& net, const std::string& path);
void assign_parameters(Network& net, const std::vector<Parameter>& loaded);

}  // namespace cwtvc::nn
