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

// Flat key=value configuration covering the trainer, both architectures,
// the synthetic corpus and pipeline switches.

#include <cstdint>
#include <string>
#include <vector>

#include "cwtvc/cyclegan.h"
#include "cwtvc/nn/networks.h"
#include "cwtvc/synth.h"

namespace cwtvc {

struct Config {
  GanHyper hyper;
  /// Channel counts are taken from the feature kind, not from here.
  nn::GenConfig gen;
  nn::DiscConfig disc;
  SynthSpec synth;
  bool per_utterance_norm = false;
  std::int64_t log_every = 1;
  std::int64_t checkpoint_every = 0;

  void validate() const;
};

/// Unknown keys, duplicate keys and malformed values throw InvalidArgument
/// naming the key. Missing keys keep their defaults.
Config parse_config(const std::string& text);
/// Every key, one per line, in a fixed order; parse_config inverts it.
std::string render_config(const Config& c);

std::vector<std::string> config_keys();

Config load_config(const std::string& path);

}  // namespace cwtvc
