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

// Synthetic two-speaker corpora with known log-F0, voicing and MCEP
// statistics.

#include <cstdint>
#include <utility>
#include <vector>

#include "cwtvc/corpus.h"

namespace cwtvc {

struct SpeakerSynth {
  double logf0_mean = 4.787491742782046;  // ln 120
  double logf0_std = 0.15;
  /// Mean lengths in frames of voiced and unvoiced runs (geometric laws).
  double voiced_run = 40.0;
  double unvoiced_run = 10.0;
  /// Added to every MCEP dimension, and a linear tilt across dimensions.
  double mcep_offset = 0.0;
  double mcep_tilt = 0.0;

  double voiced_fraction() const { return voiced_run / (voiced_run + unvoiced_run); }
};

struct SynthSpec {
  SpeakerSynth x;
  SpeakerSynth y{5.393627546352362, 0.2, 40.0, 10.0, 1.0, 0.5};  // ln 220
  std::size_t utterances = 20;
  std::size_t min_frames = 256;
  std::size_t max_frames = 512;
  std::size_t mcep_dim = kDefaultMcepDim;
  std::size_t ap_dim = 2;
  double frame_period_ms = kDefaultFramePeriodMs;
  std::uint32_t sample_rate_hz = 16000;
  /// Intonation mixture: a short (syllable) and a long (phrase) sinusoid
  /// plus white noise, before per-utterance standardisation.
  double short_period_ms = 200.0;
  double long_period_ms = 2000.0;
  double short_amp = 0.5;
  double long_amp = 1.0;
  double f0_noise = 0.2;
  /// AR(1) coefficient and innovation std of the MCEP residual.
  double mcep_ar = 0.9;
  double mcep_noise = 0.3;

  void validate() const;
};

/// Utterances of one speaker, ids "<prefix>_0001", ... The voiced log-F0 of
/// every utterance has exactly mean logf0_mean and std logf0_std.
std::vector<NamedUtterance> synthesize_speaker(const SynthSpec& spec, const SpeakerSynth& speaker,
                                               const std::string& prefix, std::uint64_t seed);

/// Raw utterances for both speakers ("x_*", "y_*").
std::pair<std::vector<NamedUtterance>, std::vector<NamedUtterance>> synthesize_corpus(const SynthSpec& spec,
                                                                                     std::uint64_t seed);

std::pair<SpeakerCorpus, SpeakerCorpus> make_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed);

}  // namespace cwtvc
