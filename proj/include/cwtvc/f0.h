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

// F0 preprocessing: unvoiced interpolation, log scale, speaker-level
// z-normalization, and the log-Gaussian baseline transform.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cwtvc/features.h"

namespace cwtvc {

/// Log-F0 statistics over voiced frames (natural log, population std).
struct SpeakerF0Stats {
  double mean = 0.0;
  double std = 1.0;
  std::uint64_t n_voiced = 0;
};

/// Gap-free log-F0 with the voicing of the contour it came from.
struct ContinuousLogF0 {
  std::vector<double> values;
  VoicingMask mask;
};

/// Linear interpolation across interior unvoiced runs; leading and trailing
/// runs hold the nearest voiced value. Voiced frames are returned as is.
std::vector<double> interpolate_unvoiced(std::span<const double> f0_hz);

std::vector<double> to_log(std::span<const double> f0_hz);

/// interpolate_unvoiced followed by to_log.
ContinuousLogF0 continuous_log_f0(std::span<const double> f0_hz);

struct LogF0Utterance {
  std::span<const double> log_f0;
  const VoicingMask* mask;
};

/// Pooled over the voiced frames of every utterance.
SpeakerF0Stats compute_stats(std::span<const LogF0Utterance> corpus);

std::vector<double> normalize(std::span<const double> log_f0, const SpeakerF0Stats& stats);
std::vector<double> denormalize(std::span<const double> norm, const SpeakerF0Stats& stats);

/// Zeroes frames whose mask entry is false.
std::vector<double> reapply_voicing(std::span<const double> f0_hz, const VoicingMask& mask);

/// Log-Gaussian normalized transform; unvoiced frames stay 0.
std::vector<double> lg_convert(std::span<const double> f0_hz, const SpeakerF0Stats& src,
                               const SpeakerF0Stats& tgt);

// Text form: "mean=<f64>", "std=<f64>", "n_voiced=<u64>", '#' comments.
std::string render_f0_stats(const SpeakerF0Stats& stats);
SpeakerF0Stats parse_f0_stats(const std::string& text);
void save_f0_stats(const SpeakerF0Stats& stats, const std::string& path);
SpeakerF0Stats load_f0_stats(const std::string& path);

}  // namespace cwtvc
