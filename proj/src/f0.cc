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

#include "cwtvc/f0.h"

#include <cmath>
#include <optional>

#include "cwtvc/kv_text.h"

namespace cwtvc {

std::vector<double> interpolate_unvoiced(std::span<const double> f0_hz) {
  const std::size_t n = f0_hz.size();
  std::vector<double> out(f0_hz.begin(), f0_hz.end());
  std::optional<std::size_t> prev;  // last voiced index seen
  for (std::size_t t = 0; t < n; ++t) {
    if (!(f0_hz[t] > 0.0)) continue;
    if (!prev) {
      for (std::size_t k = 0; k < t; ++k) out[k] = f0_hz[t];
    } else if (t - *prev > 1) {
      const double a = f0_hz[*prev];
      const double b = f0_hz[t];
      const double span = static_cast<double>(t - *prev);
      for (std::size_t k = *prev + 1; k < t; ++k)
        out[k] = a + (b - a) * static_cast<double>(k - *prev) / span;
    }
    prev = t;
  }
  if (!prev) throw InvalidArgument("interpolate_unvoiced: contour has no voiced frame");
  for (std::size_t k = *prev + 1; k < n; ++k) out[k] = f0_hz[*prev];
  return out;
}

std::vector<double> to_log(std::span<const double> f0_hz) {
  std::vector<double> out(f0_hz.size());
  for (std::size_t t = 0; t < f0_hz.size(); ++t) {
    if (!(f0_hz[t] > 0.0) || !std::isfinite(f0_hz[t]))
      throw InvalidArgument("to_log: non-positive value at frame " + std::to_string(t));
    out[t] = std::log(f0_hz[t]);
  }
  return out;
}

ContinuousLogF0 continuous_log_f0(std::span<const double> f0_hz) {
  std::vector<double> f0(f0_hz.begin(), f0_hz.end());
  return {to_log(interpolate_unvoiced(f0_hz)), voicing_of(f0)};
}

SpeakerF0Stats compute_stats(std::span<const LogF0Utterance> corpus) {
  std::uint64_t n = 0;
  double sum = 0.0;
  for (const auto& u : corpus) {
    if (u.mask == nullptr || u.mask->size() != u.log_f0.size())
      throw InvalidArgument("compute_stats: mask length differs from contour");
    for (std::size_t t = 0; t < u.log_f0.size(); ++t)
      if (u.mask->voiced[t]) {
        sum += u.log_f0[t];
        ++n;
      }
  }
  if (n < 2) throw InvalidArgument("compute_stats: fewer than 2 voiced frames");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& u : corpus)
    for (std::size_t t = 0; t < u.log_f0.size(); ++t)
      if (u.mask->voiced[t]) {
        const double d = u.log_f0[t] - mean;
        ss += d * d;
      }
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (!(sd > 0.0)) throw InvalidArgument("compute_stats: zero variance over voiced frames");
  return {mean, sd, n};
}

namespace {

void require_positive_std(const SpeakerF0Stats& s, const char* who) {
  if (!(s.std > 0.0) || !std::isfinite(s.std) || !std::isfinite(s.mean))
    throw InvalidArgument(std::string(who) + ": stats need finite mean and positive std");
}

}  // namespace

std::vector<double> normalize(std::span<const double> log_f0, const SpeakerF0Stats& stats) {
  require_positive_std(stats, "normalize");
  std::vector<double> out(log_f0.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = (log_f0[t] - stats.mean) / stats.std;
  return out;
}

std::vector<double> denormalize(std::span<const double> norm, const SpeakerF0Stats& stats) {
  require_positive_std(stats, "denormalize");
  std::vector<double> out(norm.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = norm[t] * stats.std + stats.mean;
  return out;
}

std::vector<double> reapply_voicing(std::span<const double> f0_hz, const VoicingMask& mask) {
  if (mask.size() != f0_hz.size()) throw InvalidArgument("reapply_voicing: length mismatch");
  std::vector<double> out(f0_hz.size());
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = mask.voiced[t] ? f0_hz[t] : 0.0;
  return out;
}

std::vector<double> lg_convert(std::span<const double> f0_hz, const SpeakerF0Stats& src,
                               const SpeakerF0Stats& tgt) {
  require_positive_std(src, "lg_convert");
  require_positive_std(tgt, "lg_convert");
  std::vector<double> out(f0_hz.size(), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    if (!(f0_hz[t] > 0.0)) continue;
    const double z = (std::log(f0_hz[t]) - src.mean) / src.std;
    out[t] = std::exp(z * tgt.std + tgt.mean);
  }
  return out;
}

std::string render_f0_stats(const SpeakerF0Stats& stats) {
  return "# speaker log-F0 statistics (natural log, voiced frames)\n"
         "mean=" + format_double(stats.mean) + "\nstd=" + format_double(stats.std) +
         "\nn_voiced=" + std::to_string(stats.n_voiced) + "\n";
}

SpeakerF0Stats parse_f0_stats(const std::string& text) {
  SpeakerF0Stats s;
  bool have_mean = false, have_std = false;
  for (const auto& kv : parse_key_values(text)) {
    if (kv.key == "mean") {
      s.mean = parse_double(kv.key, kv.value);
      have_mean = true;
    } else if (kv.key == "std") {
      s.std = parse_double(kv.key, kv.value);
      have_std = true;
    } else if (kv.key == "n_voiced") {
      s.n_voiced = parse_uint(kv.key, kv.value);
    } else {
      throw InvalidArgument("stats: unknown key '" + kv.key + "'");
    }
  }
  if (!have_mean || !have_std) throw InvalidArgument("stats: mean and std are required");
  require_positive_std(s, "stats");
  return s;
}

void save_f0_stats(const SpeakerF0Stats& stats, const std::string& path) {
  write_text_file(path, render_f0_stats(stats));
}

SpeakerF0Stats load_f0_stats(const std::string& path) { return parse_f0_stats(read_text_file(path)); }

}  // namespace cwtvc
