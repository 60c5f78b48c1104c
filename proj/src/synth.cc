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

#include "cwtvc/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "cwtvc/nn/networks.h"

namespace cwtvc {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("SynthSpec: " + what);
}

void check_speaker(const SpeakerSynth& s, const char* who) {
  const std::string w(who);
  require(std::isfinite(s.logf0_mean), w + ".logf0_mean must be finite");
  require(s.logf0_std > 0.0 && std::isfinite(s.logf0_std), w + ".logf0_std must be positive");
  require(s.voiced_run >= 1.0, w + ".voiced_run must be >= 1");
  require(s.unvoiced_run >= 1.0, w + ".unvoiced_run must be >= 1");
  require(std::isfinite(s.mcep_offset) && std::isfinite(s.mcep_tilt), w + " MCEP offset and tilt must be finite");
}

// Voiced/unvoiced runs with geometric lengths, started from the
// stationary distribution.
std::vector<bool> voicing_runs(std::size_t t, const SpeakerSynth& s, std::mt19937_64& rng) {
  std::bernoulli_distribution start(s.voiced_fraction());
  std::bernoulli_distribution end_voiced(1.0 / s.voiced_run);
  std::bernoulli_distribution end_unvoiced(1.0 / s.unvoiced_run);
  std::vector<bool> v(t);
  bool state = start(rng);
  for (std::size_t i = 0; i < t; ++i) {
    v[i] = state;
    if (state ? end_voiced(rng) : end_unvoiced(rng)) state = !state;
  }
  return v;
}

}  // namespace

void SynthSpec::validate() const {
  check_speaker(x, "x");
  check_speaker(y, "y");
  require(utterances >= 1, "utterances must be >= 1");
  require(min_frames >= 8 && max_frames >= min_frames, "need 8 <= min_frames <= max_frames");
  require(mcep_dim >= 1, "mcep_dim must be >= 1");
  require(frame_period_ms > 0.0, "frame_period_ms must be positive");
  require(sample_rate_hz > 0, "sample_rate_hz must be positive");
  require(short_period_ms > 0.0 && long_period_ms > 0.0, "periods must be positive");
  require(short_amp >= 0.0 && long_amp >= 0.0 && f0_noise >= 0.0, "amplitudes must be >= 0");
  require(short_amp + long_amp + f0_noise > 0.0, "intonation mixture is identically zero");
  require(mcep_ar > -1.0 && mcep_ar < 1.0, "mcep_ar must lie in (-1, 1)");
  require(mcep_noise > 0.0, "mcep_noise must be positive");
}

std::vector<NamedUtterance> synthesize_speaker(const SynthSpec& spec, const SpeakerSynth& speaker,
                                               const std::string& prefix, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length(spec.min_frames, spec.max_frames);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t d = spec.mcep_dim;

  std::vector<NamedUtterance> out;
  for (std::size_t n = 0; n < spec.utterances; ++n) {
    const std::size_t t = length(rng);

    std::vector<bool> voiced;
    std::size_t n_voiced = 0;
    do {
      voiced = voicing_runs(t, speaker, rng);
      n_voiced = static_cast<std::size_t>(std::count(voiced.begin(), voiced.end(), true));
    } while (n_voiced < 2);

    const double ps = phase(rng), pl = phase(rng);
    std::vector<double> z(t);
    for (std::size_t i = 0; i < t; ++i) {
      const double ms = static_cast<double>(i) * spec.frame_period_ms;
      z[i] = spec.short_amp * std::sin(2.0 * std::numbers::pi * ms / spec.short_period_ms + ps) +
             spec.long_amp * std::sin(2.0 * std::numbers::pi * ms / spec.long_period_ms + pl) +
             spec.f0_noise * gauss(rng);
    }
    double mean = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < t; ++i)
      if (voiced[i]) mean += z[i];
    mean /= static_cast<double>(n_voiced);
    for (std::size_t i = 0; i < t; ++i)
      if (voiced[i]) ss += (z[i] - mean) * (z[i] - mean);
    double sd = std::sqrt(ss / static_cast<double>(n_voiced));
    if (!(sd > 0.0)) sd = 1.0;
    std::vector<double> f0(t, 0.0);
    for (std::size_t i = 0; i < t; ++i)
      if (voiced[i]) f0[i] = std::exp(speaker.logf0_mean + speaker.logf0_std * (z[i] - mean) / sd);

    Matrix mcep(t, d);
    std::vector<double> resid(d, 0.0);
    const double innov = spec.mcep_noise * std::sqrt(1.0 - spec.mcep_ar * spec.mcep_ar);
    for (std::size_t k = 0; k < d; ++k) resid[k] = spec.mcep_noise * gauss(rng);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        if (i > 0) resid[k] = spec.mcep_ar * resid[k] + innov * gauss(rng);
        const double shape = 2.0 * std::pow(0.7, static_cast<double>(k)) * std::cos(static_cast<double>(k));
        const double tilt = speaker.mcep_tilt * (static_cast<double>(k) / static_cast<double>(d) - 0.5);
        mcep(i, k) = shape + speaker.mcep_offset + tilt + resid[k];
      }

    Matrix ap(t, spec.ap_dim);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t k = 0; k < spec.ap_dim; ++k) ap(i, k) = (voiced[i] ? -20.0 : -1.0) + 0.5 * gauss(rng);

    char id[32];
    std::snprintf(id, sizeof id, "_%04zu", n + 1);
    out.push_back({prefix + id, UtteranceFeatures(spec.frame_period_ms, spec.sample_rate_hz, std::move(f0),
                                                  std::move(mcep), std::move(ap))});
  }
  return out;
}

std::pair<std::vector<NamedUtterance>, std::vector<NamedUtterance>> synthesize_corpus(const SynthSpec& spec,
                                                                                     std::uint64_t seed) {
  return {synthesize_speaker(spec, spec.x, "x", nn::derive_seed(seed, 1)),
          synthesize_speaker(spec, spec.y, "y", nn::derive_seed(seed, 2))};
}

std::pair<SpeakerCorpus, SpeakerCorpus> make_synthetic_corpus(const SynthSpec& spec, std::uint64_t seed) {
  auto [x, y] = synthesize_corpus(spec, seed);
  return {prepare_corpus(std::move(x)), prepare_corpus(std::move(y))};
}

}  // namespace cwtvc
