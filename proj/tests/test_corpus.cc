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

#include <cmath>
#include <filesystem>
#include <random>

#include "cwtvc/corpus.h"
#include "cwtvc/nn/checkpoint.h"
#include "doctest.h"
#include "support/helpers.h"

using namespace cwtvc;
using doctest::Approx;

namespace {

std::vector<NamedUtterance> random_speaker(std::uint64_t seed, std::size_t n, std::size_t frames = 120) {
  std::mt19937_64 rng(seed);
  std::vector<NamedUtterance> out;
  for (std::size_t k = 0; k < n; ++k)
    out.push_back({"u" + std::to_string(k), testing::random_utterance(rng, frames + 7 * k, 24, 2)});
  return out;
}

void check_unit_rows(const std::vector<nn::Tensor>& feats, double tol) {
  const std::size_t rows = feats.front().dim(0);
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0, sq = 0.0, n = 0.0;
    for (const auto& f : feats) {
      const std::size_t t = f.dim(1);
      for (std::size_t k = 0; k < t; ++k) {
        s += f[r * t + k];
        sq += f[r * t + k] * f[r * t + k];
      }
      n += static_cast<double>(t);
    }
    const double mean = s / n;
    CHECK(std::abs(mean) <= tol);
    CHECK(std::abs(std::sqrt(sq / n - mean * mean) - 1.0) <= tol);
  }
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("single utterance corpus is standardized on its own coefficients") {
  const auto c = prepare_corpus(random_speaker(1, 1));
  REQUIRE(c.prosody.size() == 1);
  CHECK(c.prosody[0].shape() == nn::Shape{10, 120});
  CHECK(c.spectrum[0].shape() == nn::Shape{24, 120});
  check_unit_rows(c.prosody, 1e-9);
  check_unit_rows(c.spectrum, 1e-9);
  CHECK(c.channels(FeatureKind::kProsody) == 10);
  CHECK(c.channels(FeatureKind::kSpectrum) == 24);
}

TEST_CASE("multi-utterance corpus stats cover the union") {
  auto a = random_speaker(2, 3), b = random_speaker(3, 2);
  std::vector<NamedUtterance> all = a;
  all.insert(all.end(), b.begin(), b.end());
  const auto c = prepare_corpus(all);
  check_unit_rows(c.prosody, 1e-9);
  check_unit_rows(c.spectrum, 1e-9);

  double s = 0.0, sq = 0.0, n = 0.0;
  for (const auto& u : all)
    for (double f : u.feat.f0())
      if (f > 0.0) {
        s += std::log(f);
        sq += std::log(f) * std::log(f);
        n += 1.0;
      }
  CHECK(c.stats.f0.n_voiced == static_cast<std::uint64_t>(n));
  CHECK(c.stats.f0.mean == Approx(s / n).epsilon(1e-12));
  CHECK(c.stats.f0.std == Approx(std::sqrt(sq / n - (s / n) * (s / n))).epsilon(1e-9));
}

TEST_CASE("preparation is deterministic") {
  const auto a = prepare_corpus(random_speaker(4, 3)), b = prepare_corpus(random_speaker(4, 3));
  CHECK(a.prosody == b.prosody);
  CHECK(a.spectrum == b.spectrum);
  CHECK(a.stats.f0.mean == b.stats.f0.mean);
  CHECK(a.stats.scales.std == b.stats.scales.std);
  CHECK(prepare_corpus(random_speaker(4, 3), {false, true}).prosody == a.prosody);
}

TEST_CASE("bad utterances are reported, not silently dropped") {
  auto us = random_speaker(5, 3);
  us.push_back({"silent", UtteranceFeatures(5.0, 16000, std::vector<double>(50, 0.0), Matrix(50, 24), Matrix(50, 2))});
  Matrix bad(40, 24, 0.0);
  bad(3, 3) = std::nan("");
  us.push_back({"nan", UtteranceFeatures(5.0, 16000, std::vector<double>(40, 100.0), bad, Matrix(40, 2))});
  us.push_back({"narrow", UtteranceFeatures(5.0, 16000, std::vector<double>(40, 100.0), Matrix(40, 20), Matrix(40, 2))});
  const auto c = prepare_corpus(us);
  CHECK(c.utterances.size() == 3);
  REQUIRE(c.rejected.size() == 3);
  CHECK(c.rejected[0].id == "silent");
  CHECK(c.rejected[1].id == "nan");
  CHECK(c.rejected[2].id == "narrow");
  const std::string report = render_rejections(c.rejected);
  CHECK(report.find("silent\t") != std::string::npos);

  std::vector<NamedUtterance> only_bad{us[3]};
  CHECK_THROWS_AS(prepare_corpus(only_bad), InvalidArgument);
}

TEST_CASE("mcep normalization inverse and channel layout") {
  std::mt19937_64 rng(6);
  const auto u = testing::random_utterance(rng, 30);
  const std::vector<const Matrix*> ms{&u.mcep()};
  const auto st = compute_mcep_stats(ms);
  const auto back = denormalize_mcep(normalize_mcep(u.mcep(), st), st);
  for (std::size_t k = 0; k < back.size(); ++k) CHECK(std::abs(back.data()[k] - u.mcep().data()[k]) <= 1e-12);
  const nn::Tensor t = to_channels(u.mcep());
  CHECK(t.shape() == nn::Shape{24, 30});
  CHECK(t[1 * 30 + 2] == u.mcep()(2, 1));
  CHECK(from_channels(t) == u.mcep());
  const Matrix flat(5, 3, 1.0);
  CHECK_THROWS_AS(compute_mcep_stats({&flat}), InvalidArgument);
}

TEST_CASE("per-utterance log-F0 normalization falls back to speaker stats") {
  const SpeakerF0Stats speaker{std::log(150.0), 0.3, 100};
  const std::vector<double> f0{100.0, 0.0, 200.0};
  const auto own = normalized_log_f0(f0, speaker, true);
  CHECK(own[0] == Approx(-1.0));
  CHECK(own[2] == Approx(1.0));
  const std::vector<double> flat{0.0, 120.0, 120.0};
  const auto fb = normalized_log_f0(flat, speaker, true);
  CHECK(fb[1] == Approx((std::log(120.0) - speaker.mean) / speaker.std));
  CHECK(normalized_log_f0(f0, speaker, false)[0] == Approx((std::log(100.0) - speaker.mean) / speaker.std));
}

TEST_CASE("speaker stats and directories round trip") {
  testing::TempDir dir;
  const auto us = random_speaker(7, 3);
  const auto c = prepare_corpus(us);
  save_speaker_stats(c.stats, dir.str(), "x_");
  CHECK(std::filesystem::exists(dir.path() / "x_stats.txt"));
  CHECK(std::filesystem::exists(dir.path() / "x_scale_stats.txt"));
  CHECK(std::filesystem::exists(dir.path() / "x_mcep_stats.txt"));
  const auto back = load_speaker_stats(dir.str(), "x_");
  CHECK(back.f0.mean == c.stats.f0.mean);
  CHECK(back.f0.std == c.stats.f0.std);
  CHECK(back.scales.mean == c.stats.scales.mean);
  CHECK(back.scales.std == c.stats.scales.std);
  CHECK(back.mcep.mean == c.stats.mcep.mean);
  CHECK(back.mcep.std == c.stats.mcep.std);

  write_speaker_dir({us[2], us[0], us[1]}, dir.str("spk"));
  const auto read = read_speaker_dir(dir.str("spk"));
  REQUIRE(read.size() == 3);
  CHECK(read[0].id == "u0");
  CHECK(read[2].id == "u2");
  CHECK(encode_features(read[1].feat) == encode_features(us[1].feat));
}

TEST_CASE("feature kind names") {
  CHECK(kind_name(FeatureKind::kSpectrum) == "spectrum");
  CHECK(parse_kind("prosody") == FeatureKind::kProsody);
  CHECK_THROWS_AS(parse_kind("both"), InvalidArgument);
}

}  // TEST_SUITE
