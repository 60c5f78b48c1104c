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
#include <random>

#include "cwtvc/metrics.h"
#include "doctest.h"
#include "support/helpers.h"

using namespace cwtvc;
using doctest::Approx;

TEST_SUITE("metrics") {

TEST_CASE("identical utterances") {
  std::mt19937_64 rng(1);
  const auto u = testing::random_utterance(rng, 100);
  const auto m = metrics(u, u);
  CHECK(m.mcd_db == 0.0);
  CHECK(m.f0_rmse_hz == 0.0);
  CHECK(m.f0_corr == Approx(1.0).epsilon(1e-12));
  CHECK(m.voiced_frames == validate(u).voiced_count);
}

TEST_CASE("one frame differing by 1 in one dimension") {
  Matrix a(1, 24, 0.0), b(1, 24, 0.0);
  b(0, 5) = 1.0;
  const double mcd = mel_cepstral_distortion(a, b);
  CHECK(std::abs(mcd - 6.141851464) <= 1e-9);
  CHECK(mcd == Approx(10.0 / std::log(10.0) * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(mel_cepstral_distortion(b, a) == mcd);
}

TEST_CASE("mcd is symmetric and averages over frames") {
  std::mt19937_64 rng(2);
  const auto u = testing::random_utterance(rng, 40), v = testing::random_utterance(rng, 40);
  CHECK(mel_cepstral_distortion(u.mcep(), v.mcep()) == Approx(mel_cepstral_distortion(v.mcep(), u.mcep())));
  Matrix a(2, 2, 0.0), b(2, 2, 0.0);
  b(0, 0) = 1.0;
  CHECK(mel_cepstral_distortion(a, b) == Approx(0.5 * 10.0 / std::log(10.0) * std::sqrt(2.0)));
}

TEST_CASE("f0 errors over mutually voiced frames") {
  UtteranceFeatures ref(5.0, 16000, {100, 200, 0, 150}, Matrix(4, 2), Matrix(4, 0));
  UtteranceFeatures hyp(5.0, 16000, {110, 190, 120, 0}, Matrix(4, 2), Matrix(4, 0));
  const auto m = metrics(ref, hyp);
  CHECK(m.voiced_frames == 2);
  CHECK(m.f0_rmse_hz == Approx(10.0));
  CHECK(m.f0_corr == Approx(1.0));
}

TEST_CASE("errors") {
  UtteranceFeatures a(5.0, 16000, {100, 0}, Matrix(2, 2), Matrix(2, 0));
  UtteranceFeatures b(5.0, 16000, {0, 100}, Matrix(2, 2), Matrix(2, 0));
  UtteranceFeatures c(5.0, 16000, {100}, Matrix(1, 2), Matrix(1, 0));
  CHECK_THROWS_AS(metrics(a, b), InvalidArgument);
  CHECK_THROWS_AS(metrics(a, c), InvalidArgument);
  UtteranceFeatures flat(5.0, 16000, {100, 100}, Matrix(2, 2), Matrix(2, 0));
  CHECK(std::isnan(metrics(flat, flat).f0_corr));
}

}  // TEST_SUITE
