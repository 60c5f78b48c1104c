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

#include "cwtvc/f0.h"
#include "doctest.h"

using namespace cwtvc;
using doctest::Approx;

TEST_SUITE("f0") {

TEST_CASE("interpolate_unvoiced") {
  CHECK(interpolate_unvoiced(std::vector<double>{100, 0, 0, 0, 200}) == std::vector<double>{100, 125, 150, 175, 200});
  const std::vector<double> voiced{110, 120, 130};
  CHECK(interpolate_unvoiced(voiced) == voiced);
  CHECK(interpolate_unvoiced(std::vector<double>{0, 0, 150, 0}) == std::vector<double>{150, 150, 150, 150});
  CHECK_THROWS_AS(interpolate_unvoiced(std::vector<double>{0, 0, 0}), InvalidArgument);
}

TEST_CASE("to_log") {
  CHECK(to_log(std::vector<double>{1.0}) == std::vector<double>{0.0});
  CHECK(to_log(std::vector<double>{std::exp(1.0)})[0] == Approx(1.0).epsilon(1e-15));
  const auto l = to_log(std::vector<double>{100, 200});
  CHECK(std::abs(l[0] - 4.6051702) < 5e-8);
  CHECK(std::abs(l[1] - 5.2983174) < 5e-8);
  CHECK_THROWS_AS(to_log(std::vector<double>{1.0, 0.0}), InvalidArgument);
}

TEST_CASE("compute_stats over voiced frames only") {
  const std::vector<double> f0{100, 0, 200};
  const auto c = continuous_log_f0(f0);
  const LogF0Utterance u{c.values, &c.mask};
  const auto s = compute_stats(std::span(&u, 1));
  CHECK(s.n_voiced == 2);
  CHECK(std::abs(s.mean - 4.9517438) < 5e-8);
  CHECK(std::abs(s.std - 0.3465736) < 5e-8);
}

TEST_CASE("compute_stats errors") {
  const std::vector<double> same(5, std::log(120.0));
  VoicingMask all{std::vector<bool>(5, true)};
  const LogF0Utterance flat{same, &all};
  CHECK_THROWS_AS(compute_stats(std::span(&flat, 1)), InvalidArgument);
  VoicingMask one{{true, false, false, false, false}};
  const LogF0Utterance single{same, &one};
  CHECK_THROWS_AS(compute_stats(std::span(&single, 1)), InvalidArgument);
}

TEST_CASE("normalize and denormalize") {
  const SpeakerF0Stats s{5.0, 0.25, 10};
  CHECK(normalize(std::vector<double>{5.0, 5.0}, s) == std::vector<double>{0.0, 0.0});
  CHECK(normalize(std::vector<double>{5.25}, s)[0] == Approx(1.0).epsilon(1e-15));
  CHECK(denormalize(std::vector<double>{0.0}, s)[0] == 5.0);
  CHECK(denormalize(std::vector<double>{1.0}, s)[0] == Approx(5.25).epsilon(1e-15));
  CHECK_THROWS_AS(normalize(std::vector<double>{1.0}, SpeakerF0Stats{0.0, 0.0, 0}), InvalidArgument);
}

TEST_CASE("normalize/denormalize are inverse to 1e-12") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(5.0, 0.3);
  std::vector<double> x(1000);
  for (auto& v : x) v = n(rng);
  const SpeakerF0Stats s{4.9, 0.17, 100};
  const auto y = denormalize(normalize(x, s), s);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-12);
}

TEST_CASE("reapply_voicing") {
  const std::vector<double> f{110, 120, 130};
  CHECK(reapply_voicing(f, VoicingMask{{true, true, true}}) == f);
  CHECK(reapply_voicing(f, VoicingMask{{false, false, false}}) == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(reapply_voicing(f, VoicingMask{{true}}), InvalidArgument);
}

TEST_CASE("lg_convert maps mean to mean and one sigma to one sigma") {
  const SpeakerF0Stats src{std::log(120.0), 0.15, 100}, tgt{std::log(220.0), 0.2, 100};
  const auto out = lg_convert(std::vector<double>{std::exp(src.mean), std::exp(src.mean + src.std), 0.0}, src, tgt);
  CHECK(out[0] == Approx(std::exp(tgt.mean)).epsilon(1e-12));
  CHECK(out[1] == Approx(std::exp(tgt.mean + tgt.std)).epsilon(1e-12));
  CHECK(out[2] == 0.0);
}

TEST_CASE("stats text round trip") {
  const SpeakerF0Stats s{4.787491742782046, 0.1500000000000001, 12345};
  const auto back = parse_f0_stats(render_f0_stats(s));
  CHECK(back.mean == s.mean);
  CHECK(back.std == s.std);
  CHECK(back.n_voiced == s.n_voiced);
  CHECK_THROWS_AS(parse_f0_stats("mean = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_f0_stats("mean = 1\nstd = 1\nbogus = 2\n"), InvalidArgument);
}

}  // TEST_SUITE
