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

#include <cstring>
#include <sstream>

#include "cwtvc/features.h"
#include "doctest.h"
#include "support/helpers.h"

using namespace cwtvc;

TEST_SUITE("features") {

TEST_CASE("encode then decode is bit-exact") {
  std::mt19937_64 rng(11);
  for (std::size_t frames : {1u, 7u, 300u}) {
    const auto u = testing::random_utterance(rng, frames, 24, 3);
    const std::string bytes = encode_features(u);
    const auto back = decode_features(bytes);
    CHECK(back.frames() == u.frames());
    CHECK(back.frame_period_ms() == u.frame_period_ms());
    CHECK(back.sample_rate_hz() == u.sample_rate_hz());
    CHECK(std::memcmp(back.f0().data(), u.f0().data(), 8 * frames) == 0);
    CHECK(back.mcep() == u.mcep());
    CHECK(back.ap() == u.ap());
    CHECK(encode_features(back) == bytes);
  }
}

TEST_CASE("single frame, 24 mcep, no ap is 232 bytes") {
  UtteranceFeatures u(5.0, 16000, {120.0}, Matrix(1, 24, 0.5), Matrix(1, 0));
  const std::string bytes = encode_features(u);
  CHECK(bytes.size() == 232);
  CHECK(bytes.size() == kVcfHeaderBytes + 8 * (1 + 24));
  CHECK(bytes.substr(0, 4) == "VCF1");
}

TEST_CASE("header fields are little-endian at fixed offsets") {
  UtteranceFeatures u(5.0, 22050, {0.0, 150.0, 151.0}, Matrix(3, 4, 1.0), Matrix(3, 2, 0.0));
  const std::string b = encode_features(u);
  auto u32 = [&](std::size_t off) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[off + i]);
    return v;
  };
  CHECK(u32(4) == 1);
  double fp;
  std::memcpy(&fp, b.data() + 8, 8);
  CHECK(fp == 5.0);
  CHECK(u32(16) == 22050);
  CHECK(u32(20) == 3);
  CHECK(u32(24) == 4);
  CHECK(u32(28) == 2);
}

TEST_CASE("non-finite mcep is rejected and nothing is written") {
  Matrix mcep(2, 3, 0.0);
  mcep(1, 2) = std::nan("");
  UtteranceFeatures u(5.0, 16000, {100.0, 0.0}, mcep, Matrix(2, 1));
  std::ostringstream sink;
  CHECK_THROWS_AS(write_features(u, sink), InvalidArgument);
  CHECK(sink.str().empty());
}

TEST_CASE("decode errors carry their code") {
  std::mt19937_64 rng(3);
  const std::string good = encode_features(testing::random_utterance(rng, 100, 24, 2));
  auto code_of = [](const std::string& bytes) {
    try {
      decode_features(bytes);
    } catch (const FormatError& e) {
      return e.code();
    }
    FAIL("no error");
    return FormatError::Code::kInvalidValue;
  };
  SUBCASE("bad magic") {
    std::string b = good;
    b.replace(0, 4, "XXXX");
    CHECK(code_of(b) == FormatError::Code::kBadMagic);
  }
  SUBCASE("payload one frame short") {
    CHECK(code_of(good.substr(0, good.size() - 8 * (1 + 24 + 2))) == FormatError::Code::kTruncated);
  }
  SUBCASE("short header") { CHECK(code_of(good.substr(0, 20)) == FormatError::Code::kTruncated); }
  SUBCASE("trailing bytes") { CHECK(code_of(good + "x") == FormatError::Code::kTrailingBytes); }
  SUBCASE("version 2") {
    std::string b = good;
    b[4] = 2;
    CHECK(code_of(b) == FormatError::Code::kUnsupportedVersion);
  }
  SUBCASE("nan in payload") {
    std::string b = good;
    const double nan = std::nan("");
    std::memcpy(b.data() + kVcfHeaderBytes + 8 * 100, &nan, 8);
    CHECK(code_of(b) == FormatError::Code::kNonFinite);
  }
  SUBCASE("negative f0") {
    std::string b = good;
    const double neg = -1.0;
    std::memcpy(b.data() + kVcfHeaderBytes, &neg, 8);
    CHECK(code_of(b) == FormatError::Code::kInvalidValue);
  }
}

TEST_CASE("voiced fraction") {
  UtteranceFeatures all(5.0, 16000, std::vector<double>(10, 120.0), Matrix(10, 2), Matrix(10, 0));
  CHECK(validate(all).voiced_fraction == 1.0);
  UtteranceFeatures quarter(5.0, 16000, {0, 0, 100, 0}, Matrix(4, 2), Matrix(4, 0));
  const auto d = validate(quarter);
  CHECK(d.voiced_fraction == 0.25);
  CHECK(d.voiced_count == 1);
  CHECK(d.ok());
}

TEST_CASE("diagnostics count bad values instead of throwing") {
  Matrix mcep(2, 2, 0.0);
  mcep(0, 0) = std::numeric_limits<double>::infinity();
  UtteranceFeatures u(5.0, 16000, {-1.0, 100.0}, mcep, Matrix(2, 0));
  const auto d = validate(u);
  CHECK(d.negative_f0 == 1);
  CHECK(d.mcep.inf == 1);
  CHECK_FALSE(d.ok());
}

TEST_CASE("constructor rejects inconsistent shapes") {
  CHECK_THROWS_AS(UtteranceFeatures(5.0, 16000, {}, Matrix(0, 24), Matrix()), InvalidArgument);
  CHECK_THROWS_AS(UtteranceFeatures(5.0, 16000, {1.0, 2.0}, Matrix(3, 24), Matrix()), InvalidArgument);
  CHECK_THROWS_AS(UtteranceFeatures(0.0, 16000, {1.0}, Matrix(1, 24), Matrix()), InvalidArgument);
}

TEST_CASE("save and load through a file") {
  testing::TempDir dir;
  std::mt19937_64 rng(5);
  const auto u = testing::random_utterance(rng, 50);
  save_features(u, dir.str("a.vcf"));
  CHECK(encode_features(load_features(dir.str("a.vcf"))) == encode_features(u));
  CHECK_THROWS_AS(load_features(dir.str("missing.vcf")), IoError);
}

}  // TEST_SUITE
