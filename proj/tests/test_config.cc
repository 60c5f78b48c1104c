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

#include "cwtvc/config.h"
#include "doctest.h"

using namespace cwtvc;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty text gives the defaults") {
  const Config c = parse_config("");
  CHECK(c.hyper.lambda_cyc == 10.0);
  CHECK(c.hyper.lambda_id == 5.0);
  CHECK(c.hyper.lr_g == 2e-4);
  CHECK(c.hyper.lr_d == 1e-4);
  CHECK(c.hyper.beta1 == 0.5);
  CHECK(c.hyper.id_cutoff_iters == 10000);
  CHECK(render_config(c) == render_config(Config{}));
}

TEST_CASE("overrides, comments and blank lines") {
  const Config c = parse_config("# comment\n\nlambda_cyc = 7\nadv_form = saturating\ndisc_instance_norm = false\n");
  CHECK(c.hyper.lambda_cyc == 7.0);
  CHECK(c.hyper.adv_form == AdvForm::kSaturating);
  CHECK_FALSE(c.disc.instance_norm);
}

TEST_CASE("errors name the key or the line") {
  CHECK(error_of("lambda_cyc = abc\n").find("lambda_cyc") != std::string::npos);
  CHECK(error_of("crop_frames = -3\n").find("crop_frames") != std::string::npos);
  CHECK(error_of("bogus_key = 1\n").find("bogus_key") != std::string::npos);
  CHECK_FALSE(error_of("seed = 1\nseed = 2\n").empty());
  CHECK_FALSE(error_of("no equals sign\n").empty());
  CHECK_FALSE(error_of("adv_form = sideways\n").empty());
}

TEST_CASE("render then parse is a fixed point") {
  Config c;
  c.hyper.lambda_cyc = 0.1 + 0.2;
  c.hyper.seed = 987654321987ULL;
  c.gen.width = 24;
  c.synth.y.logf0_std = 1.0 / 3.0;
  c.per_utterance_norm = true;
  const std::string text = render_config(c);
  const Config back = parse_config(text);
  CHECK(render_config(back) == text);
  CHECK(back.hyper.lambda_cyc == c.hyper.lambda_cyc);
  CHECK(back.synth.y.logf0_std == c.synth.y.logf0_std);
  for (const auto& key : config_keys()) {
    const bool present = ("\n" + text).find("\n" + key + " = ") != std::string::npos;
    CHECK_MESSAGE(present, key);
  }
}

TEST_CASE("validation ties crop length to the networks") {
  CHECK_THROWS_AS(parse_config("crop_frames = 66\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("crop_frames = 4\n"), InvalidArgument);
  Config c;
  c.hyper.crop_frames = 66;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  CHECK_NOTHROW(parse_config("crop_frames = 64\n").validate());
}

TEST_CASE("the shipped desk configuration is valid") {
  const Config c = load_config(CWTVC_SOURCE_DIR "/tools/desk.cfg");
  CHECK_NOTHROW(c.validate());
  CHECK(c.hyper.crop_frames == 64);
  CHECK(c.gen.width == 16);
  CHECK(c.disc.width == 16);
}

}  // TEST_SUITE
