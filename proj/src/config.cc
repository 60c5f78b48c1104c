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

#include <functional>
#include <limits>
#include <type_traits>

#include "cwtvc/kv_text.h"

namespace cwtvc {

namespace {

struct Field {
  std::string key;
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename Access>
Field real(std::string key, Access acc) {
  return {key, [acc, key](Config& c, const std::string& v) { acc(c) = parse_double(key, v); },
          [acc](const Config& c) { return format_double(acc(c)); }};
}

template <typename Access>
Field integer(std::string key, Access acc) {
  return {key, [acc, key](Config& c, const std::string& v) { acc(c) = parse_int(key, v); },
          [acc](const Config& c) { return std::to_string(acc(c)); }};
}

template <typename Access>
Field count(std::string key, Access acc) {
  return {key,
          [acc, key](Config& c, const std::string& v) {
            using T = std::remove_reference_t<decltype(acc(c))>;
            const std::uint64_t u = parse_uint(key, v);
            if (u > std::numeric_limits<T>::max()) throw InvalidArgument("config key '" + key + "': value out of range");
            acc(c) = static_cast<T>(u);
          },
          [acc](const Config& c) { return std::to_string(acc(c)); }};
}

template <typename Access>
Field boolean(std::string key, Access acc) {
  return {key,
          [acc, key](Config& c, const std::string& v) {
            if (v == "true" || v == "1") acc(c) = true;
            else if (v == "false" || v == "0") acc(c) = false;
            else throw InvalidArgument("config key '" + key + "': expected true or false, got '" + v + "'");
          },
          [acc](const Config& c) { return std::string(acc(c) ? "true" : "false"); }};
}

void speaker_fields(std::vector<Field>& f, const std::string& p, SpeakerSynth SynthSpec::*sp) {
  f.push_back(real(p + "logf0_mean", [sp](auto& c) -> auto& { return (c.synth.*sp).logf0_mean; }));
  f.push_back(real(p + "logf0_std", [sp](auto& c) -> auto& { return (c.synth.*sp).logf0_std; }));
  f.push_back(real(p + "voiced_run", [sp](auto& c) -> auto& { return (c.synth.*sp).voiced_run; }));
  f.push_back(real(p + "unvoiced_run", [sp](auto& c) -> auto& { return (c.synth.*sp).unvoiced_run; }));
  f.push_back(real(p + "mcep_offset", [sp](auto& c) -> auto& { return (c.synth.*sp).mcep_offset; }));
  f.push_back(real(p + "mcep_tilt", [sp](auto& c) -> auto& { return (c.synth.*sp).mcep_tilt; }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(real("lambda_cyc", [](auto& c) -> auto& { return c.hyper.lambda_cyc; }));
    f.push_back(real("lambda_id", [](auto& c) -> auto& { return c.hyper.lambda_id; }));
    f.push_back(integer("id_cutoff_iters", [](auto& c) -> auto& { return c.hyper.id_cutoff_iters; }));
    f.push_back(real("lr_g", [](auto& c) -> auto& { return c.hyper.lr_g; }));
    f.push_back(real("lr_d", [](auto& c) -> auto& { return c.hyper.lr_d; }));
    f.push_back(integer("const_iters", [](auto& c) -> auto& { return c.hyper.const_iters; }));
    f.push_back(integer("decay_iters", [](auto& c) -> auto& { return c.hyper.decay_iters; }));
    f.push_back(real("beta1", [](auto& c) -> auto& { return c.hyper.beta1; }));
    f.push_back(real("beta2", [](auto& c) -> auto& { return c.hyper.beta2; }));
    f.push_back(real("adam_eps", [](auto& c) -> auto& { return c.hyper.adam_eps; }));
    f.push_back(count("crop_frames", [](auto& c) -> auto& { return c.hyper.crop_frames; }));
    f.push_back(count("seed", [](auto& c) -> auto& { return c.hyper.seed; }));
    f.push_back(integer("iterations", [](auto& c) -> auto& { return c.hyper.iterations; }));
    f.push_back({"adv_form",
                 [](Config& c, const std::string& v) {
                   if (v == "non_saturating") c.hyper.adv_form = AdvForm::kNonSaturating;
                   else if (v == "saturating") c.hyper.adv_form = AdvForm::kSaturating;
                   else throw InvalidArgument("config key 'adv_form': expected non_saturating or saturating, got '" + v + "'");
                 },
                 [](const Config& c) {
                   return std::string(c.hyper.adv_form == AdvForm::kNonSaturating ? "non_saturating" : "saturating");
                 }});
    f.push_back(real("prob_clamp", [](auto& c) -> auto& { return c.hyper.prob_clamp; }));

    f.push_back(count("gen_width", [](auto& c) -> auto& { return c.gen.width; }));
    f.push_back(count("gen_n_down", [](auto& c) -> auto& { return c.gen.n_down; }));
    f.push_back(count("gen_n_res", [](auto& c) -> auto& { return c.gen.n_res; }));
    f.push_back(count("gen_n_up", [](auto& c) -> auto& { return c.gen.n_up; }));
    f.push_back(count("gen_kernel_in", [](auto& c) -> auto& { return c.gen.kernel_in; }));
    f.push_back(count("gen_kernel_down", [](auto& c) -> auto& { return c.gen.kernel_down; }));
    f.push_back(count("gen_kernel_res", [](auto& c) -> auto& { return c.gen.kernel_res; }));
    f.push_back(count("gen_kernel_up", [](auto& c) -> auto& { return c.gen.kernel_up; }));
    f.push_back(count("gen_kernel_out", [](auto& c) -> auto& { return c.gen.kernel_out; }));
    f.push_back(real("gen_init_std", [](auto& c) -> auto& { return c.gen.init_std; }));
    f.push_back(count("disc_width", [](auto& c) -> auto& { return c.disc.width; }));
    f.push_back(count("disc_n_blocks", [](auto& c) -> auto& { return c.disc.n_blocks; }));
    f.push_back(count("disc_kernel", [](auto& c) -> auto& { return c.disc.kernel; }));
    f.push_back(boolean("disc_instance_norm", [](auto& c) -> auto& { return c.disc.instance_norm; }));
    f.push_back(real("disc_init_std", [](auto& c) -> auto& { return c.disc.init_std; }));

    f.push_back(count("synth_utterances", [](auto& c) -> auto& { return c.synth.utterances; }));
    f.push_back(count("synth_min_frames", [](auto& c) -> auto& { return c.synth.min_frames; }));
    f.push_back(count("synth_max_frames", [](auto& c) -> auto& { return c.synth.max_frames; }));
    f.push_back(count("synth_mcep_dim", [](auto& c) -> auto& { return c.synth.mcep_dim; }));
    f.push_back(count("synth_ap_dim", [](auto& c) -> auto& { return c.synth.ap_dim; }));
    f.push_back(real("synth_frame_period_ms", [](auto& c) -> auto& { return c.synth.frame_period_ms; }));
    f.push_back(count("synth_sample_rate_hz", [](auto& c) -> auto& { return c.synth.sample_rate_hz; }));
    f.push_back(real("synth_short_period_ms", [](auto& c) -> auto& { return c.synth.short_period_ms; }));
    f.push_back(real("synth_long_period_ms", [](auto& c) -> auto& { return c.synth.long_period_ms; }));
    f.push_back(real("synth_short_amp", [](auto& c) -> auto& { return c.synth.short_amp; }));
    f.push_back(real("synth_long_amp", [](auto& c) -> auto& { return c.synth.long_amp; }));
    f.push_back(real("synth_f0_noise", [](auto& c) -> auto& { return c.synth.f0_noise; }));
    f.push_back(real("synth_mcep_ar", [](auto& c) -> auto& { return c.synth.mcep_ar; }));
    f.push_back(real("synth_mcep_noise", [](auto& c) -> auto& { return c.synth.mcep_noise; }));
    speaker_fields(f, "synth_x_", &SynthSpec::x);
    speaker_fields(f, "synth_y_", &SynthSpec::y);

    f.push_back(boolean("per_utterance_norm", [](auto& c) -> auto& { return c.per_utterance_norm; }));
    f.push_back(integer("log_every", [](auto& c) -> auto& { return c.log_every; }));
    f.push_back(integer("checkpoint_every", [](auto& c) -> auto& { return c.checkpoint_every; }));
    return f;
  }();
  return table;
}

}  // namespace

void Config::validate() const {
  hyper.validate();
  gen.validate();
  disc.validate();
  synth.validate();
  if (hyper.crop_frames % gen.time_factor() != 0)
    throw InvalidArgument("crop_frames must be a multiple of " + std::to_string(gen.time_factor()));
  if (hyper.crop_frames < disc.min_extent())
    throw InvalidArgument("crop_frames must be at least " + std::to_string(disc.min_extent()));
  if (log_every < 1) throw InvalidArgument("log_every must be >= 1");
  if (checkpoint_every < 0) throw InvalidArgument("checkpoint_every must be >= 0");
}

Config parse_config(const std::string& text) {
  Config c;
  for (const auto& kv : parse_key_values(text)) {
    const Field* match = nullptr;
    for (const auto& f : fields())
      if (f.key == kv.key) match = &f;
    if (match == nullptr)
      throw InvalidArgument("config line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    match->set(c, kv.value);
  }
  c.validate();
  return c;
}

std::string render_config(const Config& c) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.get(c) + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.push_back(f.key);
  return keys;
}

Config load_config(const std::string& path) { return parse_config(read_text_file(path)); }

}  // namespace cwtvc
