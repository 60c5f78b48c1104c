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

#include "cwtvc/pipeline.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cwtvc/kv_text.h"
#include "cwtvc/nn/checkpoint.h"

namespace cwtvc {

namespace fs = std::filesystem;

namespace {

std::uint64_t kind_tag(FeatureKind kind) { return kind == FeatureKind::kSpectrum ? 1 : 2; }

std::string model_path(const std::string& dir, FeatureKind kind, const char* net) {
  return (fs::path(dir) / (kind_name(kind) + "_" + net + ".vcm")).string();
}

void require_dims(const UtteranceFeatures& u, const SpeakerStats& src, const SpeakerStats& tgt) {
  if (u.mcep_dim() != src.mcep.dim() || u.mcep_dim() != tgt.mcep.dim())
    throw InvalidArgument("utterance has " + std::to_string(u.mcep_dim()) + " MCEP dimensions, stats have " +
                          std::to_string(src.mcep.dim()) + " (source) and " + std::to_string(tgt.mcep.dim()) +
                          " (target)");
  if (voicing_of(u.f0()).count_voiced() == 0) throw InvalidArgument("utterance has no voiced frames");
}

Matrix map_spectrum(const Matrix& mcep, const FeatureMap& spectrum, const SpeakerStats& src,
                    const SpeakerStats& tgt) {
  const nn::Tensor in = to_channels(normalize_mcep(mcep, src.mcep));
  const nn::Tensor out = spectrum(in);
  if (out.shape() != in.shape())
    throw InvalidArgument("spectrum map changed shape " + nn::shape_string(in.shape()) + " to " +
                          nn::shape_string(out.shape()));
  return denormalize_mcep(from_channels(out), tgt.mcep);
}

}  // namespace

ModelPair init_model_pair(FeatureKind kind, std::size_t channels, const GanHyper& h, nn::GenConfig gen,
                          nn::DiscConfig disc) {
  gen.channels = channels;
  disc.channels = channels;
  return ModelPair::create(gen, disc, nn::derive_seed(h.seed, 100 + kind_tag(kind)), h.adam());
}

ModelPair train_pipeline(const SpeakerCorpus& x, const SpeakerCorpus& y, FeatureKind kind, const GanHyper& h,
                         const nn::GenConfig& gen, const nn::DiscConfig& disc, const TrainOptions& opts) {
  h.validate();
  const std::size_t c = x.channels(kind);
  if (y.channels(kind) != c)
    throw InvalidArgument(kind_name(kind) + " channel counts differ: " + std::to_string(c) + " vs " +
                          std::to_string(y.channels(kind)));
  const auto& xs = x.features(kind);
  const auto& ys = y.features(kind);
  if (xs.empty() || ys.empty()) throw InvalidArgument("train_pipeline: empty corpus");
  if (h.crop_frames % gen.time_factor() != 0)
    throw InvalidArgument("crop_frames must be a multiple of " + std::to_string(gen.time_factor()));
  if (opts.log_every < 1 || opts.checkpoint_every < 0) throw InvalidArgument("train_pipeline: bad log or checkpoint stride");

  ModelPair m = init_model_pair(kind, c, h, gen, disc);
  std::mt19937_64 rng(nn::derive_seed(h.seed, 200 + kind_tag(kind)));
  std::uniform_int_distribution<std::size_t> pick_x(0, xs.size() - 1), pick_y(0, ys.size() - 1);

  std::ofstream log;
  if (!opts.out_dir.empty()) {
    fs::create_directories(opts.out_dir);
    const auto path = fs::path(opts.out_dir) / (kind_name(kind) + "_losses.csv");
    log.open(path, std::ios::trunc);
    if (!log) throw IoError("cannot open " + path.string());
    log << loss_csv_header() << '\n';
  }

  for (std::int64_t it = 0; it < h.iterations; ++it) {
    const nn::Tensor xc = sample_crop(xs[pick_x(rng)], h.crop_frames, rng);
    const nn::Tensor yc = sample_crop(ys[pick_y(rng)], h.crop_frames, rng);
    LossReport r;
    try {
      r = train_step(m, xc, yc, h, it);
    } catch (const TrainingDiverged&) {
      if (log.is_open()) log.flush();
      throw;
    }
    if (log.is_open() && (it % opts.log_every == 0 || it + 1 == h.iterations)) log << loss_csv_row(r) << '\n';
    if (opts.on_report) opts.on_report(r);
    if (!opts.out_dir.empty() && opts.checkpoint_every > 0 && (it + 1) % opts.checkpoint_every == 0)
      save_model_pair(m, kind, opts.out_dir);
  }
  if (!opts.out_dir.empty()) save_model_pair(m, kind, opts.out_dir);
  return m;
}

void save_model_pair(const ModelPair& m, FeatureKind kind, const std::string& dir) {
  fs::create_directories(dir);
  nn::save_checkpoint(m.g_xy, model_path(dir, kind, "gxy"));
  nn::save_checkpoint(m.g_yx, model_path(dir, kind, "gyx"));
  nn::save_checkpoint(m.d_x, model_path(dir, kind, "dx"));
  nn::save_checkpoint(m.d_y, model_path(dir, kind, "dy"));
}

void load_model_pair(ModelPair& m, FeatureKind kind, const std::string& dir) {
  nn::load_checkpoint(m.g_xy, model_path(dir, kind, "gxy"));
  nn::load_checkpoint(m.g_yx, model_path(dir, kind, "gyx"));
  nn::load_checkpoint(m.d_x, model_path(dir, kind, "dx"));
  nn::load_checkpoint(m.d_y, model_path(dir, kind, "dy"));
}

Direction parse_direction(const std::string& s) {
  if (s == "x2y") return Direction::kXtoY;
  if (s == "y2x") return Direction::kYtoX;
  throw InvalidArgument("unknown direction '" + s + "' (expected x2y or y2x)");
}

ConversionModels make_conversion_models(const Config& config, const SpeakerStats& x, const SpeakerStats& y) {
  if (x.mcep.dim() != y.mcep.dim()) throw InvalidArgument("speakers have different MCEP widths");
  return ConversionModels{
      config,
      init_model_pair(FeatureKind::kSpectrum, x.mcep.dim(), config.hyper, config.gen, config.disc),
      init_model_pair(FeatureKind::kProsody, kNumScales, config.hyper, config.gen, config.disc),
      x,
      y,
  };
}

void save_conversion_models(const ConversionModels& m, const std::string& dir) {
  fs::create_directories(dir);
  write_text_file((fs::path(dir) / "hyper.cfg").string(), render_config(m.config));
  save_speaker_stats(m.x, dir, "x_");
  save_speaker_stats(m.y, dir, "y_");
  save_model_pair(m.spectrum, FeatureKind::kSpectrum, dir);
  save_model_pair(m.prosody, FeatureKind::kProsody, dir);
}

ConversionModels load_conversion_models(const std::string& dir) {
  const Config config = load_config((fs::path(dir) / "hyper.cfg").string());
  ConversionModels m = make_conversion_models(config, load_speaker_stats(dir, "x_"), load_speaker_stats(dir, "y_"));
  load_model_pair(m.spectrum, FeatureKind::kSpectrum, dir);
  load_model_pair(m.prosody, FeatureKind::kProsody, dir);
  return m;
}

FeatureMap generator_map(const nn::Generator& g) {
  return [&g](const nn::Tensor& x) {
    if (x.rank() != 2) throw InvalidArgument("generator input must be [C, T], got " + nn::shape_string(x.shape()));
    const std::size_t c = x.dim(0), t = x.dim(1);
    const std::size_t f = g.config().time_factor();
    const std::size_t tp = (t + f - 1) / f * f;
    if (tp == t) return g.infer(x);
    nn::Tensor ext({c, tp});
    const std::size_t period = 2 * t;
    for (std::size_t j = 0; j < tp; ++j) {
      std::size_t k = j % period;
      if (k >= t) k = period - 1 - k;
      for (std::size_t i = 0; i < c; ++i) ext[i * tp + j] = x[i * t + k];
    }
    const nn::Tensor y = g.infer(ext);
    nn::Tensor out({c, t});
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < t; ++j) out[i * t + j] = y[i * tp + j];
    return out;
  };
}

UtteranceFeatures convert_utterance_with(const UtteranceFeatures& u, const FeatureMap& spectrum,
                                         const FeatureMap& prosody, const SpeakerStats& src,
                                         const SpeakerStats& tgt, const ConvertOptions& opts) {
  require_dims(u, src, tgt);
  Matrix mcep = map_spectrum(u.mcep(), spectrum, src, tgt);

  const VoicingMask mask = voicing_of(u.f0());
  const auto norm = normalized_log_f0(u.f0(), src.f0, opts.per_utterance_norm);
  const CwtMatrix cwt = standardize_scales(decompose10(norm, u.frame_period_ms()), src.scales);
  const nn::Tensor in = to_channels(cwt.coeffs);
  const nn::Tensor out = prosody(in);
  if (out.shape() != in.shape())
    throw InvalidArgument("prosody map changed shape " + nn::shape_string(in.shape()) + " to " +
                          nn::shape_string(out.shape()));
  CwtMatrix mapped{from_channels(out), cwt.tau0_ms, cwt.frame_period_ms};
  const auto log_f0 = denormalize(recompose10(destandardize_scales(mapped, tgt.scales)), tgt.f0);
  std::vector<double> hz(log_f0.size());
  for (std::size_t t = 0; t < hz.size(); ++t) hz[t] = std::exp(log_f0[t]);
  std::vector<double> f0 = reapply_voicing(hz, mask);

  UtteranceFeatures result(u.frame_period_ms(), u.sample_rate_hz(), std::move(f0), std::move(mcep), u.ap());
  result.check_values();
  return result;
}

UtteranceFeatures convert_utterance(const UtteranceFeatures& u, const ConversionModels& m, Direction dir,
                                    const ConvertOptions& opts) {
  const bool xy = dir == Direction::kXtoY;
  return convert_utterance_with(u, generator_map(xy ? m.spectrum.g_xy : m.spectrum.g_yx),
                                generator_map(xy ? m.prosody.g_xy : m.prosody.g_yx), xy ? m.x : m.y,
                                xy ? m.y : m.x, opts);
}

UtteranceFeatures lg_convert_utterance(const UtteranceFeatures& u, const SpeakerStats& src, const SpeakerStats& tgt,
                                       const FeatureMap* spectrum) {
  if (spectrum != nullptr) require_dims(u, src, tgt);
  Matrix mcep = spectrum != nullptr ? map_spectrum(u.mcep(), *spectrum, src, tgt) : u.mcep();
  UtteranceFeatures result(u.frame_period_ms(), u.sample_rate_hz(), lg_convert(u.f0(), src.f0, tgt.f0),
                           std::move(mcep), u.ap());
  result.check_values();
  return result;
}

}  // namespace cwtvc
