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

// Training the spectrum and prosody CycleGANs, model directories and
// run-time conversion.

#include <cstdint>
#include <functional>
#include <string>

#include "cwtvc/config.h"
#include "cwtvc/corpus.h"
#include "cwtvc/cyclegan.h"

namespace cwtvc {

struct TrainOptions {
  /// Checkpoints and `<kind>_losses.csv` go here; empty writes nothing.
  std::string out_dir;
  std::int64_t log_every = 1;
  /// 0 checkpoints only after the last iteration.
  std::int64_t checkpoint_every = 0;
  /// Called after every iteration.
  std::function<void(const LossReport&)> on_report;
};

/// The initial ModelPair train_pipeline starts from.
ModelPair init_model_pair(FeatureKind kind, std::size_t channels, const GanHyper& h, nn::GenConfig gen,
                          nn::DiscConfig disc);

/// h.iterations train_step calls, each on an independent random crop from
/// each corpus. On divergence the loss log is flushed, the last written
/// checkpoint is left in place and TrainingDiverged propagates.
ModelPair train_pipeline(const SpeakerCorpus& x, const SpeakerCorpus& y, FeatureKind kind, const GanHyper& h,
                         const nn::GenConfig& gen, const nn::DiscConfig& disc, const TrainOptions& opts = {});

/// `<dir>/<kind>_{gxy,gyx,dx,dy}.vcm`.
void save_model_pair(const ModelPair& m, FeatureKind kind, const std::string& dir);
void load_model_pair(ModelPair& m, FeatureKind kind, const std::string& dir);

enum class Direction { kXtoY, kYtoX };
Direction parse_direction(const std::string& s);

struct ConversionModels {
  Config config;
  ModelPair spectrum;
  ModelPair prosody;
  SpeakerStats x;
  SpeakerStats y;
};

/// Builds untrained networks sized for the two speakers' stats.
ConversionModels make_conversion_models(const Config& config, const SpeakerStats& x, const SpeakerStats& y);

/// hyper.cfg, x_/y_ stats files and both kinds' checkpoints.
void save_conversion_models(const ConversionModels& m, const std::string& dir);
ConversionModels load_conversion_models(const std::string& dir);

/// Maps a [C, T] tensor to [C, T].
using FeatureMap = std::function<nn::Tensor(const nn::Tensor&)>;

/// Runs the generator in inference mode, mirror-extending T to a multiple
/// of its time factor and cropping the output back.
FeatureMap generator_map(const nn::Generator& g);

struct ConvertOptions {
  bool per_utterance_norm = false;
};

/// Spectrum: z-normalise with src, map, de-normalise with tgt. F0:
/// interpolate, log, normalise (src), decompose10, standardise (src), map,
/// destandardise (tgt), recompose10, denormalise (tgt), exp, source voicing.
/// AP is copied.
UtteranceFeatures convert_utterance_with(const UtteranceFeatures& u, const FeatureMap& spectrum,
                                         const FeatureMap& prosody, const SpeakerStats& src,
                                         const SpeakerStats& tgt, const ConvertOptions& opts = {});

UtteranceFeatures convert_utterance(const UtteranceFeatures& u, const ConversionModels& m, Direction dir,
                                    const ConvertOptions& opts = {});

/// Log-Gaussian F0 transform; MCEP through `spectrum` (with the same
/// normalisation as convert_utterance_with) or copied when it is null.
UtteranceFeatures lg_convert_utterance(const UtteranceFeatures& u, const SpeakerStats& src, const SpeakerStats& tgt,
                                       const FeatureMap* spectrum = nullptr);

}  // namespace cwtvc
