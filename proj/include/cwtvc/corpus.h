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

// Speaker corpora: per-utterance preprocessing into the two network input
// kinds and the speaker-level statistics that undo it.

#include <cstddef>
#include <string>
#include <vector>

#include "cwtvc/cwt.h"
#include "cwtvc/f0.h"
#include "cwtvc/features.h"
#include "cwtvc/nn/tensor.h"

namespace cwtvc {

enum class FeatureKind { kSpectrum, kProsody };

std::string kind_name(FeatureKind kind);
FeatureKind parse_kind(const std::string& name);

struct NamedUtterance {
  std::string id;
  UtteranceFeatures feat;
};

/// Per-dimension MCEP mean and population std over all frames.
struct McepStats {
  std::vector<double> mean;
  std::vector<double> std;

  std::size_t dim() const { return mean.size(); }
};

struct SpeakerStats {
  SpeakerF0Stats f0;
  ScaleStats scales;
  McepStats mcep;
};

struct Rejection {
  std::string id;
  std::string reason;
};

struct PrepareOptions {
  /// Normalise each utterance's log-F0 by its own voiced mean and std
  /// instead of the speaker's. Utterances with fewer than two distinct
  /// voiced values fall back to the speaker stats.
  bool per_utterance_norm = false;
  bool parallel_cwt = false;
};

struct SpeakerCorpus {
  std::vector<NamedUtterance> utterances;  // accepted, input order
  SpeakerStats stats;
  std::vector<nn::Tensor> spectrum;  // [D_mcep, T], z-normalised per dimension
  std::vector<nn::Tensor> prosody;   // [10, T], standardised CWT coefficients
  std::vector<Rejection> rejected;

  std::size_t mcep_dim() const { return stats.mcep.dim(); }
  std::size_t channels(FeatureKind kind) const;
  const std::vector<nn::Tensor>& features(FeatureKind kind) const;
};

/// interpolate -> log -> normalize -> decompose10 -> standardize_scales for
/// F0, per-dimension z-normalisation for MCEP. Utterances that are all
/// unvoiced, hold non-finite values or disagree on MCEP width are listed
/// in `rejected`. Throws if nothing is left.
SpeakerCorpus prepare_corpus(std::vector<NamedUtterance> utterances, const PrepareOptions& opts = {});

McepStats compute_mcep_stats(const std::vector<const Matrix*>& mceps);
Matrix normalize_mcep(const Matrix& mcep, const McepStats& s);
Matrix denormalize_mcep(const Matrix& norm, const McepStats& s);

/// Normalised log-F0 of one utterance: continuous_log_f0 then normalize.
/// `per_utterance` selects the utterance's own stats when usable.
std::vector<double> normalized_log_f0(const std::vector<double>& f0_hz, const SpeakerF0Stats& speaker,
                                      bool per_utterance);

/// [rows, cols] matrix to a [cols, rows] tensor and back.
nn::Tensor to_channels(const Matrix& frames_by_dim);
Matrix from_channels(const nn::Tensor& channels_by_frames);

// Text forms. mcep_stats: "dim=<n>" then "mean<d>=", "std<d>=" for d = 1..n.
std::string render_mcep_stats(const McepStats& s);
McepStats parse_mcep_stats(const std::string& text);

/// Writes stats.txt, scale_stats.txt and mcep_stats.txt into `dir`, each
/// name prefixed by `prefix`.
void save_speaker_stats(const SpeakerStats& s, const std::string& dir, const std::string& prefix = "");
SpeakerStats load_speaker_stats(const std::string& dir, const std::string& prefix = "");

/// All `<dir>/*.vcf` sorted by file name; ids are the file stems.
std::vector<NamedUtterance> read_speaker_dir(const std::string& dir);
/// Writes `<dir>/<id>.vcf` for every utterance, creating `dir`.
void write_speaker_dir(const std::vector<NamedUtterance>& utterances, const std::string& dir);

std::string render_rejections(const std::vector<Rejection>& rejected);

}  // namespace cwtvc
