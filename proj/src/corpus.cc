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

#include "cwtvc/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "cwtvc/kv_text.h"

namespace cwtvc {

namespace fs = std::filesystem;

std::string kind_name(FeatureKind kind) { return kind == FeatureKind::kSpectrum ? "spectrum" : "prosody"; }

FeatureKind parse_kind(const std::string& name) {
  if (name == "spectrum") return FeatureKind::kSpectrum;
  if (name == "prosody") return FeatureKind::kProsody;
  throw InvalidArgument("unknown feature kind '" + name + "' (expected spectrum or prosody)");
}

std::size_t SpeakerCorpus::channels(FeatureKind kind) const {
  return kind == FeatureKind::kSpectrum ? mcep_dim() : kNumScales;
}

const std::vector<nn::Tensor>& SpeakerCorpus::features(FeatureKind kind) const {
  return kind == FeatureKind::kSpectrum ? spectrum : prosody;
}

McepStats compute_mcep_stats(const std::vector<const Matrix*>& mceps) {
  if (mceps.empty()) throw InvalidArgument("compute_mcep_stats: no utterances");
  const std::size_t d = mceps.front()->cols();
  if (d == 0) throw InvalidArgument("compute_mcep_stats: zero-width MCEP");
  McepStats s{std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
  std::size_t n = 0;
  for (const Matrix* m : mceps) {
    if (m->cols() != d) throw InvalidArgument("compute_mcep_stats: MCEP widths differ");
    for (std::size_t t = 0; t < m->rows(); ++t)
      for (std::size_t k = 0; k < d; ++k) s.mean[k] += (*m)(t, k);
    n += m->rows();
  }
  for (double& v : s.mean) v /= static_cast<double>(n);
  for (const Matrix* m : mceps)
    for (std::size_t t = 0; t < m->rows(); ++t)
      for (std::size_t k = 0; k < d; ++k) {
        const double e = (*m)(t, k) - s.mean[k];
        s.std[k] += e * e;
      }
  for (std::size_t k = 0; k < d; ++k) {
    s.std[k] = std::sqrt(s.std[k] / static_cast<double>(n));
    if (!(s.std[k] > 0.0)) throw InvalidArgument("compute_mcep_stats: MCEP dimension " + std::to_string(k + 1) + " is constant");
  }
  return s;
}

namespace {

void check_mcep_stats(const McepStats& s, std::size_t d) {
  if (s.dim() != d || s.std.size() != d)
    throw InvalidArgument("MCEP stats have " + std::to_string(s.dim()) + " dimensions, features have " + std::to_string(d));
  for (std::size_t k = 0; k < d; ++k)
    if (!std::isfinite(s.mean[k]) || !(s.std[k] > 0.0) || !std::isfinite(s.std[k]))
      throw InvalidArgument("MCEP stats: dimension " + std::to_string(k + 1) + " needs finite mean and positive std");
}

}  // namespace

Matrix normalize_mcep(const Matrix& mcep, const McepStats& s) {
  check_mcep_stats(s, mcep.cols());
  Matrix out(mcep.rows(), mcep.cols());
  for (std::size_t t = 0; t < mcep.rows(); ++t)
    for (std::size_t k = 0; k < mcep.cols(); ++k) out(t, k) = (mcep(t, k) - s.mean[k]) / s.std[k];
  return out;
}

Matrix denormalize_mcep(const Matrix& norm, const McepStats& s) {
  check_mcep_stats(s, norm.cols());
  Matrix out(norm.rows(), norm.cols());
  for (std::size_t t = 0; t < norm.rows(); ++t)
    for (std::size_t k = 0; k < norm.cols(); ++k) out(t, k) = norm(t, k) * s.std[k] + s.mean[k];
  return out;
}

std::vector<double> normalized_log_f0(const std::vector<double>& f0_hz, const SpeakerF0Stats& speaker,
                                      bool per_utterance) {
  const ContinuousLogF0 cl = continuous_log_f0(f0_hz);
  SpeakerF0Stats stats = speaker;
  if (per_utterance) {
    const LogF0Utterance u{cl.values, &cl.mask};
    try {
      stats = compute_stats(std::span<const LogF0Utterance>(&u, 1));
    } catch (const InvalidArgument&) {
      // too few voiced frames or a flat contour: keep the speaker stats
    }
  }
  return normalize(cl.values, stats);
}

nn::Tensor to_channels(const Matrix& m) {
  nn::Tensor out({m.cols(), m.rows()});
  for (std::size_t t = 0; t < m.rows(); ++t)
    for (std::size_t c = 0; c < m.cols(); ++c) out[c * m.rows() + t] = m(t, c);
  return out;
}

Matrix from_channels(const nn::Tensor& x) {
  if (x.rank() != 2) throw InvalidArgument("from_channels: expected [C, T], got " + nn::shape_string(x.shape()));
  const std::size_t c = x.dim(0), t = x.dim(1);
  Matrix out(t, c);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < t; ++j) out(j, i) = x[i * t + j];
  return out;
}

SpeakerCorpus prepare_corpus(std::vector<NamedUtterance> utterances, const PrepareOptions& opts) {
  if (utterances.empty()) throw InvalidArgument("prepare_corpus: no utterances");
  SpeakerCorpus corpus;

  std::size_t width = 0;
  for (auto& u : utterances) {
    try {
      u.feat.check_values();
    } catch (const InvalidArgument& e) {
      corpus.rejected.push_back({u.id, e.what()});
      continue;
    }
    if (voicing_of(u.feat.f0()).count_voiced() == 0) {
      corpus.rejected.push_back({u.id, "no voiced frames"});
      continue;
    }
    if (width == 0) width = u.feat.mcep_dim();
    if (u.feat.mcep_dim() != width || width == 0) {
      corpus.rejected.push_back({u.id, "MCEP width " + std::to_string(u.feat.mcep_dim()) + " differs from " +
                                           std::to_string(width)});
      continue;
    }
    corpus.utterances.push_back(std::move(u));
  }
  if (corpus.utterances.empty())
    throw InvalidArgument("prepare_corpus: every utterance was rejected (first: " + corpus.rejected.front().id +
                          ": " + corpus.rejected.front().reason + ")");

  std::vector<ContinuousLogF0> logs;
  std::vector<LogF0Utterance> views;
  logs.reserve(corpus.utterances.size());
  for (const auto& u : corpus.utterances) logs.push_back(continuous_log_f0(u.feat.f0()));
  for (const auto& l : logs) views.push_back({l.values, &l.mask});
  corpus.stats.f0 = compute_stats(views);

  std::vector<CwtMatrix> cwts;
  cwts.reserve(logs.size());
  for (const auto& u : corpus.utterances) {
    const auto norm = normalized_log_f0(u.feat.f0(), corpus.stats.f0, opts.per_utterance_norm);
    cwts.push_back(decompose10(norm, u.feat.frame_period_ms(), opts.parallel_cwt));
  }
  corpus.stats.scales = compute_scale_stats(cwts);
  for (const auto& c : cwts) corpus.prosody.push_back(to_channels(standardize_scales(c, corpus.stats.scales).coeffs));

  std::vector<const Matrix*> mceps;
  for (const auto& u : corpus.utterances) mceps.push_back(&u.feat.mcep());
  corpus.stats.mcep = compute_mcep_stats(mceps);
  for (const auto& u : corpus.utterances) corpus.spectrum.push_back(to_channels(normalize_mcep(u.feat.mcep(), corpus.stats.mcep)));
  return corpus;
}

std::string render_mcep_stats(const McepStats& s) {
  std::string out = "# per-dimension MCEP statistics\ndim=" + std::to_string(s.dim()) + "\n";
  for (std::size_t k = 0; k < s.dim(); ++k) {
    out += "mean" + std::to_string(k + 1) + "=" + format_double(s.mean[k]) + "\n";
    out += "std" + std::to_string(k + 1) + "=" + format_double(s.std[k]) + "\n";
  }
  return out;
}

McepStats parse_mcep_stats(const std::string& text) {
  const auto kvs = parse_key_values(text);
  std::size_t d = 0;
  for (const auto& kv : kvs)
    if (kv.key == "dim") d = parse_uint(kv.key, kv.value);
  if (d == 0) throw InvalidArgument("mcep stats: missing or zero 'dim'");
  McepStats s{std::vector<double>(d), std::vector<double>(d)};
  std::vector<bool> seen(2 * d, false);
  for (const auto& kv : kvs) {
    if (kv.key == "dim") continue;
    const bool is_mean = kv.key.starts_with("mean");
    const bool is_std = kv.key.starts_with("std");
    std::size_t k = 0;
    if (is_mean || is_std) {
      const std::string idx = kv.key.substr(is_mean ? 4 : 3);
      k = idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos ? 0 : std::stoul(idx);
    }
    if (k == 0 || k > d) throw InvalidArgument("mcep stats: unknown key '" + kv.key + "'");
    (is_mean ? s.mean : s.std)[k - 1] = parse_double(kv.key, kv.value);
    seen[2 * (k - 1) + (is_mean ? 0 : 1)] = true;
  }
  for (bool b : seen)
    if (!b) throw InvalidArgument("mcep stats: every dimension needs a mean and a std");
  check_mcep_stats(s, d);
  return s;
}

void save_speaker_stats(const SpeakerStats& s, const std::string& dir, const std::string& prefix) {
  fs::create_directories(dir);
  const fs::path d(dir);
  save_f0_stats(s.f0, (d / (prefix + "stats.txt")).string());
  write_text_file((d / (prefix + "scale_stats.txt")).string(), render_scale_stats(s.scales));
  write_text_file((d / (prefix + "mcep_stats.txt")).string(), render_mcep_stats(s.mcep));
}

SpeakerStats load_speaker_stats(const std::string& dir, const std::string& prefix) {
  const fs::path d(dir);
  SpeakerStats s;
  s.f0 = load_f0_stats((d / (prefix + "stats.txt")).string());
  s.scales = parse_scale_stats(read_text_file((d / (prefix + "scale_stats.txt")).string()));
  s.mcep = parse_mcep_stats(read_text_file((d / (prefix + "mcep_stats.txt")).string()));
  return s;
}

std::vector<NamedUtterance> read_speaker_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".vcf") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .vcf files in " + dir);
  std::vector<NamedUtterance> out;
  for (const auto& f : files) out.push_back({f.stem().string(), load_features(f.string())});
  return out;
}

void write_speaker_dir(const std::vector<NamedUtterance>& utterances, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& u : utterances) save_features(u.feat, (fs::path(dir) / (u.id + ".vcf")).string());
}

std::string render_rejections(const std::vector<Rejection>& rejected) {
  std::string out;
  for (const auto& r : rejected) out += r.id + "\t" + r.reason + "\n";
  return out;
}

}  // namespace cwtvc
