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

#include "cwtvc/cli.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <thread>

#include "cwtvc/corpus.h"
#include "cwtvc/gradcheck_suite.h"
#include "cwtvc/kv_text.h"
#include "cwtvc/metrics.h"
#include "cwtvc/pipeline.h"
#include "cwtvc/synth.h"

namespace cwtvc {

namespace fs = std::filesystem;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const Config& config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VC_SEED"); env != nullptr && *env != '\0') return parse_uint("VC_SEED", env);
  return config.hyper.seed;
}

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  Config config() const {
    Config c = config_path.empty() ? Config{} : load_config(config_path);
    c.hyper.seed = resolve_seed(seed, c);
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "key=value configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "random seed (overrides VC_SEED and the config)");
}

// Own log-F0 stats of one utterance, for the stand-alone CWT commands.
SpeakerF0Stats utterance_stats(const UtteranceFeatures& u) {
  const ContinuousLogF0 cl = continuous_log_f0(u.f0());
  const LogF0Utterance view{cl.values, &cl.mask};
  return compute_stats(std::span<const LogF0Utterance>(&view, 1));
}

SpeakerF0Stats cwt_stats(const UtteranceFeatures& u, const std::string& stats_dir) {
  return stats_dir.empty() ? utterance_stats(u) : load_f0_stats((fs::path(stats_dir) / "stats.txt").string());
}

// Files to convert: a single .vcf, or every .vcf of a directory.
std::vector<std::pair<std::string, std::string>> io_pairs(const std::string& in, const std::string& out) {
  if (!fs::is_directory(in)) return {{in, out}};
  fs::create_directories(out);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& u : fs::directory_iterator(in))
    if (u.is_regular_file() && u.path().extension() == ".vcf")
      pairs.emplace_back(u.path().string(), (fs::path(out) / u.path().filename()).string());
  std::sort(pairs.begin(), pairs.end());
  if (pairs.empty()) throw IoError("no .vcf files in " + in);
  return pairs;
}

int cmd_synth(const Common& common, const std::string& out_dir, std::ostream& out) {
  const Config c = common.config();
  const auto [x, y] = synthesize_corpus(c.synth, c.hyper.seed);
  write_speaker_dir(x, (fs::path(out_dir) / "x").string());
  write_speaker_dir(y, (fs::path(out_dir) / "y").string());
  out << "x_utterances=" << x.size() << "\ny_utterances=" << y.size() << "\nseed=" << c.hyper.seed << "\n";
  return 0;
}

int cmd_prep(const Common& common, const std::string& dir, const std::string& dump, std::ostream& out) {
  const Config c = common.config();
  const SpeakerCorpus corpus = prepare_corpus(read_speaker_dir(dir), {c.per_utterance_norm, false});
  save_speaker_stats(corpus.stats, dir);
  write_text_file((fs::path(dir) / "rejects.txt").string(), render_rejections(corpus.rejected));
  if (!dump.empty()) {
    fs::create_directories(dump);
    for (std::size_t i = 0; i < corpus.utterances.size(); ++i) {
      const CwtMatrix m{from_channels(corpus.prosody[i]), kTau0Ms, corpus.utterances[i].feat.frame_period_ms()};
      write_text_file((fs::path(dump) / (corpus.utterances[i].id + ".cwt.csv")).string(), render_cwt_csv(m));
    }
  }
  out << "utterances=" << corpus.utterances.size() << "\nrejected=" << corpus.rejected.size()
      << "\nlogf0_mean=" << format_double(corpus.stats.f0.mean) << "\nlogf0_std=" << format_double(corpus.stats.f0.std)
      << "\n";
  return 0;
}

int cmd_cwt_analyze(const std::string& in, const std::string& out_csv, const std::string& stats_dir) {
  const UtteranceFeatures u = load_features(in);
  const auto norm = normalize(continuous_log_f0(u.f0()).values, cwt_stats(u, stats_dir));
  write_text_file(out_csv, render_cwt_csv(decompose10(norm, u.frame_period_ms())));
  return 0;
}

int cmd_cwt_synth(const std::string& in_csv, const std::string& ref_path, const std::string& out_path,
                  const std::string& stats_dir) {
  const UtteranceFeatures ref = load_features(ref_path);
  const CwtMatrix m = parse_cwt_csv(read_text_file(in_csv), ref.frame_period_ms());
  if (m.frames() != ref.frames())
    throw InvalidArgument("CSV has " + std::to_string(m.frames()) + " frames, reference has " +
                          std::to_string(ref.frames()));
  const auto log_f0 = denormalize(recompose10(m), cwt_stats(ref, stats_dir));
  std::vector<double> hz(log_f0.size());
  for (std::size_t t = 0; t < hz.size(); ++t) hz[t] = std::exp(log_f0[t]);
  const UtteranceFeatures result(ref.frame_period_ms(), ref.sample_rate_hz(), reapply_voicing(hz, voicing_of(ref.f0())),
                                 ref.mcep(), ref.ap());
  save_features(result, out_path);
  return 0;
}

int cmd_train(const Common& common, const std::string& x_dir, const std::string& y_dir, const std::string& model,
              const std::string& kind, std::optional<std::int64_t> iterations, std::ostream& out) {
  Config c = common.config();
  if (iterations) c.hyper.iterations = *iterations;
  c.validate();
  std::vector<FeatureKind> kinds;
  if (kind == "both") kinds = {FeatureKind::kSpectrum, FeatureKind::kProsody};
  else kinds = {parse_kind(kind)};

  const PrepareOptions prep{c.per_utterance_norm, false};
  const SpeakerCorpus x = prepare_corpus(read_speaker_dir(x_dir), prep);
  const SpeakerCorpus y = prepare_corpus(read_speaker_dir(y_dir), prep);
  if (x.mcep_dim() != y.mcep_dim()) throw InvalidArgument("speakers have different MCEP widths");

  fs::create_directories(model);
  write_text_file((fs::path(model) / "hyper.cfg").string(), render_config(c));
  save_speaker_stats(x.stats, model, "x_");
  save_speaker_stats(y.stats, model, "y_");

  const TrainOptions opts{model, c.log_every, c.checkpoint_every, nullptr};
  std::vector<LossReport> last(kinds.size());
  std::vector<std::exception_ptr> failures(kinds.size());
  auto job = [&](std::size_t i) {
    try {
      TrainOptions o = opts;
      o.on_report = [&last, i](const LossReport& r) { last[i] = r; };
      train_pipeline(x, y, kinds[i], c.hyper, c.gen, c.disc, o);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (kinds.size() == 1) {
    job(0);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < kinds.size(); ++i) threads.emplace_back(job, i);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  for (std::size_t i = 0; i < kinds.size(); ++i)
    out << kind_name(kinds[i]) << ": iterations=" << c.hyper.iterations << " cyc=" << format_double(last[i].cyc)
        << " total_g=" << format_double(last[i].total_g) << " total_d=" << format_double(last[i].total_d) << "\n";
  return 0;
}

int cmd_convert(const std::string& model, const std::string& in, const std::string& out_path,
                const std::string& direction, std::ostream& out) {
  const Direction dir = parse_direction(direction);
  const ConversionModels m = load_conversion_models(model);
  const auto pairs = io_pairs(in, out_path);
  for (const auto& [src, dst] : pairs)
    save_features(convert_utterance(load_features(src), m, dir, {m.config.per_utterance_norm}), dst);
  out << "converted=" << pairs.size() << "\n";
  return 0;
}

int cmd_lg_convert(const std::string& model, const std::string& in, const std::string& out_path,
                   const std::string& direction, bool passthrough, std::ostream& out) {
  const bool xy = parse_direction(direction) == Direction::kXtoY;
  std::optional<ConversionModels> m;
  SpeakerStats sx, sy;
  if (passthrough) {
    sx = load_speaker_stats(model, "x_");
    sy = load_speaker_stats(model, "y_");
  } else {
    m = load_conversion_models(model);
    sx = m->x;
    sy = m->y;
  }
  std::optional<FeatureMap> spectrum;
  if (m) spectrum = generator_map(xy ? m->spectrum.g_xy : m->spectrum.g_yx);
  const auto pairs = io_pairs(in, out_path);
  for (const auto& [src, dst] : pairs)
    save_features(lg_convert_utterance(load_features(src), xy ? sx : sy, xy ? sy : sx, spectrum ? &*spectrum : nullptr),
                  dst);
  out << "converted=" << pairs.size() << "\n";
  return 0;
}

int cmd_eval(const std::string& ref, const std::string& hyp, std::ostream& out) {
  const Metrics m = metrics(load_features(ref), load_features(hyp));
  out << "mcd_db=" << format_double(m.mcd_db) << "\nf0_rmse_hz=" << format_double(m.f0_rmse_hz)
      << "\nf0_corr=" << format_double(m.f0_corr) << "\nvoiced_frames=" << m.voiced_frames << "\n";
  return 0;
}

int cmd_gradcheck(std::uint64_t seed, std::size_t seeds, std::size_t max_coords, double tol, std::ostream& out) {
  bool ok = true;
  for (std::uint64_t s = seed; s < seed + seeds; ++s) {
    auto results = op_gradchecks(s);
    for (auto& r : objective_gradchecks(s, max_coords)) results.push_back(r);
    for (const auto& r : results) {
      const bool pass = r.max_rel_error <= tol;
      ok = ok && pass;
      out << r.name << " seed=" << s << " max_rel_error=" << format_double(r.max_rel_error) << " coords=" << r.coords
          << " kinks=" << r.kinks << " " << (pass ? "PASS" : "FAIL") << "\n";
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CWT prosody and CycleGAN voice-conversion feature toolkit", "vctool"};
  app.require_subcommand(1);

  Common common;
  std::string out_dir, dir, dump, in, out_file, ref, hyp, stats_dir, x_dir, y_dir, model, kind, direction;
  std::optional<std::int64_t> iterations;
  bool passthrough = false;
  std::uint64_t gc_seed = 1;
  std::size_t gc_seeds = 5, gc_coords = 0;
  double gc_tol = 1e-4;

  auto* synth = app.add_subcommand("synth-data", "write a synthetic two-speaker corpus (<out>/x, <out>/y)");
  synth->add_option("--out", out_dir, "output directory")->required();
  add_common(synth, common);

  auto* prep = app.add_subcommand("prep", "compute speaker statistics and the reject report");
  prep->add_option("--speaker", dir, "speaker directory of .vcf files")->required()->check(CLI::ExistingDirectory);
  prep->add_option("--dump", dump, "directory for standardised CWT coefficient CSVs");
  add_common(prep, common);

  auto* analyze = app.add_subcommand("cwt-analyze", "10-scale CWT of normalised log-F0 as CSV");
  analyze->add_option("--in", in, "input .vcf")->required()->check(CLI::ExistingFile);
  analyze->add_option("--out", out_file, "output CSV")->required();
  analyze->add_option("--stats", stats_dir, "speaker directory holding stats.txt (default: the utterance's own)");

  auto* csynth = app.add_subcommand("cwt-synth", "recompose a CWT CSV into F0 on a reference utterance");
  csynth->add_option("--in", in, "input CSV")->required()->check(CLI::ExistingFile);
  csynth->add_option("--ref", ref, "reference .vcf (voicing, MCEP, AP, stats)")->required()->check(CLI::ExistingFile);
  csynth->add_option("--out", out_file, "output .vcf")->required();
  csynth->add_option("--stats", stats_dir, "speaker directory holding stats.txt (default: the reference's own)");

  auto* train = app.add_subcommand("train", "train the spectrum and/or prosody CycleGAN");
  train->add_option("--x", x_dir, "source speaker directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--y", y_dir, "target speaker directory")->required()->check(CLI::ExistingDirectory);
  train->add_option("--model", model, "model directory")->required();
  train->add_option("--kind", kind, "spectrum, prosody or both")
      ->required()
      ->check(CLI::IsMember({"spectrum", "prosody", "both"}));
  train->add_option("--iterations", iterations, "override the configured iteration count");
  add_common(train, common);

  auto* convert = app.add_subcommand("convert", "convert utterances with trained models");
  convert->add_option("--model", model, "model directory")->required()->check(CLI::ExistingDirectory);
  convert->add_option("--in", in, "input .vcf or directory")->required()->check(CLI::ExistingPath);
  convert->add_option("--out", out_file, "output .vcf or directory")->required();
  convert->add_option("--direction", direction, "x2y or y2x")->required()->check(CLI::IsMember({"x2y", "y2x"}));

  auto* lg = app.add_subcommand("lg-convert", "log-Gaussian F0 baseline");
  lg->add_option("--model", model, "model directory (stats, and the spectrum generator)")
      ->required()
      ->check(CLI::ExistingDirectory);
  lg->add_option("--in", in, "input .vcf or directory")->required()->check(CLI::ExistingPath);
  lg->add_option("--out", out_file, "output .vcf or directory")->required();
  lg->add_option("--direction", direction, "x2y or y2x")->required()->check(CLI::IsMember({"x2y", "y2x"}));
  lg->add_flag("--passthrough", passthrough, "copy MCEP instead of running the spectrum generator");

  auto* eval = app.add_subcommand("eval", "MCD, F0 RMSE and F0 correlation of two utterances");
  eval->add_option("--ref", ref, "reference .vcf")->required()->check(CLI::ExistingFile);
  eval->add_option("--hyp", hyp, "hypothesis .vcf")->required()->check(CLI::ExistingFile);

  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of every op and both objectives");
  gc->add_option("--seed", gc_seed, "first seed");
  gc->add_option("--seeds", gc_seeds, "number of seeds");
  gc->add_option("--max-coords", gc_coords, "coordinates sampled per tensor in the objectives (0: all)");
  gc->add_option("--tol", gc_tol, "maximum relative error");

  if (!args.empty() && !args[0].starts_with('-') && app.get_subcommand_no_throw(args[0]) == nullptr) {
    err << "error: unknown subcommand '" << args[0] << "'\n" << app.help();
    return 2;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*synth) return cmd_synth(common, out_dir, out);
    if (*prep) return cmd_prep(common, dir, dump, out);
    if (*analyze) return cmd_cwt_analyze(in, out_file, stats_dir);
    if (*csynth) return cmd_cwt_synth(in, ref, out_file, stats_dir);
    if (*train) return cmd_train(common, x_dir, y_dir, model, kind, iterations, out);
    if (*convert) return cmd_convert(model, in, out_file, direction, out);
    if (*lg) return cmd_lg_convert(model, in, out_file, direction, passthrough, out);
    if (*eval) return cmd_eval(ref, hyp, out);
    if (*gc) return cmd_gradcheck(gc_seed, gc_seeds, gc_coords, gc_tol, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cwtvc
