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

#include "cwtvc/cyclegan.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "cwtvc/kv_text.h"
#include "cwtvc/nn/ops.h"

namespace cwtvc {

namespace {

using nn::Tape;
using nn::Tensor;
using nn::Var;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("GanHyper: " + what);
}

Var clamped_prob(Tape& tape, const MapFn& d, Var x, double delta) {
  Var p = d(tape, x);
  if (p.size() != 1) throw InvalidArgument("discriminator output must be a single value");
  return nn::clamp(p, delta, 1.0 - delta);
}

Var one_minus(Var p) { return nn::add_scalar(nn::scale(p, -1.0), 1.0); }

Var batch_mean(std::vector<Var>& terms) {
  Var acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = nn::add(acc, terms[i]);
  return nn::scale(acc, 1.0 / static_cast<double>(terms.size()));
}

void require_batch(std::span<const Var> b, const char* what) {
  if (b.empty()) throw InvalidArgument(std::string(what) + ": empty batch");
}

void check_finite(const char* what, double v, std::int64_t iter) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "training diverged at iteration " << iter << ": " << what << " = " << v;
    throw TrainingDiverged(os.str());
  }
}

MapFn bind(nn::Network& net, bool train) {
  return [&net, train](Tape& t, Var x) { return net.forward(t, x, train); };
}

}  // namespace

void GanHyper::validate() const {
  require(lambda_cyc >= 0.0 && std::isfinite(lambda_cyc), "lambda_cyc must be finite and >= 0");
  require(lambda_id >= 0.0 && std::isfinite(lambda_id), "lambda_id must be finite and >= 0");
  require(id_cutoff_iters >= 0, "id_cutoff_iters must be >= 0");
  require(lr_g >= 0.0 && std::isfinite(lr_g), "lr_g must be finite and >= 0");
  require(lr_d >= 0.0 && std::isfinite(lr_d), "lr_d must be finite and >= 0");
  require(const_iters >= 0, "const_iters must be >= 0");
  require(decay_iters > 0, "decay_iters must be > 0");
  require(beta1 >= 0.0 && beta1 < 1.0, "beta1 must lie in [0, 1)");
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  require(adam_eps > 0.0, "adam_eps must be > 0");
  require(crop_frames >= 1, "crop_frames must be >= 1");
  require(iterations >= 0, "iterations must be >= 0");
  require(prob_clamp > 0.0 && prob_clamp < 0.5, "prob_clamp must lie in (0, 0.5)");
}

LearningRates lr_schedule(std::int64_t iter, const GanHyper& h) {
  if (iter < 0) throw InvalidArgument("lr_schedule: negative iteration");
  double f = 1.0;
  if (iter >= h.const_iters) {
    const double into = static_cast<double>(iter - h.const_iters);
    f = std::max(0.0, 1.0 - into / static_cast<double>(h.decay_iters));
  }
  return {h.lr_g * f, h.lr_d * f};
}

double identity_weight(std::int64_t iter, const GanHyper& h) {
  return iter < h.id_cutoff_iters ? h.lambda_id : 0.0;
}

Var adv_loss(Tape& tape, const MapFn& d, std::span<const Var> real, std::span<const Var> fake, double delta) {
  require_batch(real, "adv_loss real");
  require_batch(fake, "adv_loss fake");
  std::vector<Var> r, f;
  for (const Var& x : real) r.push_back(nn::log(clamped_prob(tape, d, x, delta)));
  for (const Var& x : fake) f.push_back(nn::log(one_minus(clamped_prob(tape, d, x, delta))));
  return nn::add(batch_mean(r), batch_mean(f));
}

Var generator_adv_loss(Tape& tape, const MapFn& d, std::span<const Var> fake, AdvForm form, double delta) {
  require_batch(fake, "generator_adv_loss");
  std::vector<Var> terms;
  for (const Var& x : fake) {
    Var p = clamped_prob(tape, d, x, delta);
    terms.push_back(form == AdvForm::kNonSaturating ? nn::scale(nn::log(p), -1.0) : nn::log(one_minus(p)));
  }
  return batch_mean(terms);
}

Var cycle_loss(Tape& tape, const MapFn& g_xy, const MapFn& g_yx, std::span<const Var> x, std::span<const Var> y) {
  require_batch(x, "cycle_loss x");
  require_batch(y, "cycle_loss y");
  std::vector<Var> fx, fy;
  for (const Var& v : x) fx.push_back(nn::l1_mean(g_yx(tape, g_xy(tape, v)), v));
  for (const Var& v : y) fy.push_back(nn::l1_mean(g_xy(tape, g_yx(tape, v)), v));
  return nn::add(batch_mean(fx), batch_mean(fy));
}

Var identity_loss(Tape& tape, const MapFn& g_xy, const MapFn& g_yx, std::span<const Var> x,
                  std::span<const Var> y) {
  require_batch(x, "identity_loss x");
  require_batch(y, "identity_loss y");
  std::vector<Var> fx, fy;
  for (const Var& v : x) fx.push_back(nn::l1_mean(g_yx(tape, v), v));
  for (const Var& v : y) fy.push_back(nn::l1_mean(g_xy(tape, v), v));
  return nn::add(batch_mean(fx), batch_mean(fy));
}

ModelPair ModelPair::create(const nn::GenConfig& gen, const nn::DiscConfig& disc, std::uint64_t seed,
                            const nn::AdamConfig& adam) {
  if (gen.channels != disc.channels) throw InvalidArgument("generator and discriminator channel counts differ");
  return ModelPair{nn::Generator(gen, nn::derive_seed(seed, 1)),
                   nn::Generator(gen, nn::derive_seed(seed, 2)),
                   nn::Discriminator(disc, nn::derive_seed(seed, 3)),
                   nn::Discriminator(disc, nn::derive_seed(seed, 4)),
                   nn::AdamState{adam, {}, {}, 0},
                   nn::AdamState{adam, {}, {}, 0},
                   nn::AdamState{adam, {}, {}, 0},
                   nn::AdamState{adam, {}, {}, 0}};
}

DiscriminatorObjective discriminator_objective(Tape& tape, ModelPair& m, Var x, Var y, Var fake_x, Var fake_y,
                                               const GanHyper& h) {
  const Var xs[] = {x}, ys[] = {y}, fxs[] = {fake_x}, fys[] = {fake_y};
  Var adv = nn::add(adv_loss(tape, bind(m.d_y, true), ys, fys, h.prob_clamp),
                    adv_loss(tape, bind(m.d_x, true), xs, fxs, h.prob_clamp));
  return {adv, nn::scale(adv, -1.0)};
}

GeneratorObjective generator_objective(Tape& tape, ModelPair& m, Var x, Var y, const GanHyper& h,
                                       double lambda_id) {
  const MapFn gxy = bind(m.g_xy, true);
  const MapFn gyx = bind(m.g_yx, true);
  const Var fake_y[] = {gxy(tape, x)};
  const Var fake_x[] = {gyx(tape, y)};
  GeneratorObjective obj;
  obj.adv = nn::add(generator_adv_loss(tape, bind(m.d_y, false), fake_y, h.adv_form, h.prob_clamp),
                    generator_adv_loss(tape, bind(m.d_x, false), fake_x, h.adv_form, h.prob_clamp));
  // Reuses the translated crops rather than re-running G on x and y.
  obj.cyc = nn::add(nn::l1_mean(gyx(tape, fake_y[0]), x), nn::l1_mean(gxy(tape, fake_x[0]), y));
  obj.total = nn::add(obj.adv, nn::scale(obj.cyc, h.lambda_cyc));
  if (lambda_id > 0.0) {
    const Var xs[] = {x}, ys[] = {y};
    obj.id = identity_loss(tape, gxy, gyx, xs, ys);
    obj.total = nn::add(obj.total, nn::scale(obj.id, lambda_id));
  }
  return obj;
}

LossReport train_step(ModelPair& m, const Tensor& x_crop, const Tensor& y_crop, const GanHyper& h,
                      std::int64_t iter) {
  LossReport rep;
  rep.iter = iter;
  const LearningRates lr = lr_schedule(iter, h);
  rep.lr_g = lr.g;
  rep.lr_d = lr.d;
  const double lam_id = identity_weight(iter, h);

  // Discriminators against frozen generator outputs.
  {
    const Tensor fake_y = m.g_xy.infer(x_crop);
    const Tensor fake_x = m.g_yx.infer(y_crop);
    m.d_x.zero_grad();
    m.d_y.zero_grad();
    Tape tape;
    const auto obj = discriminator_objective(tape, m, tape.constant(x_crop), tape.constant(y_crop),
                                             tape.constant(fake_x), tape.constant(fake_y), h);
    rep.adv_d = obj.adv.value().item();
    rep.total_d = obj.total.value().item();
    check_finite("total_d", rep.total_d, iter);
    tape.backward(obj.total);
    nn::adam_step(m.d_x.parameters(), m.opt_d_x, lr.d);
    nn::adam_step(m.d_y.parameters(), m.opt_d_y, lr.d);
  }

  // Generators against the updated, frozen discriminators.
  {
    m.g_xy.zero_grad();
    m.g_yx.zero_grad();
    Tape tape;
    const auto obj = generator_objective(tape, m, tape.constant(x_crop), tape.constant(y_crop), h, lam_id);
    rep.adv_g = obj.adv.value().item();
    rep.cyc = obj.cyc.value().item();
    rep.id = obj.id.valid() ? obj.id.value().item() : 0.0;
    rep.total_g = obj.total.value().item();
    check_finite("total_g", rep.total_g, iter);
    tape.backward(obj.total);
    nn::adam_step(m.g_xy.parameters(), m.opt_g_xy, lr.g);
    nn::adam_step(m.g_yx.parameters(), m.opt_g_yx, lr.g);
  }
  return rep;
}

Tensor sample_crop(const Tensor& features, std::size_t crop_frames, std::mt19937_64& rng) {
  if (features.rank() != 2) throw InvalidArgument("sample_crop: expected [C, T], got " + nn::shape_string(features.shape()));
  if (crop_frames == 0) throw InvalidArgument("sample_crop: crop_frames must be positive");
  const std::size_t c = features.dim(0), t = features.dim(1);
  Tensor out({c, crop_frames});
  if (t >= crop_frames) {
    std::uniform_int_distribution<std::size_t> pick(0, t - crop_frames);
    const std::size_t start = pick(rng);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < crop_frames; ++j) out[i * crop_frames + j] = features[i * t + start + j];
    return out;
  }
  const std::size_t period = 2 * t;
  for (std::size_t j = 0; j < crop_frames; ++j) {
    std::size_t k = j % period;
    if (k >= t) k = period - 1 - k;
    for (std::size_t i = 0; i < c; ++i) out[i * crop_frames + j] = features[i * t + k];
  }
  return out;
}

std::string loss_csv_header() { return "iter,adv_g,adv_d,cyc,id,total_g,total_d,lr_g,lr_d"; }

std::string loss_csv_row(const LossReport& r) {
  std::string s = std::to_string(r.iter);
  for (double v : {r.adv_g, r.adv_d, r.cyc, r.id, r.total_g, r.total_d, r.lr_g, r.lr_d}) {
    s += ',';
    s += format_double(v);
  }
  return s;
}

}  // namespace cwtvc
