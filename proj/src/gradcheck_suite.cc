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

#include "cwtvc/gradcheck_suite.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "cwtvc/cyclegan.h"
#include "cwtvc/nn/ops.h"

namespace cwtvc {

namespace {

using nn::GradCheckOptions;
using nn::GradCheckResult;
using nn::Parameter;
using nn::Shape;
using nn::Tape;
using nn::Tensor;
using nn::Var;

using Draw = std::function<double(std::mt19937_64&)>;

double normal(std::mt19937_64& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

// Standard normal redrawn until |x - k| >= margin for every kink k.
Draw away_from(std::vector<double> kinks, double margin = 0.05) {
  return [kinks, margin](std::mt19937_64& rng) {
    for (;;) {
      const double v = 1.5 * normal(rng);
      bool ok = true;
      for (double k : kinks) ok = ok && std::abs(v - k) >= margin;
      if (ok) return v;
    }
  };
}

Parameter make(const std::string& name, Shape shape, std::mt19937_64& rng, const Draw& draw = normal) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = draw(rng);
  return {name, t, Tensor(t.shape())};
}

using OpFn = std::function<Var(Tape&, std::vector<Var>&)>;

GradCheckResult check_op(const std::string& name, std::vector<Parameter> ps, const OpFn& op, std::mt19937_64& rng,
                         const GradCheckOptions& opts) {
  auto bind_all = [&ps](Tape& t) {
    std::vector<Var> v;
    for (auto& p : ps) v.push_back(t.param(p));
    return v;
  };
  Shape out_shape;
  {
    Tape t(false);
    auto v = bind_all(t);
    out_shape = op(t, v).shape();
  }
  // A random projection makes every output element matter.
  Tensor r(out_shape);
  for (double& v : r.values()) v = normal(rng);
  std::vector<Parameter*> ptrs;
  for (auto& p : ps) ptrs.push_back(&p);
  return nn::check_gradients(name, ptrs,
                             [&](Tape& t) {
                               auto v = bind_all(t);
                               return nn::sum(nn::mul(op(t, v), t.constant(r)));
                             },
                             opts);
}

}  // namespace

std::vector<GradCheckResult> op_gradchecks(std::uint64_t seed, const GradCheckOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<GradCheckResult> out;
  auto run = [&](const std::string& name, std::vector<Parameter> ps, const OpFn& op) {
    out.push_back(check_op(name, std::move(ps), op, rng, opts));
  };
  auto positive = [](std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.5, 2.0)(g); };

  run("add", {make("a", {3, 4}, rng), make("b", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::add(v[0], v[1]); });
  run("sub", {make("a", {3, 4}, rng), make("b", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::sub(v[0], v[1]); });
  run("mul", {make("a", {3, 4}, rng), make("b", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::mul(v[0], v[1]); });
  run("add_scalar", {make("a", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::add_scalar(v[0], 0.7); });
  run("scale", {make("a", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::scale(v[0], -1.3); });
  run("sigmoid", {make("x", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::sigmoid(v[0]); });
  run("leaky_relu", {make("x", {3, 4}, rng, away_from({0.0}))}, [](Tape&, auto& v) { return nn::leaky_relu(v[0]); });
  run("log", {make("x", {3, 4}, rng, positive)}, [](Tape&, auto& v) { return nn::log(v[0]); });
  run("clamp", {make("x", {3, 4}, rng, away_from({-1.0, 1.0}))},
      [](Tape&, auto& v) { return nn::clamp(v[0], -1.0, 1.0); });
  run("sum", {make("x", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::sum(v[0]); });
  run("mean", {make("x", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::mean(v[0]); });
  {
    Parameter a = make("a", {3, 4}, rng);
    Parameter b = a;
    b.name = "b";
    std::uniform_real_distribution<double> gap(0.1, 1.0);
    std::bernoulli_distribution sign(0.5);
    for (double& x : b.value.values()) x += (sign(rng) ? 1.0 : -1.0) * gap(rng);
    run("l1_mean", {a, b}, [](Tape&, auto& v) { return nn::l1_mean(v[0], v[1]); });
  }
  run("reshape", {make("x", {3, 4}, rng)}, [](Tape&, auto& v) { return nn::reshape(v[0], {2, 6}); });
  run("concat", {make("a", {2, 4}, rng), make("b", {3, 4}, rng)}, [](Tape&, auto& v) {
    const Var parts[] = {v[0], v[1]};
    return nn::concat(parts);
  });
  run("glu", {make("x", {4, 5}, rng)}, [](Tape&, auto& v) { return nn::glu(v[0]); });
  run("conv1d", {make("x", {3, 9}, rng), make("w", {4, 3, 5}, rng), make("b", {4}, rng)},
      [](Tape&, auto& v) { return nn::conv1d(v[0], v[1], v[2], 1, 2); });
  run("conv1d_stride2", {make("x", {3, 10}, rng), make("w", {4, 3, 5}, rng), make("b", {4}, rng)},
      [](Tape&, auto& v) { return nn::conv1d(v[0], v[1], v[2], 2, 2); });
  run("conv2d", {make("x", {2, 6, 7}, rng), make("w", {3, 2, 3, 3}, rng), make("b", {3}, rng)},
      [](Tape&, auto& v) { return nn::conv2d(v[0], v[1], v[2], {1, 1}, {1, 1}); });
  run("conv2d_stride2", {make("x", {2, 6, 7}, rng), make("w", {3, 2, 3, 3}, rng), make("b", {3}, rng)},
      [](Tape&, auto& v) { return nn::conv2d(v[0], v[1], v[2], {2, 2}, {1, 1}); });
  run("pixel_shuffle1d", {make("x", {6, 4}, rng)}, [](Tape&, auto& v) { return nn::pixel_shuffle1d(v[0], 2); });
  run("instance_norm", {make("x", {3, 6}, rng), make("gamma", {3}, rng), make("beta", {3}, rng)},
      [](Tape&, auto& v) { return nn::instance_norm(v[0], v[1], v[2]); });
  run("instance_norm_2d", {make("x", {2, 3, 4}, rng), make("gamma", {2}, rng), make("beta", {2}, rng)},
      [](Tape&, auto& v) { return nn::instance_norm(v[0], v[1], v[2]); });
  run("dense", {make("x", {2, 3}, rng), make("w", {4, 6}, rng), make("b", {4}, rng)},
      [](Tape&, auto& v) { return nn::dense(v[0], v[1], v[2]); });
  run("channel_mean", {make("x", {3, 5}, rng)}, [](Tape&, auto& v) { return nn::channel_mean(v[0]); });
  return out;
}

std::vector<GradCheckResult> objective_gradchecks(std::uint64_t seed, std::size_t max_coords,
                                                  const GradCheckOptions& base) {
  nn::GenConfig g;
  g.channels = 16;
  g.width = 4;
  g.n_res = 1;
  g.init_std = 0.3;
  nn::DiscConfig d;
  d.channels = 16;
  d.width = 4;
  d.init_std = 0.3;
  ModelPair m = ModelPair::create(g, d, seed);

  std::mt19937_64 rng(nn::derive_seed(seed, 7));
  auto data = [&rng](double shift) {
    Tensor t({16, 32});
    for (double& v : t.values()) v = shift + normal(rng);
    return t;
  };
  const Tensor x = data(-1.0), y = data(1.0);
  const Tensor fake_x = m.g_yx.infer(y), fake_y = m.g_xy.infer(x);

  GradCheckOptions opts = base;
  opts.max_coords = max_coords;
  opts.seed = seed;
  // Central differences of these losses (magnitude near 40) carry roundoff
  // up to about 2e-9, so gradients below 1e-4 are judged against an
  // absolute 1e-8 at the 1e-4 tolerance.
  opts.floor = std::max(opts.floor, 1e-4);

  std::vector<Parameter*> gen_params, disc_params;
  for (auto& p : m.g_xy.parameters()) gen_params.push_back(&p);
  for (auto& p : m.g_yx.parameters()) gen_params.push_back(&p);
  for (auto& p : m.d_x.parameters()) disc_params.push_back(&p);
  for (auto& p : m.d_y.parameters()) disc_params.push_back(&p);

  std::vector<GradCheckResult> out;
  for (AdvForm form : {AdvForm::kNonSaturating, AdvForm::kSaturating}) {
    GanHyper h;
    h.adv_form = form;
    out.push_back(nn::check_gradients(
        form == AdvForm::kNonSaturating ? "generator_objective" : "generator_objective_saturating", gen_params,
        [&](Tape& t) { return generator_objective(t, m, t.constant(x), t.constant(y), h, h.lambda_id).total; },
        opts));
  }
  const GanHyper h;
  out.push_back(nn::check_gradients(
      "discriminator_objective", disc_params,
      [&](Tape& t) {
        return discriminator_objective(t, m, t.constant(x), t.constant(y), t.constant(fake_x), t.constant(fake_y), h)
            .total;
      },
      opts));
  return out;
}

}  // namespace cwtvc
