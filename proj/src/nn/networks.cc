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

#include "cwtvc/nn/networks.h"

#include "cwtvc/nn/ops.h"

namespace cwtvc::nn {

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

void Network::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

Var Network::forward(Tape& tape, Var x, bool train) {
  if (train) return run(tape, x, [&](std::size_t i) { return tape.param(params_[i]); });
  return run(tape, x, [&](std::size_t i) { return tape.constant(params_[i].value); });
}

Tensor Network::infer(const Tensor& x) const {
  Tape tape(false);
  Var in = tape.constant(x);
  return run(tape, in, [&](std::size_t i) { return tape.constant(params_[i].value); }).value();
}

void Network::add_param(std::string name, Shape shape, std::mt19937_64& rng, double init_std) {
  std::normal_distribution<double> normal(0.0, init_std);
  Tensor value(std::move(shape));
  for (auto& v : value.values()) v = normal(rng);
  params_.push_back({std::move(name), std::move(value), Tensor()});
  params_.back().zero_grad();
}

void Network::add_param(std::string name, Shape shape, double fill) {
  params_.push_back({std::move(name), Tensor(std::move(shape), fill), Tensor()});
  params_.back().zero_grad();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  // splitmix64 finaliser
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

void require_odd(std::size_t k, const char* what) {
  if (k % 2 == 0) throw InvalidArgument(std::string(what) + " must be odd");
}

}  // namespace

void GenConfig::validate() const {
  if (channels == 0 || width == 0) throw InvalidArgument("generator: channels and width must be positive");
  if (n_down != n_up) throw InvalidArgument("generator: n_up must equal n_down to preserve length");
  require_odd(kernel_in, "generator kernel_in");
  require_odd(kernel_down, "generator kernel_down");
  require_odd(kernel_res, "generator kernel_res");
  require_odd(kernel_up, "generator kernel_up");
  require_odd(kernel_out, "generator kernel_out");
  if (!(init_std >= 0.0)) throw InvalidArgument("generator: init_std must be non-negative");
}

Generator::Generator(const GenConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const auto& c = config_;
  const std::size_t w = c.width;
  const double sd = c.init_std;

  add_param("in.w", {2 * w, c.channels, c.kernel_in}, rng, sd);
  add_param("in.b", {2 * w}, 0.0);
  for (std::size_t i = 0; i < c.n_down; ++i) {
    const std::string p = "down" + std::to_string(i);
    add_param(p + ".w", {2 * w, w, c.kernel_down}, rng, sd);
    add_param(p + ".gamma", {2 * w}, 1.0);
    add_param(p + ".beta", {2 * w}, 0.0);
  }
  for (std::size_t i = 0; i < c.n_res; ++i) {
    const std::string p = "res" + std::to_string(i);
    add_param(p + ".w1", {2 * w, w, c.kernel_res}, rng, sd);
    add_param(p + ".gamma1", {2 * w}, 1.0);
    add_param(p + ".beta1", {2 * w}, 0.0);
    add_param(p + ".w2", {w, w, c.kernel_res}, rng, sd);
    add_param(p + ".gamma2", {w}, 1.0);
    add_param(p + ".beta2", {w}, 0.0);
  }
  for (std::size_t i = 0; i < c.n_up; ++i) {
    const std::string p = "up" + std::to_string(i);
    add_param(p + ".w", {4 * w, w, c.kernel_up}, rng, sd);
    add_param(p + ".b", {4 * w}, 0.0);
    add_param(p + ".gamma", {2 * w}, 1.0);
    add_param(p + ".beta", {2 * w}, 0.0);
  }
  add_param("out.w", {c.channels, w, c.kernel_out}, rng, sd);
  add_param("out.b", {c.channels}, 0.0);
}

Var Generator::run(Tape& tape, Var x, const Binder& bind) const {
  const auto& c = config_;
  if (x.shape().size() != 2 || x.shape()[0] != c.channels)
    throw InvalidArgument("generator: expected input [" + std::to_string(c.channels) + ", T], got " +
                          shape_string(x.shape()));
  if (x.shape()[1] % c.time_factor() != 0)
    throw InvalidArgument("generator: frame count " + std::to_string(x.shape()[1]) +
                          " is not a multiple of " + std::to_string(c.time_factor()));

  std::size_t k = 0;
  auto next = [&] { return bind(k++); };

  // Convolutions feeding instance norm carry no bias: the norm removes it.
  const Var no_bias_2w = tape.constant(Tensor({2 * c.width}));
  const Var no_bias_w = tape.constant(Tensor({c.width}));

  Var in_w = next(), in_b = next();
  Var h = glu(conv1d(x, in_w, in_b, 1, c.kernel_in / 2));
  for (std::size_t i = 0; i < c.n_down; ++i) {
    Var w = next(), g = next(), be = next();
    h = glu(instance_norm(conv1d(h, w, no_bias_2w, 2, c.kernel_down / 2), g, be));
  }
  for (std::size_t i = 0; i < c.n_res; ++i) {
    Var w1 = next(), g1 = next(), be1 = next();
    Var w2 = next(), g2 = next(), be2 = next();
    Var r = glu(instance_norm(conv1d(h, w1, no_bias_2w, 1, c.kernel_res / 2), g1, be1));
    r = instance_norm(conv1d(r, w2, no_bias_w, 1, c.kernel_res / 2), g2, be2);
    h = add(h, r);
  }
  for (std::size_t i = 0; i < c.n_up; ++i) {
    Var w = next(), b = next(), g = next(), be = next();
    h = glu(instance_norm(pixel_shuffle1d(conv1d(h, w, b, 1, c.kernel_up / 2), 2), g, be));
  }
  Var w = next(), b = next();
  return conv1d(h, w, b, 1, c.kernel_out / 2);
}

void DiscConfig::validate() const {
  if (channels == 0 || width == 0) throw InvalidArgument("discriminator: channels and width must be positive");
  require_odd(kernel, "discriminator kernel");
  if (!(init_std >= 0.0)) throw InvalidArgument("discriminator: init_std must be non-negative");
}

Discriminator::Discriminator(const DiscConfig& config, std::uint64_t seed) : config_(config) {
  config_.validate();
  std::mt19937_64 rng(seed);
  const auto& c = config_;
  const std::size_t w = c.width;
  add_param("in.w", {2 * w, 1, c.kernel, c.kernel}, rng, c.init_std);
  add_param("in.b", {2 * w}, 0.0);
  for (std::size_t i = 0; i < c.n_blocks; ++i) {
    const std::string p = "block" + std::to_string(i);
    add_param(p + ".w", {2 * w, w, c.kernel, c.kernel}, rng, c.init_std);
    if (c.instance_norm) {
      add_param(p + ".gamma", {2 * w}, 1.0);
      add_param(p + ".beta", {2 * w}, 0.0);
    } else {
      add_param(p + ".b", {2 * w}, 0.0);
    }
  }
  add_param("fc.w", {1, w}, rng, c.init_std);
  add_param("fc.b", {1}, 0.0);
}

Var Discriminator::run_logit(Tape& tape, Var x, const Binder& bind) const {
  const auto& c = config_;
  if (x.shape().size() != 2 || x.shape()[0] != c.channels)
    throw InvalidArgument("discriminator: expected input [" + std::to_string(c.channels) + ", T], got " +
                          shape_string(x.shape()));
  if (x.shape()[0] < c.min_extent() || x.shape()[1] < c.min_extent())
    throw InvalidArgument("discriminator: input " + shape_string(x.shape()) +
                          " is smaller than the receptive field");
  const std::size_t pad = c.kernel / 2;

  std::size_t k = 0;
  auto next = [&] { return bind(k++); };

  Var h = reshape(x, {1, x.shape()[0], x.shape()[1]});
  Var in_w = next(), in_b = next();
  h = glu(conv2d(h, in_w, in_b, {1, 1}, {pad, pad}));
  for (std::size_t i = 0; i < c.n_blocks; ++i) {
    Var w = next();
    if (c.instance_norm) {
      Var g = next(), be = next();
      h = instance_norm(conv2d(h, w, tape.constant(Tensor({2 * c.width})), {2, 2}, {pad, pad}), g, be);
    } else {
      Var b = next();
      h = conv2d(h, w, b, {2, 2}, {pad, pad});
    }
    h = glu(h);
  }
  Var w = next(), b = next();
  return dense(channel_mean(h), w, b);
}

Var Discriminator::run(Tape& tape, Var x, const Binder& bind) const {
  return sigmoid(run_logit(tape, x, bind));
}

Var Discriminator::logit(Tape& tape, Var x, bool train) {
  if (train) return run_logit(tape, x, [&](std::size_t i) { return tape.param(params_[i]); });
  return run_logit(tape, x, [&](std::size_t i) { return tape.constant(params_[i].value); });
}

}  // namespace cwtvc::nn
