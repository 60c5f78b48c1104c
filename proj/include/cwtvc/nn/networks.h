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

// Generator and discriminator networks built on the autograd ops.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cwtvc/nn/autograd.h"

namespace cwtvc::nn {

/// Owns an ordered list of named parameters. Subclasses describe the
/// computation in run(), consuming parameters in construction order.
class Network {
 public:
  virtual ~Network() = default;

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  std::size_t parameter_count() const;
  void zero_grad();

  /// With `train` the parameters are bound as gradient-receiving leaves,
  /// otherwise as constants (gradients still flow to `x`).
  Var forward(Tape& tape, Var x, bool train = true);
  Tensor infer(const Tensor& x) const;

 protected:
  using Binder = std::function<Var(std::size_t)>;
  virtual Var run(Tape& tape, Var x, const Binder& bind) const = 0;

  void add_param(std::string name, Shape shape, std::mt19937_64& rng, double init_std);
  void add_param(std::string name, Shape shape, double fill);

  std::vector<Parameter> params_;
};

/// 1-D convolutional generator: input conv + GLU, `n_down` stride-2 GLU
/// blocks, `n_res` residual GLU blocks, `n_up` pixel-shuffle GLU blocks,
/// output conv. Channel width is constant at `width`.
struct GenConfig {
  std::size_t channels = 24;
  std::size_t width = 64;
  std::size_t n_down = 2;
  std::size_t n_res = 3;
  std::size_t n_up = 2;
  std::size_t kernel_in = 5;
  std::size_t kernel_down = 5;
  std::size_t kernel_res = 3;
  std::size_t kernel_up = 5;
  std::size_t kernel_out = 5;
  double init_std = 0.02;

  /// Frames must be a multiple of this.
  std::size_t time_factor() const { return std::size_t{1} << n_down; }
  void validate() const;
};

class Generator : public Network {
 public:
  Generator(const GenConfig& config, std::uint64_t seed);
  const GenConfig& config() const { return config_; }

 protected:
  Var run(Tape& tape, Var x, const Binder& bind) const override;

 private:
  GenConfig config_;
};

/// 2-D convolutional discriminator over the channels x frames plane:
/// conv2d + GLU, `n_blocks` stride-2 conv2d (+ instance norm) + GLU blocks,
/// spatial mean, dense, sigmoid. Output shape {1}, strictly inside (0, 1)
/// for finite logits.
struct DiscConfig {
  std::size_t channels = 24;
  std::size_t width = 16;
  std::size_t n_blocks = 3;
  std::size_t kernel = 3;
  bool instance_norm = true;
  double init_std = 0.02;

  /// Smallest channel and frame extent accepted.
  std::size_t min_extent() const { return std::size_t{1} << n_blocks; }
  void validate() const;
};

class Discriminator : public Network {
 public:
  Discriminator(const DiscConfig& config, std::uint64_t seed);
  const DiscConfig& config() const { return config_; }

  /// Pre-sigmoid output, shape {1}.
  Var logit(Tape& tape, Var x, bool train = true);

 protected:
  Var run(Tape& tape, Var x, const Binder& bind) const override;

 private:
  Var run_logit(Tape& tape, Var x, const Binder& bind) const;
  DiscConfig config_;
};

/// Independent seed for the k-th network derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k);

}  // namespace cwtvc::nn
