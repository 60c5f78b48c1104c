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

// CycleGAN objectives, learning-rate schedule and the per-iteration
// discriminator/generator update for one feature kind.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>

#include "cwtvc/error.h"
#include "cwtvc/nn/adam.h"
#include "cwtvc/nn/networks.h"

namespace cwtvc {

enum class AdvForm {
  kNonSaturating,  // generator minimises -log D(G(x))
  kSaturating,     // generator minimises log(1 - D(G(x)))
};

struct GanHyper {
  double lambda_cyc = 10.0;
  double lambda_id = 5.0;
  std::int64_t id_cutoff_iters = 10000;
  double lr_g = 2e-4;
  double lr_d = 1e-4;
  std::int64_t const_iters = 200000;
  std::int64_t decay_iters = 200000;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t crop_frames = 128;
  std::uint64_t seed = 1;
  std::int64_t iterations = 2000;
  AdvForm adv_form = AdvForm::kNonSaturating;
  /// D outputs are clamped to [delta, 1 - delta] before logs.
  double prob_clamp = 1e-7;

  nn::AdamConfig adam() const { return {beta1, beta2, adam_eps}; }
  void validate() const;
};

struct LearningRates {
  double g = 0.0;
  double d = 0.0;
};

/// Constant for iter < const_iters, then linear to zero at
/// const_iters + decay_iters, zero afterwards.
LearningRates lr_schedule(std::int64_t iter, const GanHyper& h);

/// lambda_id while iter < id_cutoff_iters, else 0.
double identity_weight(std::int64_t iter, const GanHyper& h);

using MapFn = std::function<nn::Var(nn::Tape&, nn::Var)>;

/// E[log D(real)] + E[log(1 - D(fake))] with batch means and D clamped to
/// [delta, 1 - delta].
nn::Var adv_loss(nn::Tape& tape, const MapFn& d, std::span<const nn::Var> real, std::span<const nn::Var> fake,
                 double delta = 1e-7);

/// Adversarial term of the generator objective for a batch of fakes.
nn::Var generator_adv_loss(nn::Tape& tape, const MapFn& d, std::span<const nn::Var> fake, AdvForm form,
                           double delta = 1e-7);

/// mean|G_yx(G_xy(x)) - x| + mean|G_xy(G_yx(y)) - y|, averaged over the batch.
nn::Var cycle_loss(nn::Tape& tape, const MapFn& g_xy, const MapFn& g_yx, std::span<const nn::Var> x,
                   std::span<const nn::Var> y);

/// mean|G_yx(x) - x| + mean|G_xy(y) - y|, averaged over the batch.
nn::Var identity_loss(nn::Tape& tape, const MapFn& g_xy, const MapFn& g_yx, std::span<const nn::Var> x,
                      std::span<const nn::Var> y);

/// Generators, discriminators and their optimiser states for one
/// feature kind.
struct ModelPair {
  nn::Generator g_xy;
  nn::Generator g_yx;
  nn::Discriminator d_x;
  nn::Discriminator d_y;
  nn::AdamState opt_g_xy;
  nn::AdamState opt_g_yx;
  nn::AdamState opt_d_x;
  nn::AdamState opt_d_y;

  static ModelPair create(const nn::GenConfig& gen, const nn::DiscConfig& disc, std::uint64_t seed,
                          const nn::AdamConfig& adam = {});
  std::size_t channels() const { return g_xy.config().channels; }
};

struct LossReport {
  std::int64_t iter = 0;
  double adv_g = 0.0;    // generator adversarial terms, both directions
  double adv_d = 0.0;    // adversarial objective the discriminators ascend
  double cyc = 0.0;
  double id = 0.0;       // 0 once the identity term is switched off
  double total_g = 0.0;
  double total_d = 0.0;  // -adv_d, the quantity minimised
  double lr_g = 0.0;
  double lr_d = 0.0;
};

struct DiscriminatorObjective {
  nn::Var adv;    // adv_loss(D_y; y, fake_y) + adv_loss(D_x; x, fake_x)
  nn::Var total;  // -adv
};

/// Discriminators bound as trainable; fakes are treated as data.
DiscriminatorObjective discriminator_objective(nn::Tape& tape, ModelPair& m, nn::Var x, nn::Var y, nn::Var fake_x,
                                               nn::Var fake_y, const GanHyper& h);

struct GeneratorObjective {
  nn::Var adv;
  nn::Var cyc;
  nn::Var id;     // invalid when lambda_id is 0
  nn::Var total;  // adv + lambda_cyc cyc + lambda_id id
};

/// Generators bound as trainable, discriminators frozen.
GeneratorObjective generator_objective(nn::Tape& tape, ModelPair& m, nn::Var x, nn::Var y, const GanHyper& h,
                                       double lambda_id);

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

/// One discriminator update (D_x and D_y) followed by one generator update
/// on a single crop per domain. Throws TrainingDiverged before applying an
/// update whose loss is non-finite.
LossReport train_step(ModelPair& m, const nn::Tensor& x_crop, const nn::Tensor& y_crop, const GanHyper& h,
                      std::int64_t iter);

/// Uniformly placed contiguous window of `crop_frames` frames from a
/// [C, T] tensor. Shorter inputs are mirror-extended to the crop length.
nn::Tensor sample_crop(const nn::Tensor& features, std::size_t crop_frames, std::mt19937_64& rng);

std::string loss_csv_header();
std::string loss_csv_row(const LossReport& r);

}  // namespace cwtvc
