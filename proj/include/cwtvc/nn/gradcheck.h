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

// Central finite-difference check of recorded gradients.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cwtvc/nn/autograd.h"

namespace cwtvc::nn {

struct GradCheckOptions {
  double eps = 1e-5;
  /// Denominator floor of the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-6;
  /// Coordinates sampled per tensor; 0 checks every coordinate.
  std::size_t max_coords = 0;
  std::uint64_t seed = 1;
};

struct GradCheckResult {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t coords = 0;
  std::string worst;  // "<tensor>[<index>]"
  /// Coordinates whose +-eps evaluations switch a branch of a non-smooth
  /// op (L1, leaky ReLU, clamp); excluded from max_rel_error.
  std::size_t kinks = 0;
};

/// `loss` builds a scalar on the given tape, binding each entry of
/// `params` through Tape::param. Gradients from one backward pass are
/// compared with (L(p + eps) - L(p - eps)) / (2 eps), skipping coordinates
/// where the perturbation crosses a kink.
GradCheckResult check_gradients(const std::string& name, const std::vector<Parameter*>& params,
                                const std::function<Var(Tape&)>& loss, const GradCheckOptions& opts = {});

}  // namespace cwtvc::nn
