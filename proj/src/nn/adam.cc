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

#include "cwtvc/nn/adam.h"

#include <cmath>

namespace cwtvc::nn {

void adam_step(std::span<Parameter> params, AdamState& state, double lr) {
  for (const auto& p : params) {
    if (p.grad.shape() != p.value.shape())
      throw InvalidArgument("adam_step: parameter '" + p.name + "' has no gradient");
    if (!p.grad.all_finite()) throw InvalidArgument("adam_step: non-finite gradient in '" + p.name + "'");
  }
  if (state.m.empty()) {
    for (const auto& p : params) {
      state.m.emplace_back(p.value.shape(), 0.0);
      state.v.emplace_back(p.value.shape(), 0.0);
    }
  }
  if (state.m.size() != params.size()) throw InvalidArgument("adam_step: state does not match parameters");
  for (std::size_t k = 0; k < params.size(); ++k)
    if (state.m[k].shape() != params[k].value.shape())
      throw InvalidArgument("adam_step: moment shape differs for '" + params[k].name + "'");

  ++state.step;
  const auto& c = state.config;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = params[k];
    double* m = state.m[k].data();
    double* v = state.v[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= lr * mhat / (std::sqrt(vhat) + c.eps);
    }
  }
}

}  // namespace cwtvc::nn
