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

#include "cwtvc/nn/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cwtvc::nn {

GradCheckResult check_gradients(const std::string& name, const std::vector<Parameter*>& params,
                                const std::function<Var(Tape&)>& loss, const GradCheckOptions& opts) {
  for (Parameter* p : params) p->zero_grad();
  {
    Tape tape;
    tape.backward(loss(tape));
  }

  struct Eval {
    double value;
    std::uint64_t branches;
  };
  auto evaluate = [&] {
    Tape tape(false);
    const double v = loss(tape).value().item();
    return Eval{v, tape.branch_signature()};
  };
  const std::uint64_t base = evaluate().branches;

  GradCheckResult result{name, 0.0, 0, {}, 0};
  std::mt19937_64 rng(opts.seed);
  for (Parameter* p : params) {
    std::vector<std::size_t> coords(p->value.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (opts.max_coords > 0 && coords.size() > opts.max_coords) {
      std::shuffle(coords.begin(), coords.end(), rng);
      coords.resize(opts.max_coords);
      std::sort(coords.begin(), coords.end());
    }
    for (std::size_t i : coords) {
      const double saved = p->value[i];
      p->value[i] = saved + opts.eps;
      const Eval up = evaluate();
      p->value[i] = saved - opts.eps;
      const Eval down = evaluate();
      p->value[i] = saved;
      if (up.branches != base || down.branches != base) {
        ++result.kinks;
        continue;
      }
      const double numeric = (up.value - down.value) / (2.0 * opts.eps);
      const double analytic = p->grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), opts.floor});
      const double err = std::abs(analytic - numeric) / denom;
      // NaN sticks once seen.
      if (!std::isnan(result.max_rel_error) && (std::isnan(err) || err > result.max_rel_error)) {
        result.max_rel_error = err;
        result.worst = p->name + "[" + std::to_string(i) + "]";
      }
      ++result.coords;
    }
  }
  return result;
}

}  // namespace cwtvc::nn
