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

// Finite-difference checks over every differentiable op and both CycleGAN
// objectives, on small random instances.

#include <cstdint>
#include <vector>

#include "cwtvc/nn/gradcheck.h"

namespace cwtvc {

/// One result per op instance. Inputs are drawn away from the kinks of
/// leaky_relu, clamp and L1.
std::vector<nn::GradCheckResult> op_gradchecks(std::uint64_t seed, const nn::GradCheckOptions& opts = {});

/// Generator objective (both adversarial forms) and discriminator
/// objective of a small ModelPair. `max_coords` limits coordinates per
/// tensor (0 checks all). The denominator floor is at least 1e-4.
std::vector<nn::GradCheckResult> objective_gradchecks(std::uint64_t seed, std::size_t max_coords = 0,
                                                      const nn::GradCheckOptions& opts = {});

}  // namespace cwtvc
