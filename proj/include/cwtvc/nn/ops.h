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

// Differentiable tensor operations. Every op records its own backward
// function on the tape of its inputs and throws InvalidArgument on shape
// mismatch.

#include <array>
#include <cstddef>
#include <span>

#include "cwtvc/nn/autograd.h"

namespace cwtvc::nn {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var add_scalar(Var a, double c);
Var scale(Var a, double c);

Var sigmoid(Var x);
Var leaky_relu(Var x, double slope = 0.2);
Var log(Var x);
/// Values outside [lo, hi] are clamped and pass no gradient.
Var clamp(Var x, double lo, double hi);

/// Sum / mean of all elements, shape {1}.
Var sum(Var x);
Var mean(Var x);
/// mean |a - b| over all elements, shape {1}.
Var l1_mean(Var a, Var b);

Var reshape(Var x, Shape shape);
/// Concatenation along the leading axis; trailing extents must agree.
Var concat(std::span<const Var> parts);

/// Gated linear unit over the leading axis: x[:C] * sigmoid(x[C:]).
Var glu(Var x);

/// x [C_in, T], w [C_out, C_in, K], b [C_out] -> [C_out, (T + 2 pad - K) / stride + 1].
/// Zero padding.
Var conv1d(Var x, Var w, Var b, std::size_t stride, std::size_t pad);

/// x [C_in, H, W], w [C_out, C_in, KH, KW], b [C_out] -> [C_out, H_out, W_out].
Var conv2d(Var x, Var w, Var b, std::array<std::size_t, 2> stride, std::array<std::size_t, 2> pad);

/// [C * r, T] -> [C, T * r] with y[c, t r + j] = x[c r + j, t].
Var pixel_shuffle1d(Var x, std::size_t factor);

/// Per-channel normalisation over all trailing axes of x [C, ...], then
/// gamma[c] * xhat + beta[c]. Population variance.
Var instance_norm(Var x, Var gamma, Var beta, double eps = 1e-6);

/// Flattened x (N values), w [M, N], b [M] -> [M].
Var dense(Var x, Var w, Var b);

/// Mean over trailing axes of x [C, ...] -> [C].
Var channel_mean(Var x);

}  // namespace cwtvc::nn
