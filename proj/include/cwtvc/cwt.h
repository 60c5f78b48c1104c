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

// Ten-scale Mexican-hat wavelet analysis of normalized log-F0 and its
// weighted-sum recomposition.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cwtvc/matrix.h"

namespace cwtvc {

inline constexpr std::size_t kNumScales = 10;
inline constexpr double kTau0Ms = 5.0;

/// Kernel support in units of the wavelet argument. At 7 the discarded
/// tail leaves a constant input below 1e-6 of its level on every scale up
/// to 2048 frames.
inline constexpr double kKernelHalfWidth = 7.0;

/// Unit-L2-norm Mexican hat: C (1 - x^2) exp(-x^2 / 2), C = 2 / (sqrt(3) pi^(1/4)).
double mexican_hat(double x);

/// W(tau, t) = tau^(-1/2) sum_x f(x) psi((x - t) / tau) over |x - t| <= K tau,
/// mirror-extended at both ends, unit frame step.
std::vector<double> cwt_scale(std::span<const double> signal, double tau_frames);

/// Scale i (1-based) in milliseconds: 2^(i+1) * tau0.
double scale_ms(std::size_t i);

/// (i + 2.5)^(-5/2) for 1-based scale i.
double scale_weight(std::size_t i);

struct CwtMatrix {
  Matrix coeffs;  // frames x 10
  double tau0_ms = kTau0Ms;
  double frame_period_ms = 5.0;

  std::size_t frames() const { return coeffs.rows(); }
};

/// Columns are computed independently; `parallel` spreads them over threads
/// without changing any bit of the result.
CwtMatrix decompose10(std::span<const double> norm_log_f0, double frame_period_ms = 5.0,
                      bool parallel = false);

/// f(t) = sum_i m[t, i] * (i + 2.5)^(-5/2).
std::vector<double> recompose10(const CwtMatrix& m);

struct ScaleStats {
  std::array<double, kNumScales> mean{};
  std::array<double, kNumScales> std{};
};

/// Pooled per-column mean and population std. Throws if a column is constant.
ScaleStats compute_scale_stats(std::span<const CwtMatrix> corpus);

CwtMatrix standardize_scales(const CwtMatrix& m, const ScaleStats& s);
CwtMatrix destandardize_scales(const CwtMatrix& m, const ScaleStats& s);

std::string render_scale_stats(const ScaleStats& s);
ScaleStats parse_scale_stats(const std::string& text);

/// CSV with header "t,scale1,...,scale10".
std::string render_cwt_csv(const CwtMatrix& m);
CwtMatrix parse_cwt_csv(const std::string& text, double frame_period_ms = 5.0);

}  // namespace cwtvc
