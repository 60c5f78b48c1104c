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

// Objective comparison of two frame-aligned utterances.

#include <cstddef>

#include "cwtvc/features.h"

namespace cwtvc {

struct Metrics {
  double mcd_db = 0.0;
  double f0_rmse_hz = 0.0;
  /// NaN when either contour is constant over the mutually voiced frames.
  double f0_corr = 0.0;
  std::size_t voiced_frames = 0;  // voiced in both
};

/// (10 / ln 10) * mean_t sqrt(2 * sum_d (c - c')^2) over every MCEP dimension.
double mel_cepstral_distortion(const Matrix& ref, const Matrix& hyp);

/// Throws if frame counts or MCEP widths differ, or no frame is voiced in
/// both utterances.
Metrics metrics(const UtteranceFeatures& ref, const UtteranceFeatures& hyp);

}  // namespace cwtvc
