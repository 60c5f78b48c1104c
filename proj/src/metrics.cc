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

#include "cwtvc/metrics.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace cwtvc {

double mel_cepstral_distortion(const Matrix& ref, const Matrix& hyp) {
  if (ref.rows() != hyp.rows() || ref.cols() != hyp.cols())
    throw InvalidArgument("mel_cepstral_distortion: MCEP shapes differ");
  if (ref.rows() == 0) throw InvalidArgument("mel_cepstral_distortion: no frames");
  double acc = 0.0;
  for (std::size_t t = 0; t < ref.rows(); ++t) {
    double ss = 0.0;
    for (std::size_t k = 0; k < ref.cols(); ++k) {
      const double e = ref(t, k) - hyp(t, k);
      ss += e * e;
    }
    acc += std::sqrt(2.0 * ss);
  }
  return 10.0 / std::numbers::ln10 * acc / static_cast<double>(ref.rows());
}

Metrics metrics(const UtteranceFeatures& ref, const UtteranceFeatures& hyp) {
  if (ref.frames() != hyp.frames())
    throw InvalidArgument("metrics: frame counts differ (" + std::to_string(ref.frames()) + " vs " +
                          std::to_string(hyp.frames()) + ")");
  Metrics m;
  m.mcd_db = mel_cepstral_distortion(ref.mcep(), hyp.mcep());

  const auto& a = ref.f0();
  const auto& b = hyp.f0();
  double sa = 0.0, sb = 0.0, se = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t] > 0.0 && b[t] > 0.0) {
      ++m.voiced_frames;
      sa += a[t];
      sb += b[t];
      se += (a[t] - b[t]) * (a[t] - b[t]);
    }
  if (m.voiced_frames == 0) throw InvalidArgument("metrics: no frame is voiced in both utterances");
  const double n = static_cast<double>(m.voiced_frames);
  m.f0_rmse_hz = std::sqrt(se / n);
  const double ma = sa / n, mb = sb / n;
  double cab = 0.0, caa = 0.0, cbb = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t] > 0.0 && b[t] > 0.0) {
      cab += (a[t] - ma) * (b[t] - mb);
      caa += (a[t] - ma) * (a[t] - ma);
      cbb += (b[t] - mb) * (b[t] - mb);
    }
  m.f0_corr = caa > 0.0 && cbb > 0.0 ? cab / std::sqrt(caa * cbb) : std::numeric_limits<double>::quiet_NaN();
  return m;
}

}  // namespace cwtvc
