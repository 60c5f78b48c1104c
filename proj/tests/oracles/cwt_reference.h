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

// Brute-force reference for the 10-scale Mexican-hat analysis and its
// weighted recomposition. Written without the library: direct double sum
// per output sample, wavelet support out to 16 scale units, boundary
// values found by folding the index back into range one reflection at a
// time.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace cwtvc::oracle {

inline double hat(double x) {
  const double c = 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));
  return c * (1.0 - x * x) * std::exp(-x * x / 2.0);
}

/// Half-sample symmetric extension: ..., f1, f0 | f0, f1, ..., f(n-1) | f(n-1), ...
inline std::size_t fold(long long x, long long n) {
  while (x < 0 || x >= n) {
    if (x < 0) x = -x - 1;
    if (x >= n) x = 2 * n - 1 - x;
  }
  return static_cast<std::size_t>(x);
}

inline double weight(int i) { return 1.0 / std::pow(i + 2.5, 2.5); }

/// coeffs[i - 1][t] for scales i = 1..10.
inline std::vector<std::vector<double>> decompose(const std::vector<double>& f, double frame_ms,
                                                  double support = 16.0) {
  const long long n = static_cast<long long>(f.size());
  std::vector<std::vector<double>> out(10, std::vector<double>(f.size()));
  for (int i = 1; i <= 10; ++i) {
    const double tau = 5.0 * std::pow(2.0, i + 1) / frame_ms;
    const long long reach = static_cast<long long>(support * tau);
    for (long long t = 0; t < n; ++t) {
      double acc = 0.0;
      for (long long x = t - reach; x <= t + reach; ++x)
        acc += f[fold(x, n)] * hat(static_cast<double>(x - t) / tau);
      out[i - 1][static_cast<std::size_t>(t)] = acc / std::sqrt(tau) * weight(i);
    }
  }
  return out;
}

inline std::vector<double> recompose(const std::vector<std::vector<double>>& w) {
  std::vector<double> f(w[0].size(), 0.0);
  for (int i = 1; i <= 10; ++i)
    for (std::size_t t = 0; t < f.size(); ++t) f[t] += w[i - 1][t] * weight(i);
  return f;
}

/// 1-based column with the largest sum of squares.
inline int max_energy_column(const std::vector<std::vector<double>>& w) {
  int best = 1;
  double best_e = -1.0;
  for (int i = 1; i <= 10; ++i) {
    double e = 0.0;
    for (double v : w[i - 1]) e += v * v;
    if (e > best_e) {
      best_e = e;
      best = i;
    }
  }
  return best;
}

}  // namespace cwtvc::oracle
