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

#include "cwtvc/cwt.h"

#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "cwtvc/error.h"
#include "cwtvc/kv_text.h"

namespace cwtvc {

namespace {

const double kHatNorm = 2.0 / (std::sqrt(3.0) * std::pow(std::numbers::pi, 0.25));

// Symmetric reflection with period 2n: -1 -> 0, n -> n-1.
std::size_t mirror_index(long long i, std::size_t n) {
  const long long period = 2 * static_cast<long long>(n);
  long long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long long>(n)) m = period - 1 - m;
  return static_cast<std::size_t>(m);
}

void check_scale(std::size_t i) {
  if (i < 1 || i > kNumScales) throw InvalidArgument("scale index must be in 1..10");
}

}  // namespace

double mexican_hat(double x) {
  const double x2 = x * x;
  return kHatNorm * (1.0 - x2) * std::exp(-0.5 * x2);
}

std::vector<double> cwt_scale(std::span<const double> signal, double tau_frames) {
  if (!(tau_frames > 0.0) || !std::isfinite(tau_frames))
    throw InvalidArgument("cwt_scale: scale must be positive");
  if (signal.empty()) throw InvalidArgument("cwt_scale: empty signal");

  const std::size_t n = signal.size();
  const auto half = static_cast<long long>(std::floor(kKernelHalfWidth * tau_frames));
  const std::size_t taps = static_cast<std::size_t>(2 * half + 1);

  std::vector<double> kernel(taps);
  for (long long k = -half; k <= half; ++k)
    kernel[static_cast<std::size_t>(k + half)] = mexican_hat(static_cast<double>(k) / tau_frames);

  std::vector<double> ext(n + 2 * static_cast<std::size_t>(half));
  for (std::size_t j = 0; j < ext.size(); ++j)
    ext[j] = signal[mirror_index(static_cast<long long>(j) - half, n)];

  const double gain = 1.0 / std::sqrt(tau_frames);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double* x = ext.data() + t;
    double acc = 0.0;
    for (std::size_t k = 0; k < taps; ++k) acc += kernel[k] * x[k];
    out[t] = gain * acc;
  }
  return out;
}

double scale_ms(std::size_t i) {
  check_scale(i);
  return std::ldexp(kTau0Ms, static_cast<int>(i + 1));
}

double scale_weight(std::size_t i) {
  check_scale(i);
  return std::pow(static_cast<double>(i) + 2.5, -2.5);
}

CwtMatrix decompose10(std::span<const double> norm_log_f0, double frame_period_ms, bool parallel) {
  if (norm_log_f0.empty()) throw InvalidArgument("decompose10: empty contour");
  for (double v : norm_log_f0)
    if (!std::isfinite(v)) throw InvalidArgument("decompose10: non-finite input");
  if (!(frame_period_ms > 0.0)) throw InvalidArgument("decompose10: frame period must be positive");
  if (scale_ms(1) / frame_period_ms < 1.0)
    throw InvalidArgument("decompose10: frame period too long for the 20 ms scale");

  const std::size_t n = norm_log_f0.size();
  CwtMatrix m{Matrix(n, kNumScales), kTau0Ms, frame_period_ms};

  auto fill_column = [&](std::size_t i) {
    const auto col = cwt_scale(norm_log_f0, scale_ms(i) / frame_period_ms);
    const double w = scale_weight(i);
    for (std::size_t t = 0; t < n; ++t) m.coeffs(t, i - 1) = col[t] * w;
  };

  if (parallel) {
    std::vector<std::jthread> workers;
    for (std::size_t i = 1; i <= kNumScales; ++i) workers.emplace_back(fill_column, i);
  } else {
    for (std::size_t i = 1; i <= kNumScales; ++i) fill_column(i);
  }
  return m;
}

std::vector<double> recompose10(const CwtMatrix& m) {
  if (m.coeffs.cols() != kNumScales) throw InvalidArgument("recompose10: expected 10 columns");
  std::vector<double> out(m.frames(), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    double acc = 0.0;
    for (std::size_t i = 1; i <= kNumScales; ++i) acc += m.coeffs(t, i - 1) * scale_weight(i);
    out[t] = acc;
  }
  return out;
}

ScaleStats compute_scale_stats(std::span<const CwtMatrix> corpus) {
  ScaleStats s;
  std::array<double, kNumScales> sum{};
  std::size_t n = 0;
  for (const auto& m : corpus) {
    if (m.coeffs.cols() != kNumScales) throw InvalidArgument("compute_scale_stats: expected 10 columns");
    for (std::size_t t = 0; t < m.frames(); ++t)
      for (std::size_t c = 0; c < kNumScales; ++c) sum[c] += m.coeffs(t, c);
    n += m.frames();
  }
  if (n < 2) throw InvalidArgument("compute_scale_stats: need at least 2 frames");
  for (std::size_t c = 0; c < kNumScales; ++c) s.mean[c] = sum[c] / static_cast<double>(n);

  std::array<double, kNumScales> ss{};
  for (const auto& m : corpus)
    for (std::size_t t = 0; t < m.frames(); ++t)
      for (std::size_t c = 0; c < kNumScales; ++c) {
        const double d = m.coeffs(t, c) - s.mean[c];
        ss[c] += d * d;
      }
  for (std::size_t c = 0; c < kNumScales; ++c) {
    s.std[c] = std::sqrt(ss[c] / static_cast<double>(n));
    if (!(s.std[c] > 0.0))
      throw InvalidArgument("compute_scale_stats: scale " + std::to_string(c + 1) + " has zero variance");
  }
  return s;
}

namespace {

void check_scale_stats(const ScaleStats& s) {
  for (std::size_t c = 0; c < kNumScales; ++c)
    if (!(s.std[c] > 0.0) || !std::isfinite(s.std[c]) || !std::isfinite(s.mean[c]))
      throw InvalidArgument("scale stats need finite means and positive stds");
}

}  // namespace

CwtMatrix standardize_scales(const CwtMatrix& m, const ScaleStats& s) {
  check_scale_stats(s);
  CwtMatrix out = m;
  for (std::size_t t = 0; t < m.frames(); ++t)
    for (std::size_t c = 0; c < kNumScales; ++c)
      out.coeffs(t, c) = (m.coeffs(t, c) - s.mean[c]) / s.std[c];
  return out;
}

CwtMatrix destandardize_scales(const CwtMatrix& m, const ScaleStats& s) {
  check_scale_stats(s);
  CwtMatrix out = m;
  for (std::size_t t = 0; t < m.frames(); ++t)
    for (std::size_t c = 0; c < kNumScales; ++c)
      out.coeffs(t, c) = m.coeffs(t, c) * s.std[c] + s.mean[c];
  return out;
}

std::string render_scale_stats(const ScaleStats& s) {
  std::string out = "# per-scale CWT coefficient statistics\n";
  for (std::size_t c = 0; c < kNumScales; ++c) {
    const std::string key = "scale" + std::to_string(c + 1);
    out += key + ".mean=" + format_double(s.mean[c]) + "\n";
    out += key + ".std=" + format_double(s.std[c]) + "\n";
  }
  return out;
}

ScaleStats parse_scale_stats(const std::string& text) {
  ScaleStats s;
  std::array<bool, 2 * kNumScales> seen{};
  for (const auto& kv : parse_key_values(text)) {
    bool matched = false;
    for (std::size_t c = 0; c < kNumScales && !matched; ++c) {
      const std::string key = "scale" + std::to_string(c + 1);
      if (kv.key == key + ".mean") {
        s.mean[c] = parse_double(kv.key, kv.value);
        seen[2 * c] = matched = true;
      } else if (kv.key == key + ".std") {
        s.std[c] = parse_double(kv.key, kv.value);
        seen[2 * c + 1] = matched = true;
      }
    }
    if (!matched) throw InvalidArgument("scale stats: unknown key '" + kv.key + "'");
  }
  for (bool b : seen)
    if (!b) throw InvalidArgument("scale stats: every scale needs a mean and a std");
  check_scale_stats(s);
  return s;
}

std::string render_cwt_csv(const CwtMatrix& m) {
  std::string out = "t";
  for (std::size_t c = 1; c <= kNumScales; ++c) out += ",scale" + std::to_string(c);
  out += "\n";
  for (std::size_t t = 0; t < m.frames(); ++t) {
    out += std::to_string(t);
    for (std::size_t c = 0; c < kNumScales; ++c) out += "," + format_double(m.coeffs(t, c));
    out += "\n";
  }
  return out;
}

CwtMatrix parse_cwt_csv(const std::string& text, double frame_period_ms) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("cwt csv: empty input");
  std::string expected = "t";
  for (std::size_t c = 1; c <= kNumScales; ++c) expected += ",scale" + std::to_string(c);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw InvalidArgument("cwt csv: unexpected header");

  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != kNumScales + 1)
      throw InvalidArgument("cwt csv: row " + std::to_string(rows) + " has wrong column count");
    if (parse_uint("t", cells[0]) != rows)
      throw InvalidArgument("cwt csv: rows must be consecutive from 0");
    for (std::size_t c = 1; c <= kNumScales; ++c)
      values.push_back(parse_double("scale" + std::to_string(c), cells[c]));
    ++rows;
  }
  if (rows == 0) throw InvalidArgument("cwt csv: no rows");
  return CwtMatrix{Matrix(rows, kNumScales, std::move(values)), kTau0Ms, frame_period_ms};
}

}  // namespace cwtvc
