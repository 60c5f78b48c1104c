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

#include <cmath>
#include <random>

#include "cwtvc/cwt.h"
#include "doctest.h"
#include "fixtures/cwt_fixtures.h"
#include "oracles/cwt_reference.h"
#include "support/contours.h"

using namespace cwtvc;
using doctest::Approx;

namespace {

std::vector<double> noise(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("cwt") {

TEST_CASE("mexican hat") {
  CHECK(mexican_hat(1.0) == 0.0);
  CHECK(mexican_hat(-1.0) == 0.0);
  CHECK(mexican_hat(0.0) == Approx(2.0 / (std::sqrt(3.0) * std::pow(M_PI, 0.25))).epsilon(1e-15));
  CHECK(std::abs(mexican_hat(0.0) - 0.8673250) < 1e-7);
  for (double x : {0.1, 0.7, 1.3, 2.9, 6.0}) CHECK(mexican_hat(x) == mexican_hat(-x));
  double l2 = 0.0;
  for (int k = -20000; k <= 20000; ++k) l2 += std::pow(mexican_hat(k * 1e-3), 2) * 1e-3;
  CHECK(l2 == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cwt_scale basic properties") {
  CHECK(max_abs(cwt_scale(std::vector<double>(200, 0.0), 8.0)) == 0.0);
  const auto f = noise(1, 300), g = noise(2, 300);
  std::vector<double> mix(300);
  for (std::size_t t = 0; t < 300; ++t) mix[t] = 2.5 * f[t] - 0.75 * g[t];
  for (double tau : {4.0, 16.0, 128.0}) {
    const auto wf = cwt_scale(f, tau), wg = cwt_scale(g, tau), wm = cwt_scale(mix, tau);
    for (std::size_t t = 0; t < 300; ++t) CHECK(std::abs(wm[t] - (2.5 * wf[t] - 0.75 * wg[t])) <= 1e-10);
  }
  CHECK_THROWS_AS(cwt_scale(f, 0.0), InvalidArgument);
  CHECK_THROWS_AS(cwt_scale(f, -1.0), InvalidArgument);
}

TEST_CASE("constant input gives a near-zero response at every scale") {
  const double c = 3.7;
  for (std::size_t n : {1u, 50u, 1000u}) {
    const std::vector<double> f(n, c);
    for (std::size_t i = 1; i <= kNumScales; ++i)
      CHECK(max_abs(cwt_scale(f, scale_ms(i) / 5.0)) <= 1e-6 * c);
  }
}

TEST_CASE("scales and weights") {
  const double ms[] = {20, 40, 80, 160, 320, 640, 1280, 2560, 5120, 10240};
  for (std::size_t i = 1; i <= kNumScales; ++i) {
    CHECK(scale_ms(i) == ms[i - 1]);
    CHECK(scale_weight(i) == Approx(std::pow(i + 2.5, -2.5)).epsilon(1e-15));
  }
  CHECK(std::abs(scale_weight(1) - 0.0436344885) < 1e-10);
  CHECK_THROWS_AS(scale_ms(0), InvalidArgument);
  CHECK_THROWS_AS(scale_weight(11), InvalidArgument);
}

TEST_CASE("decompose10 columns are weighted cwt_scale outputs") {
  CHECK(decompose10(std::vector<double>(64, 0.0)).coeffs == Matrix(64, 10, 0.0));
  const auto f = noise(3, 400);
  const auto m = decompose10(f);
  REQUIRE(m.frames() == 400);
  for (std::size_t i = 1; i <= kNumScales; ++i) {
    const auto raw = cwt_scale(f, scale_ms(i) / 5.0);
    for (std::size_t t = 0; t < 400; t += 37) CHECK(m.coeffs(t, i - 1) == raw[t] * scale_weight(i));
  }
  CHECK(decompose10(f, 5.0, true).coeffs == m.coeffs);
  CHECK_THROWS_AS(decompose10(std::vector<double>{1.0, std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(decompose10(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("decompose10 agrees with the brute-force reference") {
  const auto f = noise(4, 300);
  const auto m = decompose10(f);
  const auto ref = oracle::decompose(f, 5.0);
  for (std::size_t i = 0; i < kNumScales; ++i)
    for (std::size_t t = 0; t < 300; ++t) CHECK(std::abs(m.coeffs(t, i) - ref[i][t]) <= 1e-9);
}

TEST_CASE("decompose10 is homogeneous") {
  const auto f = noise(5, 500);
  std::vector<double> g(f);
  for (auto& v : g) v *= -3.25;
  const auto a = decompose10(f), b = decompose10(g);
  for (std::size_t k = 0; k < a.coeffs.size(); ++k)
    CHECK(std::abs(b.coeffs.data()[k] + 3.25 * a.coeffs.data()[k]) <= 1e-10);
}

TEST_CASE("shift covariance away from the edges") {
  const std::size_t n = 1200, s = 37;
  const auto f = noise(6, n + s);
  const std::vector<double> a(f.begin(), f.begin() + n), b(f.begin() + s, f.end());
  for (std::size_t i = 1; i <= 6; ++i) {
    const double tau = scale_ms(i) / 5.0;
    const auto wa = cwt_scale(a, tau), wb = cwt_scale(b, tau);
    const auto guard = static_cast<std::size_t>(std::ceil(kKernelHalfWidth * tau)) + s;
    for (std::size_t t = guard; t + guard < n; ++t) CHECK(std::abs(wa[t + s] - wb[t]) <= 1e-8);
  }
}

TEST_CASE("recompose10 is the weighted column sum") {
  CwtMatrix zero{Matrix(20, 10, 0.0)};
  CHECK(max_abs(recompose10(zero)) == 0.0);
  for (std::size_t i = 1; i <= kNumScales; ++i) {
    CwtMatrix m{Matrix(5, 10, 0.0)};
    for (std::size_t t = 0; t < 5; ++t) m.coeffs(t, i - 1) = 1.0 + t;
    const auto f = recompose10(m);
    for (std::size_t t = 0; t < 5; ++t) CHECK(f[t] == (1.0 + t) * scale_weight(i));
  }
  const auto f = noise(7, 50);
  const auto m = decompose10(f);
  const auto mine = recompose10(m);
  std::vector<std::vector<double>> cols(10);
  for (std::size_t i = 0; i < 10; ++i) cols[i] = m.coeffs.column(i);
  const auto ref = oracle::recompose(cols);
  for (std::size_t t = 0; t < 50; ++t) CHECK(mine[t] == Approx(ref[t]).epsilon(1e-14));
}

TEST_CASE("round trip fidelity on a 32-frame sine is at least the reference value") {
  const auto f = testing::sinusoid(32.0 * testing::kFrameMs, 512);
  const double r = testing::pearson(recompose10(decompose10(f)), f);
  MESSAGE("r = " << r << ", reference " << fixtures::kSine32R0);
  CHECK(r >= fixtures::kSine32R0 - 1e-9);
}

TEST_CASE("max-energy columns match the reference") {
  auto column = [](const std::vector<double>& f) {
    const auto m = decompose10(f);
    std::vector<std::vector<double>> cols(10);
    for (std::size_t i = 0; i < 10; ++i) cols[i] = m.coeffs.column(i);
    return oracle::max_energy_column(cols);
  };
  const int short_col = column(testing::sinusoid(25.0));
  CHECK(short_col == fixtures::kColumn25ms);
  CHECK(short_col <= 2);
  CHECK(column(testing::sinusoid(5000.0)) == fixtures::kColumn5s);
}

TEST_CASE("scale standardization") {
  std::vector<CwtMatrix> corpus;
  for (std::uint64_t s = 10; s < 14; ++s) corpus.push_back(decompose10(noise(s, 200 + 50 * s)));
  const auto st = compute_scale_stats(corpus);
  for (double sd : st.std) CHECK(sd > 0.0);

  std::vector<double> sum(10, 0.0), sq(10, 0.0);
  double n = 0.0;
  for (const auto& m : corpus) {
    const auto z = standardize_scales(m, st);
    const auto back = destandardize_scales(z, st);
    for (std::size_t k = 0; k < m.coeffs.size(); ++k)
      CHECK(std::abs(back.coeffs.data()[k] - m.coeffs.data()[k]) <= 1e-12);
    for (std::size_t t = 0; t < z.frames(); ++t)
      for (std::size_t i = 0; i < 10; ++i) {
        sum[i] += z.coeffs(t, i);
        sq[i] += z.coeffs(t, i) * z.coeffs(t, i);
      }
    n += static_cast<double>(z.frames());
  }
  for (std::size_t i = 0; i < 10; ++i) {
    const double mean = sum[i] / n;
    CHECK(std::abs(mean) <= 1e-9);
    CHECK(std::abs(std::sqrt(sq[i] / n - mean * mean) - 1.0) <= 1e-9);
  }

  CwtMatrix at_mean{Matrix(3, 10)};
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t i = 0; i < 10; ++i) at_mean.coeffs(t, i) = st.mean[i];
  CHECK(standardize_scales(at_mean, st).coeffs == Matrix(3, 10, 0.0));
}

TEST_CASE("scale stats and csv text round trips") {
  const auto m = decompose10(noise(20, 40));
  std::vector<CwtMatrix> one{m};
  const auto st = compute_scale_stats(one);
  const auto back = parse_scale_stats(render_scale_stats(st));
  CHECK(back.mean == st.mean);
  CHECK(back.std == st.std);
  CHECK(parse_cwt_csv(render_cwt_csv(m)).coeffs == m.coeffs);
  CHECK_THROWS_AS(parse_cwt_csv("nonsense\n"), InvalidArgument);
  std::vector<CwtMatrix> flat{CwtMatrix{Matrix(5, 10, 1.0)}};
  CHECK_THROWS_AS(compute_scale_stats(flat), InvalidArgument);
}

}  // TEST_SUITE
