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

#include "cwtvc/nn/autograd.h"
#include "cwtvc/nn/gradcheck.h"
#include "cwtvc/nn/ops.h"
#include "cwtvc/nn/tensor.h"
#include "doctest.h"

using namespace cwtvc;
using namespace cwtvc::nn;
using doctest::Approx;

TEST_SUITE("autograd") {

TEST_CASE("tensor basics") {
  Tensor t({2, 3}, 1.5);
  CHECK(t.size() == 6);
  CHECK(t.rank() == 2);
  CHECK(shape_string(t.shape()) == "[2,3]");
  CHECK(Tensor::scalar(4.0).item() == 4.0);
  CHECK_THROWS_AS(t.item(), InvalidArgument);
  CHECK(t.reshaped({3, 2}).shape() == Shape{3, 2});
  CHECK_THROWS_AS(t.reshaped({4, 2}), InvalidArgument);
  CHECK_THROWS_AS(Tensor({2, 0}), InvalidArgument);
  CHECK_THROWS_AS(Tensor({2}, std::vector<double>{1.0}), InvalidArgument);
  t[4] = std::nan("");
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("sum of squares at 3 has gradient 6") {
  Parameter w{"w", Tensor::scalar(3.0), {}};
  Tape tape;
  Var v = tape.param(w);
  tape.backward(sum(mul(v, v)));
  CHECK(w.grad.item() == 6.0);
}

TEST_CASE("l1_mean gradient is sign over N") {
  Tape tape;
  Var w = tape.variable(Tensor({4}, std::vector<double>{1.0, -2.0, 0.5, 3.0}));
  Var c = tape.constant(Tensor({4}, std::vector<double>{0.0, 0.0, 1.0, 1.0}));
  tape.backward(l1_mean(w, c));
  const Tensor g = tape.grad(w);
  CHECK(g[0] == 0.25);
  CHECK(g[1] == -0.25);
  CHECK(g[2] == -0.25);
  CHECK(g[3] == 0.25);
}

TEST_CASE("a parameter bound twice gets one accumulated gradient") {
  Parameter w{"w", Tensor::scalar(2.0), {}};
  w.zero_grad();
  Tape tape;
  Var a = tape.param(w), b = tape.param(w);
  CHECK(a.id() == b.id());
  tape.backward(add(scale(a, 3.0), mul(b, b)));
  CHECK(w.grad.item() == 3.0 + 4.0);
}

TEST_CASE("gradients add into Parameter::grad across tapes") {
  Parameter w{"w", Tensor::scalar(1.0), {}};
  w.zero_grad();
  for (int k = 0; k < 2; ++k) {
    Tape tape;
    tape.backward(scale(tape.param(w), 5.0));
  }
  CHECK(w.grad.item() == 10.0);
}

TEST_CASE("unreached parameter receives zeros") {
  Parameter used{"u", Tensor::scalar(1.0), {}}, unused{"n", Tensor({3}, 7.0), {}};
  Tape tape;
  Var u = tape.param(used);
  tape.param(unused);
  tape.backward(scale(u, 2.0));
  CHECK(unused.grad == Tensor({3}, 0.0));
}

TEST_CASE("non-scalar loss is rejected") {
  Tape tape;
  Var x = tape.variable(Tensor({2}, 1.0));
  CHECK_THROWS_AS(tape.backward(x), InvalidArgument);
}

TEST_CASE("non-recording tape records no gradients") {
  Parameter w{"w", Tensor::scalar(1.0), {}};
  Tape tape(false);
  Var v = tape.param(w);
  CHECK_FALSE(v.requires_grad());
  CHECK(scale(v, 2.0).value().item() == 2.0);
}

TEST_CASE("branch signature tracks the pieces of non-smooth ops") {
  auto sig = [](double x) {
    Tape tape;
    Var v = tape.variable(Tensor({2}, std::vector<double>{x, 1.0}));
    leaky_relu(v);
    return tape.branch_signature();
  };
  CHECK(sig(0.5) == sig(0.7));
  CHECK(sig(0.5) != sig(-0.5));
}

TEST_CASE("check_gradients on a small smooth graph") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  Parameter a{"a", Tensor({3, 4}), {}}, b{"b", Tensor({3, 4}), {}};
  for (auto& v : a.value.values()) v = n(rng);
  for (auto& v : b.value.values()) v = n(rng);
  const auto r = check_gradients("smooth", {&a, &b}, [&](Tape& t) {
    Var x = t.param(a), y = t.param(b);
    return mean(mul(sigmoid(x), add_scalar(mul(y, y), 1.0)));
  });
  CHECK(r.coords == 24);
  CHECK(r.kinks == 0);
  CHECK(r.max_rel_error <= 1e-6);
}

TEST_CASE("check_gradients reports a wrong gradient") {
  Parameter a{"a", Tensor({2}, 1.0), {}};
  const auto r = check_gradients("wrong", {&a}, [&](Tape& t) {
    Var x = t.param(a);
    // Value depends on x squared, recorded backward says 3x.
    Tensor v({1}, x.value()[0] * x.value()[0] + x.value()[1] * x.value()[1]);
    return t.record(std::move(v), {x}, [id = x.id()](Tape& tp, std::size_t self) {
      Tensor& g = tp.grad_buffer(id);
      for (std::size_t i = 0; i < 2; ++i) g[i] += 3.0 * tp.value_of(id)[i] * tp.grad_of(self)[0];
    });
  });
  CHECK(r.max_rel_error > 0.1);
}

}  // TEST_SUITE
