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

// Reverse-mode differentiation over a recorded sequence of tensor ops.

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <string>
#include <unordered_map>

#include "cwtvc/nn/tensor.h"

namespace cwtvc::nn {

/// Named trainable tensor. `grad` has the shape of `value` once touched by
/// a backward pass or zero_grad().
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  void zero_grad() { grad = Tensor(value.shape(), 0.0); }
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid while the
/// tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
  bool requires_grad() const;
  Tape& tape() const;
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::size_t)>;

  /// A non-recording tape keeps values only; nothing on it requires a
  /// gradient. Used for inference.
  explicit Tape(bool recording = true) : recording_(recording) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return recording_; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Tensor value);
  /// Leaf whose gradient is readable through grad() after backward().
  Var variable(Tensor value);
  /// Leaf bound to `p`. A parameter gets one node per tape however many
  /// times it is bound, so backward() adds exactly one gradient into it.
  Var param(Parameter& p);

  /// Seeds d(loss)/d(loss) = 1, runs the recorded backward functions in
  /// reverse order and adds each bound parameter's gradient into
  /// Parameter::grad (parameters the loss does not reach receive zeros).
  void backward(Var loss);

  /// Gradient accumulated at `v` by the last backward(); zeros if unreached.
  Tensor grad(Var v) const;

  /// Non-smooth ops fold the branch every element took into this value.
  /// Two evaluations of one graph with equal signatures lie on the same
  /// smooth piece.
  std::uint64_t branch_signature() const { return branch_sig_; }
  void note_branches(std::uint64_t h) { branch_sig_ = (branch_sig_ ^ h) * 0x100000001b3ULL; }

  // --- op-author interface -------------------------------------------------

  Var record(Tensor value, std::initializer_list<Var> parents, BackwardFn fn);
  template <typename Range>
  Var record_range(Tensor value, const Range& parents, BackwardFn fn) {
    bool needs = false;
    for (const Var& p : parents) needs = needs || p.requires_grad();
    return push(std::move(value), needs, std::move(fn));
  }

  const Tensor& value_of(std::size_t id) const { return nodes_[id].value; }
  const Tensor& grad_of(std::size_t id) const { return nodes_[id].grad; }
  bool needs_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  /// Gradient buffer of node `id`, zero-initialised on first use.
  Tensor& grad_buffer(std::size_t id);

 private:
  friend class Var;

  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    BackwardFn backward;
  };

  Var push(Tensor value, bool requires_grad, BackwardFn fn);

  bool recording_;
  std::uint64_t branch_sig_ = 0xcbf29ce484222325ULL;
  std::deque<Node> nodes_;
  std::unordered_map<Parameter*, std::size_t> param_nodes_;
};

}  // namespace cwtvc::nn
