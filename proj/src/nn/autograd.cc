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

#include "cwtvc/nn/autograd.h"

namespace cwtvc::nn {

const Tensor& Var::value() const { return tape_->nodes_[id_].value; }
bool Var::requires_grad() const { return tape_->nodes_[id_].requires_grad; }
Tape& Var::tape() const { return *tape_; }

Var Tape::push(Tensor value, bool requires_grad, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = recording_ && requires_grad;
  if (n.requires_grad) n.backward = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(Tensor value) { return push(std::move(value), false, nullptr); }

Var Tape::variable(Tensor value) { return push(std::move(value), true, nullptr); }

Var Tape::param(Parameter& p) {
  if (auto it = param_nodes_.find(&p); it != param_nodes_.end()) return Var(this, it->second);
  Var v = push(p.value, true, nullptr);
  if (recording_) {
    nodes_[v.id_].param = &p;
    param_nodes_.emplace(&p, v.id_);
  }
  return v;
}

Var Tape::record(Tensor value, std::initializer_list<Var> parents, BackwardFn fn) {
  bool needs = false;
  for (const Var& p : parents) {
    if (p.tape_ != this) throw InvalidArgument("op mixes variables from different tapes");
    needs = needs || p.requires_grad();
  }
  return push(std::move(value), needs, std::move(fn));
}

Tensor& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape(), 0.0);
  return n.grad;
}

void Tape::backward(Var loss) {
  if (loss.tape_ != this) throw InvalidArgument("backward: loss belongs to another tape");
  if (loss.value().size() != 1)
    throw InvalidArgument("backward: loss must be scalar, got shape " + shape_string(loss.shape()));
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.id_].requires_grad) return;

  grad_buffer(loss.id_).fill(1.0);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || n.grad.empty() || !n.backward) continue;
    n.backward(*this, i);
  }
  for (auto& [param, id] : param_nodes_) {
    Parameter* p = param;
    if (p->grad.shape() != p->value.shape()) p->zero_grad();
    const Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    for (std::size_t k = 0; k < n.grad.size(); ++k) p->grad[k] += n.grad[k];
  }
}

Tensor Tape::grad(Var v) const {
  const Node& n = nodes_[v.id_];
  if (n.grad.empty()) return Tensor(n.value.shape(), 0.0);
  return n.grad;
}

}  // namespace cwtvc::nn
