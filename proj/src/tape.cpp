#include "cone/tape.hpp"

#include "cone/error.hpp"

namespace cone::nn {

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {nodes_.size() - 1};
}

Var Tape::parameter(const Parameter& p) {
  auto it = bound_.find(&p);
  if (it != bound_.end()) return {it->second};
  Node n;
  n.external = &p.value;
  nodes_.push_back(std::move(n));
  bound_.emplace(&p, nodes_.size() - 1);
  return {nodes_.size() - 1};
}

Var Tape::record(Tensor value, BackwardFn backward) {
  if (finished_) throw Error("tape already ran backward; record a new forward pass");
  Node n;
  n.value = std::move(value);
  n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {nodes_.size() - 1};
}

const Tensor& Tape::value(Var v) const {
  const Node& n = nodes_.at(v.id);
  return n.external ? *n.external : n.value;
}

Tensor& Tape::grad(Var v) {
  Node& n = nodes_.at(v.id);
  if (!n.grad_ready) {
    n.grad = Tensor(value(v).shape());
    n.grad_ready = true;
  }
  return n.grad;
}

void Tape::backward(Var loss) {
  if (finished_) throw Error("backward may run only once per forward pass");
  if (value(loss).size() != 1) throw Error("backward needs a scalar loss");
  finished_ = true;
  grad(loss)[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.grad_ready) continue;
    if (n.backward) n.backward(*this, Var{i});
  }
}

void Tape::accumulate_grads(std::span<Parameter* const> params) const {
  if (!finished_) throw Error("accumulate_grads before backward");
  for (Parameter* p : params) {
    if (!p->trainable) continue;
    auto it = bound_.find(p);
    if (it == bound_.end()) continue;
    const Node& n = nodes_[it->second];
    if (!n.grad_ready) continue;
    auto dst = p->grad.data();
    auto src = n.grad.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
}

}  // namespace cone::nn
