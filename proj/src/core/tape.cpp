#include "absa/core/tape.hpp"

#include "absa/core/error.hpp"

namespace absa::core {

const Tensor& Var::value() const {
  if (!tape_) throw ArgumentError("value() on an empty Var");
  return tape_->value(id_);
}

const Tensor& Var::grad() const {
  if (!tape_) throw ArgumentError("grad() on an empty Var");
  return tape_->grad(id_);
}

bool Var::requires_grad() const { return tape_ && tape_->requires_grad(id_); }

Var Tape::constant(Tensor value) {
  Node n;
  n.op = "constant";
  n.owned = std::move(value);
  n.leaf = true;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::variable(Tensor value) {
  Node n;
  n.op = "variable";
  n.owned = std::move(value);
  n.leaf = true;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::parameter(Parameter& p) {
  if (p.grad.shape() != p.value.shape()) p.zero_grad();
  Node n;
  n.op = "parameter:" + p.name;
  n.param = &p;
  n.leaf = true;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(std::string_view op, Tensor value, const std::vector<Var>& inputs, BackwardFn backward) {
  Node n;
  n.op = std::string(op);
  n.owned = std::move(value);
  for (const auto& in : inputs) {
    check_owned(in);
    n.requires_grad = n.requires_grad || nodes_[in.id()].requires_grad;
  }
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

void Tape::backward(const Var& loss) {
  check_owned(loss);
  const Tensor& lv = value(loss.id());
  if (lv.size() != 1) {
    throw ArgumentError("backward needs a scalar loss, got shape " + shape_string(lv.shape()));
  }
  for (auto& n : nodes_) {
    if (!n.leaf) n.grad = Tensor();
  }
  if (!nodes_[loss.id()].requires_grad) return;
  grad(loss.id())[0] += 1.0;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.backward || n.grad.empty()) continue;
    n.backward(*this, n.grad);
  }
}

const Tensor& Tape::value(std::size_t id) const {
  const Node& n = nodes_.at(id);
  return n.param ? n.param->value : n.owned;
}

bool Tape::requires_grad(std::size_t id) const { return nodes_.at(id).requires_grad; }

Tensor& Tape::grad(std::size_t id) {
  Node& n = nodes_.at(id);
  if (n.param) {
    if (n.param->grad.shape() != n.param->value.shape()) n.param->zero_grad();
    return n.param->grad;
  }
  if (n.grad.empty()) n.grad = Tensor::zeros_like(n.owned);
  return n.grad;
}

std::string_view Tape::op_name(std::size_t id) const { return nodes_.at(id).op; }

void Tape::check_owned(const Var& v) const {
  if (v.tape() != this) throw ArgumentError("Var belongs to a different tape");
}

}  // namespace absa::core
