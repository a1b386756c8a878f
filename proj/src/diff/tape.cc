#include "election/diff/tape.h"

#include "election/errors.h"

namespace election::diff {

const Tensor& Var::value() const {
  if (!tape_) throw ContractError("value() on an unbound Var");
  return tape_->value(id_);
}

const Tensor& Var::grad() const {
  if (!tape_) throw ContractError("grad() on an unbound Var");
  return tape_->grad(id_);
}

bool Var::requires_grad() const { return tape_ && tape_->requires_grad(id_); }

Var Tape::Append(Node node) {
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

void Tape::CheckOwned(Var v) const {
  if (v.tape() != this) throw ContractError("Var belongs to a different tape");
}

Var Tape::Constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  return Append(std::move(node));
}

Var Tape::Input(Tensor value) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = grad_enabled_;
  return Append(std::move(node));
}

Var Tape::Param(Parameter& param) {
  if (auto it = param_nodes_.find(&param); it != param_nodes_.end()) return Var(this, it->second);
  Node node;
  node.value = param.value;
  if (grad_enabled_) {
    node.requires_grad = true;
    node.param = &param;
  }
  Var v = Append(std::move(node));
  param_nodes_.emplace(&param, v.id());
  return v;
}

Var Tape::Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  bool needs = false;
  for (const Var& v : inputs) {
    CheckOwned(v);
    needs = needs || requires_grad(v.id());
  }
  Node node;
  node.value = std::move(value);
  if (needs) {
    node.requires_grad = true;
    node.backward = std::move(backward);
  }
  return Append(std::move(node));
}

Var Tape::Record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward) {
  bool needs = false;
  for (const Var& v : inputs) {
    CheckOwned(v);
    needs = needs || requires_grad(v.id());
  }
  Node node;
  node.value = std::move(value);
  if (needs) {
    node.requires_grad = true;
    node.backward = std::move(backward);
  }
  return Append(std::move(node));
}

Tensor* Tape::MutableGrad(int id) {
  Node& node = nodes_[static_cast<std::size_t>(id)];
  if (!node.requires_grad) return nullptr;
  if (node.grad.size() != node.value.size()) node.grad = Tensor(node.value.shape());
  return &node.grad;
}

void Tape::Backward(Var root) {
  CheckOwned(root);
  if (root.value().size() != 1) {
    throw ContractError("Backward: root must be scalar, got shape " +
                        ShapeString(root.value().shape()));
  }
  if (backward_done_) throw ContractError("Backward: tape already consumed");
  backward_done_ = true;
  if (Tensor* g = MutableGrad(root.id())) (*g)[0] = 1.0;

  for (int id = root.id(); id >= 0; --id) {
    Node& node = nodes_[static_cast<std::size_t>(id)];
    if (!node.backward || node.grad.size() == 0) continue;
    node.backward(*this, node.grad);
  }
  for (Node& node : nodes_) {
    if (!node.param || node.grad.size() == 0) continue;
    if (node.param->grad.size() != node.value.size()) node.param->grad = Tensor(node.value.shape());
    node.param->grad.Accumulate(node.grad);
  }
}

}  // namespace election::diff
