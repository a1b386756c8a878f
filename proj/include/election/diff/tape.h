#ifndef ELECTION_DIFF_TAPE_H_
#define ELECTION_DIFF_TAPE_H_

#include <deque>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "election/diff/tensor.h"

namespace election::diff {

// A learnable tensor with its accumulated gradient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; valid as long as the
// tape is alive.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }

  const Tensor& value() const;
  // Gradient after Tape::Backward; empty if the node does not require one.
  const Tensor& grad() const;
  bool requires_grad() const;

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Records operations in creation order, which is a topological order of the
// computation graph. Backward walks the record once in reverse.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, const Tensor& grad_out)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Tensor value);
  // A leaf that receives a gradient but is not tied to a Parameter.
  Var Input(Tensor value);
  // Leaf for a parameter. Repeated calls return the same node. Backward adds
  // the node's gradient into param.grad. With gradients disabled this is a
  // constant.
  Var Param(Parameter& param);

  // Appends an operation node. `backward` is dropped when no input requires
  // a gradient.
  Var Record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);
  Var Record(Tensor value, const std::vector<Var>& inputs, BackwardFn backward);

  void Backward(Var root);

  void set_grad_enabled(bool enabled) { grad_enabled_ = enabled; }
  bool grad_enabled() const { return grad_enabled_; }

  const Tensor& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  const Tensor& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }
  bool requires_grad(int id) const { return nodes_[static_cast<std::size_t>(id)].requires_grad; }
  // Gradient slot of `id`, zero-initialized on first use; nullptr when the
  // node does not require a gradient.
  Tensor* MutableGrad(int id);
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  Var Append(Node node);
  void CheckOwned(Var v) const;

  std::deque<Node> nodes_;
  std::unordered_map<const Parameter*, int> param_nodes_;
  bool grad_enabled_ = true;
  bool backward_done_ = false;
};

}  // namespace election::diff

#endif  // ELECTION_DIFF_TAPE_H_
