#include "election/nn/layers.h"

#include <cmath>

#include "election/errors.h"

namespace election::nn {

double InitBound(std::size_t fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

Var Activate(Var x, Activation activation) {
  switch (activation) {
    case Activation::kNone:
      return x;
    case Activation::kElu:
      return diff::Elu(x);
    case Activation::kSigmoid:
      return diff::Sigmoid(x);
    case Activation::kSoftplus:
      return diff::Softplus(x);
  }
  return x;
}

Linear::Linear(ParamStore& store, const std::string& name, std::size_t in, std::size_t out,
               Activation activation, Rng& rng)
    : in_(in), out_(out), activation_(activation) {
  const double bound = InitBound(in);
  weight_ = &store.Create(name + "/weight", {out, in}, bound, rng);
  bias_ = &store.Create(name + "/bias", {out}, bound, rng);
}

Var Linear::Forward(Tape& tape, Var x) const {
  return Activate(diff::Affine(x, tape.Param(*weight_), tape.Param(*bias_)), activation_);
}

LstmCell::LstmCell(ParamStore& store, const std::string& name, std::size_t input,
                   std::size_t hidden, Rng& rng)
    : input_(input), hidden_(hidden) {
  const double bound = InitBound(input + hidden);
  auto make = [&](const char* gate) {
    return Gate{&store.Create(name + "/" + gate + "/weight", {hidden, input + hidden}, bound, rng),
                &store.Create(name + "/" + gate + "/bias", {hidden}, bound, rng)};
  };
  input_gate_ = make("input");
  forget_gate_ = make("forget");
  cell_gate_ = make("cell");
  output_gate_ = make("output");
}

LstmState LstmCell::Step(Tape& tape, Var x, const LstmState& state) const {
  if (x.value().size() != input_ || state.h.value().size() != hidden_ ||
      state.c.value().size() != hidden_) {
    throw ContractError("LstmCell::Step: dimension mismatch");
  }
  Var xh = diff::Concat({x, state.h});
  auto gate = [&](const Gate& g) {
    return diff::Affine(xh, tape.Param(*g.weight), tape.Param(*g.bias));
  };
  Var i = diff::Sigmoid(gate(input_gate_));
  Var f = diff::Sigmoid(gate(forget_gate_));
  Var g = diff::Tanh(gate(cell_gate_));
  Var o = diff::Sigmoid(gate(output_gate_));
  Var c = diff::Add(diff::Mul(f, state.c), diff::Mul(i, g));
  Var h = diff::Mul(o, diff::Tanh(c));
  return {h, c};
}

LstmState LstmCell::ZeroState(Tape& tape) const {
  return {tape.Constant(Tensor({hidden_})), tape.Constant(Tensor({hidden_}))};
}

Tensor NormalizeAdjacency(const Tensor& adjacency) {
  if (adjacency.rank() != 2 || adjacency.rows() != adjacency.cols())
    throw ContractError("NormalizeAdjacency: expected a square matrix");
  const std::size_t n = adjacency.rows();
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    double degree = 1.0;  // self-loop
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) degree += adjacency.at(i, j);
    inv_sqrt_degree[i] = 1.0 / std::sqrt(degree);
  }
  Tensor out({n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double a = (i == j) ? 1.0 : adjacency.at(i, j);
      out.at(i, j) = a * inv_sqrt_degree[i] * inv_sqrt_degree[j];
    }
  return out;
}

GcnLayer::GcnLayer(ParamStore& store, const std::string& name, std::size_t in, std::size_t out,
                   Rng& rng)
    : in_(in), out_(out) {
  weight_ = &store.Create(name + "/weight", {in, out}, InitBound(in), rng);
}

Var GcnLayer::Forward(Tape& tape, Var normalized_adjacency, Var features) const {
  const Tensor& a = normalized_adjacency.value();
  const Tensor& h = features.value();
  if (h.rank() != 2 || h.cols() != in_ || a.rank() != 2 || a.rows() != h.rows()) {
    throw ContractError("GcnLayer: adjacency " + diff::ShapeString(a.shape()) + " with features " +
                        diff::ShapeString(h.shape()));
  }
  return diff::Elu(diff::MatMul(normalized_adjacency, diff::MatMul(features, tape.Param(*weight_))));
}

EmbeddingTable::EmbeddingTable(ParamStore& store, const std::string& name, std::size_t count,
                               std::size_t dim, Rng& rng)
    : count_(count), dim_(dim) {
  table_ = &store.Create(name, {count, dim}, InitBound(count), rng);
}

Var EmbeddingTable::Lookup(Tape& tape, Var onehot) const {
  if (onehot.value().size() != count_) throw ContractError("EmbeddingTable: one-hot length mismatch");
  return diff::Embed(tape.Param(*table_), onehot);
}

}  // namespace election::nn
