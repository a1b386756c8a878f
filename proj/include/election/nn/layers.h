#ifndef ELECTION_NN_LAYERS_H_
#define ELECTION_NN_LAYERS_H_

#include <cstddef>
#include <string>

#include "election/diff/ops.h"
#include "election/diff/params.h"

namespace election::nn {

using diff::Parameter;
using diff::ParamStore;
using diff::Tape;
using diff::Tensor;
using diff::Var;

enum class Activation { kNone, kElu, kSigmoid, kSoftplus };

// Parameters are initialized uniformly in +-1/sqrt(fan_in).
double InitBound(std::size_t fan_in);

Var Activate(Var x, Activation activation);

class Linear {
 public:
  Linear(ParamStore& store, const std::string& name, std::size_t in, std::size_t out,
         Activation activation, Rng& rng);

  // activation(W x + b); x may be [in] or [k, in].
  Var Forward(Tape& tape, Var x) const;

  std::size_t in() const { return in_; }
  std::size_t out() const { return out_; }

 private:
  Parameter* weight_;
  Parameter* bias_;
  std::size_t in_, out_;
  Activation activation_;
};

struct LstmState {
  Var h;
  Var c;
};

// Standard LSTM cell. Each gate owns a (hidden x (input + hidden)) weight and
// a (hidden) bias; the gates read the concatenation [x; h].
class LstmCell {
 public:
  LstmCell(ParamStore& store, const std::string& name, std::size_t input, std::size_t hidden,
           Rng& rng);

  LstmState Step(Tape& tape, Var x, const LstmState& state) const;
  LstmState ZeroState(Tape& tape) const;

  std::size_t input_size() const { return input_; }
  std::size_t hidden_size() const { return hidden_; }

 private:
  struct Gate {
    Parameter* weight;
    Parameter* bias;
  };
  Gate input_gate_, forget_gate_, cell_gate_, output_gate_;
  std::size_t input_, hidden_;
};

// D^-1/2 (A + I) D^-1/2 for a dense 0/1 adjacency matrix.
Tensor NormalizeAdjacency(const Tensor& adjacency);

// ELU(A_norm H W).
class GcnLayer {
 public:
  GcnLayer(ParamStore& store, const std::string& name, std::size_t in, std::size_t out, Rng& rng);

  Var Forward(Tape& tape, Var normalized_adjacency, Var features) const;

 private:
  Parameter* weight_;
  std::size_t in_, out_;
};

class EmbeddingTable {
 public:
  EmbeddingTable(ParamStore& store, const std::string& name, std::size_t count, std::size_t dim,
                 Rng& rng);

  // onehot^T * table: the exact row for a hard one-hot, a convex mix for a
  // relaxed one.
  Var Lookup(Tape& tape, Var onehot) const;

  std::size_t count() const { return count_; }
  std::size_t dim() const { return dim_; }

 private:
  Parameter* table_;
  std::size_t count_, dim_;
};

}  // namespace election::nn

#endif  // ELECTION_NN_LAYERS_H_
