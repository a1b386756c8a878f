#ifndef ELECTION_DIFF_OPS_H_
#define ELECTION_DIFF_OPS_H_

#include <cstddef>
#include <vector>

#include "election/diff/tape.h"

// Differentiable operations on Vars. All inputs of one call must live on the
// same tape. Shape mismatches throw ContractError.
namespace election::diff {

Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);  // elementwise
Var Scale(Var x, double factor);
Var AddScalar(Var x, double offset);
// x * s for a scalar (size-1) Var s.
Var ScaleBy(Var x, Var s);

Var Elu(Var x);
Var Sigmoid(Var x);
Var Tanh(Var x);
// ln(1 + e^x), evaluated without overflow.
Var Softplus(Var x);

Var Sum(Var x);
Var Dot(Var a, Var b);
Var SquaredNorm(Var x);

// W[r,c] * x[c] -> [r].
Var MatVec(Var w, Var x);
// A[n,m] * B[m,p] -> [n,p].
Var MatMul(Var a, Var b);
// Linear map with bias. x is [in] -> [out], or [k,in] -> [k,out] applied per row.
Var Affine(Var x, Var w, Var b);

// Scalars count as length-1 vectors.
Var Concat(const std::vector<Var>& parts);
Var Slice(Var x, std::size_t begin, std::size_t length);
Var StackRows(const std::vector<Var>& rows);
Var Row(Var m, std::size_t r);

// out_j = max_i M_ij. Gradient goes to the smallest row index among ties.
Var ColumnMaxPool(Var m);
// table[count,dim]^T * weights[count] -> [dim].
Var Embed(Var table, Var weights);

// Same value, no gradient path.
Var Detach(Var x);

// softmax with max-subtraction; the building block of GumbelSoftmax.
Var Softmax(Var logits);

}  // namespace election::diff

#endif  // ELECTION_DIFF_OPS_H_
