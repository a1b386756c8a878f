#ifndef ELECTION_NETGEN_SPECTRAL_H_
#define ELECTION_NETGEN_SPECTRAL_H_

#include <cstddef>
#include <vector>

#include "election/netgen/graph.h"

namespace election::netgen {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Tensor vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi eigensolver for a symmetric matrix (symmetric within 1e-10,
// else ContractError). Iterates until the off-diagonal Frobenius norm drops
// below 1e-10. Each eigenvector's largest-magnitude entry is made positive.
EigenDecomposition SymEigen(const Tensor& matrix);

struct SpectralInit {
  Tensor preferences;                   // n x d, unit rows
  std::vector<std::size_t> zero_rows;   // rows left at zero (degenerate)
  bool connected = true;
};

// Rows of the d leading (largest-eigenvalue) eigenvectors of A, each scaled
// to unit length.
SpectralInit SpectralPreferences(const Graph& graph, std::size_t d);

}  // namespace election::netgen

#endif  // ELECTION_NETGEN_SPECTRAL_H_
