#ifndef ELECTION_NETGEN_RGG_H_
#define ELECTION_NETGEN_RGG_H_

#include <cstddef>

#include "election/netgen/graph.h"
#include "election/random.h"

namespace election::netgen {

// Random geometric graph: embeddings e_i ~ N(0, I/d), edge (i, j) iff
// ||e_i - e_j||^2 <= DeltaForSparsity(beta, d). Embeddings are kept on the
// graph. Requires n >= 2.
Graph SampleRgg(std::size_t n, int d, double beta, Rng& rng);

}  // namespace election::netgen

#endif  // ELECTION_NETGEN_RGG_H_
