#include "election/netgen/rgg.h"

#include <cmath>

#include "election/errors.h"
#include "election/netgen/sparsity.h"

namespace election::netgen {

Graph SampleRgg(std::size_t n, int d, double beta, Rng& rng) {
  if (n < 2) throw ContractError("SampleRgg: need n >= 2");
  const double delta = DeltaForSparsity(beta, d);
  const std::size_t dim = static_cast<std::size_t>(d);
  const double stddev = 1.0 / std::sqrt(static_cast<double>(d));
  Tensor e({n, dim});
  for (double& v : e.values()) v = rng.Normal(0.0, stddev);

  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double dist2 = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double diff = e.at(i, k) - e.at(j, k);
        dist2 += diff * diff;
      }
      if (dist2 <= delta) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  Graph g = Graph::FromEdges(n, edges);
  g.set_embeddings(std::move(e));
  return g;
}

}  // namespace election::netgen
