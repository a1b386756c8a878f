#ifndef ELECTION_TESTS_SUPPORT_FIXTURES_H_
#define ELECTION_TESTS_SUPPORT_FIXTURES_H_

#include <utility>
#include <vector>

#include "election/netgen/graph.h"

namespace election::testing {

// Two cliques of `size` nodes (0..size-1 and size..2*size-1) joined by the
// edge (size-1, size).
inline netgen::Graph TwoCliques(int size) {
  std::vector<std::pair<int, int>> edges;
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < size; ++i)
      for (int j = i + 1; j < size; ++j) edges.emplace_back(block * size + i, block * size + j);
  edges.emplace_back(size - 1, size);
  return netgen::Graph::FromEdges(static_cast<std::size_t>(2 * size), edges);
}

inline std::vector<int> TwoCliqueLabels(int size) {
  std::vector<int> labels(static_cast<std::size_t>(2 * size), 0);
  for (int i = size; i < 2 * size; ++i) labels[static_cast<std::size_t>(i)] = 1;
  return labels;
}

inline netgen::Graph Path(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return netgen::Graph::FromEdges(static_cast<std::size_t>(n), edges);
}

}  // namespace election::testing

#endif  // ELECTION_TESTS_SUPPORT_FIXTURES_H_
