#ifndef ELECTION_NETGEN_GRAPH_H_
#define ELECTION_NETGEN_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "election/diff/tensor.h"

namespace election::netgen {

using diff::Tensor;

// Undirected simple graph on nodes 0..n-1 with sorted neighbor lists and
// optional node embeddings (n x d).
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n);
  // Duplicate edges are collapsed. Throws ValidationError on a self-loop or an
  // out-of-range endpoint.
  static Graph FromEdges(std::size_t n, const std::vector<std::pair<int, int>>& edges);

  std::size_t node_count() const { return neighbors_.size(); }
  std::size_t edge_count() const;
  const std::vector<int>& neighbors(std::size_t i) const { return neighbors_[i]; }
  bool HasEdge(int u, int v) const;
  std::vector<std::pair<int, int>> Edges() const;  // u < v, sorted

  // Fraction of the n(n-1)/2 node pairs that are connected.
  double Density() const;
  bool IsConnected() const;
  Tensor DenseAdjacency() const;
  // Hash of the sorted edge set; identifies a fixed network.
  std::uint64_t Fingerprint() const;

  const std::optional<Tensor>& embeddings() const { return embeddings_; }
  void set_embeddings(Tensor embeddings);

 private:
  void AddEdgeUnchecked(int u, int v);

  std::vector<std::vector<int>> neighbors_;
  std::optional<Tensor> embeddings_;
};

// Edge-list text format: first line "n m", then m lines "u v" (0-based,
// whitespace separated). Blank lines are ignored.
Graph LoadEdgeList(const std::filesystem::path& path);
Graph ParseEdgeList(const std::string& text);
void SaveEdgeList(const Graph& graph, const std::filesystem::path& path);

// Embedding text format: first line "n d", then n lines of d values.
void SaveEmbeddings(const Tensor& embeddings, const std::filesystem::path& path);
Tensor LoadEmbeddings(const std::filesystem::path& path);

}  // namespace election::netgen

#endif  // ELECTION_NETGEN_GRAPH_H_
