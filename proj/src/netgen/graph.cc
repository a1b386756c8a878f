#include "election/netgen/graph.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "election/errors.h"

namespace election::netgen {

Graph::Graph(std::size_t n) : neighbors_(n) {}

Graph Graph::FromEdges(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw ValidationError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    if (u == v) throw ValidationError("self-loop at node " + std::to_string(u));
    g.AddEdgeUnchecked(u, v);
  }
  for (auto& nb : g.neighbors_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return g;
}

void Graph::AddEdgeUnchecked(int u, int v) {
  neighbors_[static_cast<std::size_t>(u)].push_back(v);
  neighbors_[static_cast<std::size_t>(v)].push_back(u);
}

std::size_t Graph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nb : neighbors_) twice += nb.size();
  return twice / 2;
}

bool Graph::HasEdge(int u, int v) const {
  const auto& nb = neighbors_[static_cast<std::size_t>(u)];
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> Graph::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (std::size_t u = 0; u < neighbors_.size(); ++u)
    for (int v : neighbors_[u])
      if (static_cast<int>(u) < v) out.emplace_back(static_cast<int>(u), v);
  return out;
}

double Graph::Density() const {
  const double n = static_cast<double>(node_count());
  if (n < 2) return 0.0;
  return static_cast<double>(edge_count()) / (n * (n - 1) / 2.0);
}

bool Graph::IsConnected() const {
  const std::size_t n = node_count();
  if (n == 0) return true;
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : neighbors_[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

Tensor Graph::DenseAdjacency() const {
  const std::size_t n = node_count();
  Tensor a({n, n});
  for (std::size_t u = 0; u < n; ++u)
    for (int v : neighbors_[u]) a.at(u, static_cast<std::size_t>(v)) = 1.0;
  return a;
}

std::uint64_t Graph::Fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(node_count());
  for (auto [u, v] : Edges()) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

void Graph::set_embeddings(Tensor embeddings) {
  if (embeddings.rank() != 2 || embeddings.rows() != node_count())
    throw ContractError("set_embeddings: expected " + std::to_string(node_count()) + " rows");
  embeddings_ = std::move(embeddings);
}

Graph ParseEdgeList(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError("empty edge list", 1);
  long long n = 0, m = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0)
      throw ParseError("expected header \"n m\"", line_no);
  }
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!next_line()) throw ParseError("expected " + std::to_string(m) + " edges, found " + std::to_string(e), line_no + 1);
    std::istringstream row(line);
    long long u = 0, v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra)) throw ParseError("expected \"u v\"", line_no);
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("node id out of range", line_no);
    if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop at node " + std::to_string(u));
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  if (next_line()) throw ParseError("trailing content after " + std::to_string(m) + " edges", line_no);
  return Graph::FromEdges(static_cast<std::size_t>(n), edges);
}

Graph LoadEdgeList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseEdgeList(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

void SaveEdgeList(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  const auto edges = graph.Edges();
  out << graph.node_count() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void SaveEmbeddings(const Tensor& embeddings, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << embeddings.rows() << ' ' << embeddings.cols() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < embeddings.rows(); ++i) {
    for (std::size_t j = 0; j < embeddings.cols(); ++j) out << (j ? " " : "") << embeddings.at(i, j);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Tensor LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open embeddings " + path.string());
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d)) throw ParseError(path.string() + ": expected header \"n d\"", 1);
  Tensor e({n, d});
  for (double& v : e.values())
    if (!(in >> v)) throw ParseError(path.string() + ": truncated embeddings");
  return e;
}

}  // namespace election::netgen
