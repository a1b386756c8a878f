#include "election/analysis/cluster.h"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "election/errors.h"
#include "election/netgen/spectral.h"
#include "election/random.h"

namespace election::analysis {
namespace {

double SquaredDistance(const Tensor& a, std::size_t i, const Tensor& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const double d = a.at(i, c) - b.at(j, c);
    s += d * d;
  }
  return s;
}

void CopyRow(const Tensor& from, std::size_t i, Tensor& to, std::size_t j) {
  for (std::size_t c = 0; c < from.cols(); ++c) to.at(j, c) = from.at(i, c);
}

Tensor FarthestFirst(const Tensor& x, std::size_t k) {
  const std::size_t n = x.rows();
  Tensor centers({k, x.cols()});
  CopyRow(x, 0, centers, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    std::size_t pick = 0;
    double far = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], SquaredDistance(x, i, centers, c - 1));
      if (best[i] > far) {
        far = best[i];
        pick = i;
      }
    }
    CopyRow(x, pick, centers, c);
  }
  return centers;
}

Tensor PlusPlus(const Tensor& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows();
  Tensor centers({k, x.cols()});
  CopyRow(x, rng.UniformInt(n), centers, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      best[i] = std::min(best[i], SquaredDistance(x, i, centers, c - 1));
      total += best[i];
    }
    std::size_t pick = rng.UniformInt(n);
    if (total > 0.0) {
      double r = rng.Uniform() * total;
      for (std::size_t i = 0; i < n; ++i) {
        r -= best[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    }
    CopyRow(x, pick, centers, c);
  }
  return centers;
}

KMeansResult Lloyd(const Tensor& x, Tensor centers) {
  const std::size_t n = x.rows();
  const std::size_t k = centers.rows();
  const std::size_t dim = x.cols();
  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int arg = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = SquaredDistance(x, i, centers, c);
        if (d < best) {
          best = d;
          arg = static_cast<int>(c);
        }
      }
      if (labels[i] != arg) {
        labels[i] = arg;
        changed = true;
      }
    }
    if (!changed) break;
    Tensor sums({k, dim});
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      ++sizes[c];
      for (std::size_t j = 0; j < dim; ++j) sums.at(c, j) += x.at(i, j);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        // Empty cluster: move it onto the point worst served by its center.
        std::size_t pick = 0;
        double far = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = SquaredDistance(x, i, centers, static_cast<std::size_t>(labels[i]));
          if (d > far) {
            far = d;
            pick = i;
          }
        }
        CopyRow(x, pick, centers, c);
        labels[pick] = static_cast<int>(c);
        continue;
      }
      for (std::size_t j = 0; j < dim; ++j)
        centers.at(c, j) = sums.at(c, j) / static_cast<double>(sizes[c]);
    }
  }
  KMeansResult r;
  r.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    r.inertia += SquaredDistance(x, i, centers, static_cast<std::size_t>(labels[i]));
  r.labels = std::move(labels);
  r.centroids = std::move(centers);
  return r;
}

void Canonicalize(KMeansResult& r) {
  std::map<int, int> relabel;
  for (int& l : r.labels) {
    auto [it, inserted] = relabel.emplace(l, static_cast<int>(relabel.size()));
    l = it->second;
  }
  Tensor centers(r.centroids.shape());
  std::size_t next = relabel.size();
  for (std::size_t c = 0; c < r.centroids.rows(); ++c) {
    auto it = relabel.find(static_cast<int>(c));
    CopyRow(r.centroids, c, centers, it != relabel.end() ? static_cast<std::size_t>(it->second) : next++);
  }
  r.centroids = std::move(centers);
}

double Entropy(const std::map<int, double>& counts, double n) {
  double h = 0.0;
  for (const auto& [label, c] : counts) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace

KMeansResult KMeans(const Tensor& points, int k, int restarts, std::uint64_t seed) {
  if (points.rank() != 2) throw ContractError("KMeans: expected a matrix");
  if (k < 1 || static_cast<std::size_t>(k) > points.rows())
    throw ContractError("KMeans: need 1 <= k <= number of points");
  if (restarts < 1) throw ContractError("KMeans: restarts must be positive");
  const auto kk = static_cast<std::size_t>(k);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Tensor init;
    if (r == 0) {
      init = FarthestFirst(points, kk);
    } else {
      Rng rng = Rng::ForStream(seed, Stream::kCluster, static_cast<std::uint64_t>(r));
      init = PlusPlus(points, kk, rng);
    }
    KMeansResult run = Lloyd(points, std::move(init));
    if (run.inertia < best.inertia) best = std::move(run);
  }
  Canonicalize(best);
  return best;
}

std::vector<int> SpectralCluster(const Tensor& x, int k, std::uint64_t seed) {
  if (x.rank() != 2) throw ContractError("SpectralCluster: expected a matrix");
  if (k < 2) throw ContractError("SpectralCluster: k must be at least 2");
  const std::size_t n = x.rows();
  std::vector<std::size_t> active;
  std::vector<double> norms;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += x.at(i, j) * x.at(i, j);
    if (s > 0.0) {
      active.push_back(i);
      norms.push_back(std::sqrt(s));
    }
  }
  if (active.empty())
    throw DomainError("every row is zero; collect more traces before clustering");
  const std::size_t m = active.size();
  if (m < static_cast<std::size_t>(k))
    throw DomainError("fewer non-silent rows (" + std::to_string(m) + ") than clusters");

  Tensor affinity({m, m});
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) dot += x.at(active[a], j) * x.at(active[b], j);
      const double s = std::max(0.0, dot / (norms[a] * norms[b]));
      affinity.at(a, b) = s;
      affinity.at(b, a) = s;
    }
  }
  std::vector<double> inv_sqrt(m, 0.0);
  for (std::size_t a = 0; a < m; ++a) {
    double deg = 0.0;
    for (std::size_t b = 0; b < m; ++b) deg += affinity.at(a, b);
    if (deg > 0.0) inv_sqrt[a] = 1.0 / std::sqrt(deg);
  }
  // -L_sym = D^-1/2 S D^-1/2 - I; its leading eigenvectors are L_sym's smallest.
  Tensor neg_laplacian({m, m});
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      neg_laplacian.at(a, b) = inv_sqrt[a] * affinity.at(a, b) * inv_sqrt[b] - (a == b ? 1.0 : 0.0);
  const netgen::EigenDecomposition eig = netgen::SymEigen(neg_laplacian);

  const auto kk = static_cast<std::size_t>(k);
  Tensor embedding({m, kk});
  for (std::size_t a = 0; a < m; ++a) {
    double s = 0.0;
    for (std::size_t c = 0; c < kk; ++c) s += eig.vectors.at(a, c) * eig.vectors.at(a, c);
    const double scale = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    for (std::size_t c = 0; c < kk; ++c) embedding.at(a, c) = eig.vectors.at(a, c) * scale;
  }
  const KMeansResult km = KMeans(embedding, k, 50, seed);
  std::vector<int> labels(n, kSilentLabel);
  for (std::size_t a = 0; a < m; ++a) labels[active[a]] = km.labels[a];
  return labels;
}

double NormalizedMutualInformation(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ContractError("NMI: labelings differ in length");
  if (a.empty()) throw ContractError("NMI: empty labelings");
  const double n = static_cast<double>(a.size());
  std::map<int, double> ca, cb;
  std::map<std::pair<int, int>, double> joint;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1.0;
    cb[b[i]] += 1.0;
    joint[{a[i], b[i]}] += 1.0;
  }
  const double ha = Entropy(ca, n);
  const double hb = Entropy(cb, n);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += (c / n) * std::log(c * n / (ca[key.first] * cb[key.second]));
  }
  const double nmi = mi / (0.5 * (ha + hb));
  return std::clamp(nmi, 0.0, 1.0);
}

}  // namespace election::analysis
