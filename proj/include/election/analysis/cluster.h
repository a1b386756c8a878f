#ifndef ELECTION_ANALYSIS_CLUSTER_H_
#define ELECTION_ANALYSIS_CLUSTER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "election/diff/tensor.h"

namespace election::analysis {

using diff::Tensor;

inline constexpr int kSilentLabel = -1;

struct KMeansResult {
  std::vector<int> labels;
  Tensor centroids;  // k x dim
  double inertia = 0.0;
};

// Lloyd's algorithm, best inertia over `restarts`. Restart 0 seeds by
// farthest-first traversal from row 0; later restarts use k-means++ drawn
// from `seed`. Labels are renumbered in order of first appearance.
KMeansResult KMeans(const Tensor& points, int k, int restarts = 50, std::uint64_t seed = 0);

// Cosine-affinity spectral clustering of the rows of `x`. Zero rows get
// kSilentLabel and take no part; the rest get labels in [0, k). DomainError
// when every row is zero.
std::vector<int> SpectralCluster(const Tensor& x, int k, std::uint64_t seed = 0);

// Mutual information over the arithmetic mean of the two entropies. Two
// single-cluster labelings score 1.
double NormalizedMutualInformation(std::span<const int> a, std::span<const int> b);

}  // namespace election::analysis

#endif  // ELECTION_ANALYSIS_CLUSTER_H_
