#include "election/netgen/spectral.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "election/errors.h"

namespace election::netgen {
namespace {

double OffDiagonalNorm(const Tensor& a) {
  double acc = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) acc += a.at(i, j) * a.at(i, j);
  return std::sqrt(acc);
}

}  // namespace

EigenDecomposition SymEigen(const Tensor& matrix) {
  if (matrix.rank() != 2 || matrix.rows() != matrix.cols())
    throw ContractError("SymEigen: expected a square matrix");
  const std::size_t n = matrix.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(matrix.at(i, j) - matrix.at(j, i)) > 1e-10)
        throw ContractError("SymEigen: matrix is not symmetric");

  Tensor a = matrix;
  Tensor v({n, n});
  for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && OffDiagonalNorm(a) >= 1e-10; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - s * aqk;
          a.at(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](std::size_t x, std::size_t y) { return a.at(x, x) > a.at(y, y); });
  EigenDecomposition out{std::vector<double>(n), Tensor({n, n})};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a.at(src, src);
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v.at(i, src)) > std::abs(v.at(big, src))) big = i;
    const double sign = v.at(big, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, k) = sign * v.at(i, src);
  }
  return out;
}

SpectralInit SpectralPreferences(const Graph& graph, std::size_t d) {
  const std::size_t n = graph.node_count();
  if (d > n) throw ContractError("SpectralPreferences: d exceeds node count");
  const EigenDecomposition eig = SymEigen(graph.DenseAdjacency());
  SpectralInit out{Tensor({n, d}), {}, graph.IsConnected()};
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t k = 0; k < d; ++k) norm += eig.vectors.at(i, k) * eig.vectors.at(i, k);
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      out.zero_rows.push_back(i);
      continue;
    }
    for (std::size_t k = 0; k < d; ++k) out.preferences.at(i, k) = eig.vectors.at(i, k) / norm;
  }
  return out;
}

}  // namespace election::netgen
