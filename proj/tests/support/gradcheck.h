// Central finite differences against tape gradients.
#ifndef ELECTION_TESTS_SUPPORT_GRADCHECK_H_
#define ELECTION_TESTS_SUPPORT_GRADCHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "election/diff/tape.h"
#include "election/random.h"

namespace election::testing {

struct GradCheckResult {
  double relative_error = 0.0;  // ||analytic - numeric|| / max(||analytic||, ||numeric||)
  double analytic_norm = 0.0;
  std::size_t coordinates = 0;
};

// Builds the scalar `f` once with gradients and once per probed coordinate
// at +-h without. `probe` picks (parameter index, entry) pairs; by default
// every entry of every parameter.
inline GradCheckResult GradCheck(std::span<diff::Parameter* const> params,
                                 const std::function<diff::Var(diff::Tape&)>& f, double h = 1e-6,
                                 std::vector<std::pair<std::size_t, std::size_t>> probe = {}) {
  for (diff::Parameter* p : params) p->grad = diff::Tensor(p->value.shape());
  {
    diff::Tape tape;
    tape.Backward(f(tape));
  }
  if (probe.empty()) {
    for (std::size_t k = 0; k < params.size(); ++k)
      for (std::size_t i = 0; i < params[k]->value.size(); ++i) probe.emplace_back(k, i);
  }
  auto eval = [&] {
    diff::Tape tape;
    tape.set_grad_enabled(false);
    return f(tape).value().item();
  };
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  for (auto [k, i] : probe) {
    diff::Parameter& p = *params[k];
    const double saved = p.value[i];
    p.value[i] = saved + h;
    const double up = eval();
    p.value[i] = saved - h;
    const double down = eval();
    p.value[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double analytic = p.grad.size() == 0 ? 0.0 : p.grad[i];
    diff2 += (analytic - numeric) * (analytic - numeric);
    a2 += analytic * analytic;
    n2 += numeric * numeric;
  }
  GradCheckResult r;
  r.analytic_norm = std::sqrt(a2);
  r.coordinates = probe.size();
  const double scale = std::max({std::sqrt(a2), std::sqrt(n2), 1e-12});
  r.relative_error = std::sqrt(diff2) / scale;
  return r;
}

inline std::vector<std::pair<std::size_t, std::size_t>> RandomProbe(
    std::span<diff::Parameter* const> params, std::size_t per_param, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> probe;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const std::size_t size = params[k]->value.size();
    for (std::size_t j = 0; j < std::min(per_param, size); ++j) probe.emplace_back(k, rng.UniformInt(size));
  }
  return probe;
}

// Fills a parameter with N(0, scale^2) entries.
inline diff::Parameter RandomParameter(const char* name, diff::Shape shape, Rng& rng,
                                       double scale = 1.0) {
  diff::Parameter p;
  p.name = name;
  p.value = diff::Tensor(std::move(shape));
  for (double& v : p.value.values()) v = rng.Normal(0.0, scale);
  return p;
}

}  // namespace election::testing

#endif  // ELECTION_TESTS_SUPPORT_GRADCHECK_H_
