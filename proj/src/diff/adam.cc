#include "election/diff/adam.h"

#include <cmath>

#include "election/errors.h"

namespace election::diff {

void AdamStep(std::span<Parameter* const> params, AdamState& state, const AdamOptions& options) {
  for (const Parameter* p : params) {
    if (p->grad.size() != p->value.size()) {
      throw ContractError("AdamStep: gradient shape " + ShapeString(p->grad.shape()) + " for " +
                          p->name + " " + ShapeString(p->value.shape()));
    }
    for (auto* moments : {&state.first_moment, &state.second_moment}) {
      auto it = moments->find(p->name);
      if (it != moments->end() && !it->second.SameShape(p->value))
        throw ContractError("AdamStep: moment shape mismatch for " + p->name);
    }
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (Parameter* p : params) {
    auto [m_it, m_new] = state.first_moment.try_emplace(p->name, p->value.shape());
    auto [v_it, v_new] = state.second_moment.try_emplace(p->name, p->value.shape());
    Tensor& m = m_it->second;
    Tensor& v = v_it->second;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double g = p->grad[i];
      m[i] = options.beta1 * m[i] + (1.0 - options.beta1) * g;
      v[i] = options.beta2 * v[i] + (1.0 - options.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p->value[i] -= options.learning_rate * m_hat / (std::sqrt(v_hat) + options.epsilon);
    }
  }
}

}  // namespace election::diff
