#ifndef ELECTION_DIFF_ADAM_H_
#define ELECTION_DIFF_ADAM_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "election/diff/tape.h"

namespace election::diff {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments for one parameter group, keyed by parameter name.
struct AdamState {
  std::map<std::string, Tensor> first_moment;
  std::map<std::string, Tensor> second_moment;
  std::int64_t step = 0;
};

// One bias-corrected Adam update of `params` from their accumulated grads.
// Parameters outside `params` are not touched.
void AdamStep(std::span<Parameter* const> params, AdamState& state, const AdamOptions& options);

}  // namespace election::diff

#endif  // ELECTION_DIFF_ADAM_H_
