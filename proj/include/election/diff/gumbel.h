#ifndef ELECTION_DIFF_GUMBEL_H_
#define ELECTION_DIFF_GUMBEL_H_

#include <cstddef>
#include <span>
#include <vector>

#include "election/diff/tape.h"
#include "election/random.h"

namespace election::diff {

// Uniform draws are clamped to this distance from 0 and 1 before the double
// log so that noise stays finite.
inline constexpr double kUniformClamp = 1e-12;

// -ln(-ln(u)). Throws DomainError unless 0 < u < 1.
double GumbelSample(double u);

// K i.i.d. Gumbel(0, 1) values.
std::vector<double> SampleGumbelNoise(Rng& rng, std::size_t k);

// softmax((logits + noise) / temperature). `temperature` is a scalar Var so a
// learned temperature receives gradients. Throws DomainError for a
// non-positive temperature.
Var GumbelSoftmax(Var logits, Var temperature, std::span<const double> noise);
Var GumbelSoftmax(Var logits, double temperature, std::span<const double> noise);

// Index of the largest entry; the smallest index wins ties.
std::size_t Argmax(std::span<const double> values);

// Forward: one-hot at Argmax(y). Backward: the incoming gradient is passed to
// y unchanged.
Var StraightThrough(Var y);

// How a categorical sample leaves the relaxation. kHard is the straight-through
// estimator used for play and training; kRelaxed forwards the soft sample so
// that whole episodes become smooth functions (gradient-check harness).
enum class SampleMode { kHard, kRelaxed };

struct CategoricalSample {
  Var onehot;         // hard one-hot (kHard) or the relaxed sample (kRelaxed)
  std::size_t index;  // Argmax of the relaxed sample
};

CategoricalSample SampleCategorical(Var logits, Var temperature, Rng& rng, SampleMode mode);

}  // namespace election::diff

#endif  // ELECTION_DIFF_GUMBEL_H_
