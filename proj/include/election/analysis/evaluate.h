#ifndef ELECTION_ANALYSIS_EVALUATE_H_
#define ELECTION_ANALYSIS_EVALUATE_H_

#include <cstdint>
#include <vector>

#include "election/policy/policies.h"
#include "election/train/episode.h"

namespace election::analysis {

struct ScoreRow {
  env::RewardMode mode = env::RewardMode::kBiased;
  env::ActiveMask mask = env::ActiveMask::kBoth;
  double c1_frac = 0.0;
  double c2_frac = 0.0;
  double tie_frac = 0.0;
  std::int64_t episodes = 0;
};

using ScoreTable = std::vector<ScoreRow>;

struct EvalOptions {
  env::ActiveMask mask = env::ActiveMask::kBoth;
  std::int64_t episodes = 500;
  int workers = 1;
  std::uint64_t seed = 0;   // master seed for graphs and noise
  bool record = false;      // keep full traces
};

struct EvalResult {
  ScoreRow score;
  std::vector<train::EpisodeTrace> traces;  // in episode order
};

// Plays held-out episodes without touching the parameters. Episode e uses the
// reserved evaluation index range, so results do not depend on `workers`.
EvalResult Evaluate(const policy::Model& model, const env::GameConfig& config,
                    const train::NetworkSource& source, const EvalOptions& options);

}  // namespace election::analysis

#endif  // ELECTION_ANALYSIS_EVALUATE_H_
