#ifndef ELECTION_TRAIN_EPISODE_H_
#define ELECTION_TRAIN_EPISODE_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "election/env/game.h"
#include "election/netgen/graph.h"
#include "election/policy/policies.h"

namespace election::train {

using diff::Tensor;
using diff::Var;

// Episode indices at or above this value are reserved for evaluation, so
// held-out games never replay a training episode's randomness.
inline constexpr std::uint64_t kEvalIndexBase = std::uint64_t{1} << 62;

// The network an episode is played on, with everything derived from it.
struct PreparedNetwork {
  std::shared_ptr<const netgen::Graph> graph;
  Tensor normalized_adjacency;
  std::shared_ptr<const Tensor> fixed_preferences;  // null for RGG
  std::uint64_t id = 0;
};

// Where episode networks come from: a fresh RGG per episode, or one fixed
// graph whose spectral initialization is computed once.
class NetworkSource {
 public:
  static NetworkSource Rgg(const env::GameConfig& config);
  static NetworkSource Fixed(netgen::Graph graph, const env::GameConfig& config);
  // Rgg or Fixed(LoadEdgeList(config.graph_file)) depending on config.network.
  static NetworkSource FromConfig(const env::GameConfig& config);

  PreparedNetwork Prepare(std::uint64_t master_seed, std::uint64_t episode) const;
  bool fixed() const { return static_cast<bool>(fixed_.graph); }

 private:
  std::size_t n_ = 0;
  int d_ = 2;
  double beta_ = 0.05;
  PreparedNetwork fixed_;
};

struct MessageRecord {
  int sender = 0;  // member id, or comm::kCandidateOne / kCandidateTwo
  std::vector<int> symbols;
};

struct StepRecord {
  int step = 0;
  std::vector<int> following;  // F^(t): 0 = C1, 1 = C2
  Tensor preferences;          // m^(t), before this step's updates
  std::vector<MessageRecord> messages;
};

struct EpisodeTrace {
  std::uint64_t episode = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t graph_id = 0;
  std::string mask;
  Tensor propaganda;  // c1 (c2 = -c1)
  std::vector<StepRecord> steps;
  Tensor final_preferences;  // m^(T+1)
  std::vector<int> votes;
  int votes1 = 0;
  int votes2 = 0;
  double reward_c1 = 0.0;
  double reward_c2 = 0.0;
  double reward_members = 0.0;

  int Winner() const { return votes1 > votes2 ? 1 : (votes2 > votes1 ? 2 : 0); }
  // FNV-1a over every recorded field, doubles by bit pattern.
  std::uint64_t Hash() const;
};

struct EpisodeOptions {
  env::ActiveMask mask = env::ActiveMask::kBoth;
  diff::SampleMode sample_mode = diff::SampleMode::kHard;
  bool record = true;
  bool requires_grad = true;
};

struct Episode {
  std::unique_ptr<diff::Tape> tape;
  env::RewardRecord rewards;
  EpisodeTrace trace;
};

// Plays T propaganda steps and the vote. Every step: F^(t) is drawn from the
// current preferences, active candidates broadcast to their followers,
// members with a non-empty inbox decode it, move their preference and
// broadcast to their neighbors; messages arrive one step later.
Episode RunEpisode(const env::GameConfig& config, const PreparedNetwork& network,
                   const policy::Model& model, Rng& noise, const EpisodeOptions& options,
                   std::uint64_t episode_index = 0);

}  // namespace election::train

#endif  // ELECTION_TRAIN_EPISODE_H_
