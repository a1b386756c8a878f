#ifndef ELECTION_ENV_GAME_H_
#define ELECTION_ENV_GAME_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "election/comm/engine.h"
#include "election/env/config.h"
#include "election/netgen/graph.h"
#include "election/nn/layers.h"

namespace election::env {

using diff::Tape;
using diff::Tensor;
using diff::Var;

// A member's pick between the two candidates: index 0 is C1, 1 is C2.
struct Choice {
  Var onehot;
  int index = 0;
};

// Logits are -||m - c_j||^2 / d (or +, with literal_logits), drawn through
// Gumbel-Softmax at `temperature` and hardened with straight-through.
// Used for both following and voting.
Choice SampleChoice(Var preference, Var c1, Var c2, double temperature, Rng& rng,
                    diff::SampleMode mode = diff::SampleMode::kHard, bool literal_logits = false);

// (1 - lambda) m + lambda m_hat. Requires 0 <= lambda <= epsilon.
Var UpdatePreference(Var preference, Var target, Var lambda, double epsilon);

// Inbox of every member for step t+1, as indices into `broadcasts` (the
// messages sent at step t). Members hear all broadcasting neighbors plus the
// candidate they followed at step t, if that candidate is active.
std::vector<std::vector<int>> RouteMessages(const netgen::Graph& graph,
                                            std::span<const int> following,
                                            std::span<const comm::Message> broadcasts,
                                            ActiveMask mask);

struct RewardRecord {
  Var candidate1;  // differentiable reward of C1
  Var candidate2;  // differentiable reward of C2
  Var members;     // mean follower reward
  int votes1 = 0;
  int votes2 = 0;
  std::vector<int> votes;  // 0 = C1, 1 = C2 per member

  // 1 if C1 won, 2 if C2 won, 0 on a tie.
  int Winner() const { return votes1 > votes2 ? 1 : (votes2 > votes1 ? 2 : 0); }
};

// Candidate rewards are (N1, N2) when unbiased and (N1, -N2) when biased; the
// member reward is the mean over members of -||m_i - c(vote_i)||^2.
RewardRecord ComputeRewards(std::span<const Choice> votes, std::span<const Var> final_preferences,
                            Var c1, Var c2, RewardMode mode);

struct StateDims {
  std::size_t member_hidden = 32;
  std::size_t candidate_hidden = 32;
};

struct GameState {
  std::vector<Var> preferences;  // m_i^(t)
  Var c1, c2;                    // propaganda vectors (constants)
  std::vector<Choice> following; // F^(t)
  std::vector<comm::Message> in_flight;      // messages sent at t-1
  std::vector<std::vector<int>> inbox;       // per member, indices into in_flight
  std::vector<nn::LstmState> member_states;
  std::array<nn::LstmState, 2> candidate_states;
  int t = 1;

  std::vector<int> FollowingIndices() const;
  Tensor PreferenceSnapshot() const;
};

// Fresh episode: c1 ~ N(0, I), c2 = -c1; m^(1) from the graph embeddings
// (RGG) or `fixed_preferences` (fixed network, typically the spectral rows);
// F^(1) sampled; empty inboxes; member LSTM cells start at [m_i^(1); 0].
GameState InitEpisode(const GameConfig& config, const netgen::Graph& graph,
                      const Tensor* fixed_preferences, Tape& tape, Rng& rng,
                      const StateDims& dims, diff::SampleMode mode = diff::SampleMode::kHard);

}  // namespace election::env

#endif  // ELECTION_ENV_GAME_H_
