#ifndef ELECTION_POLICY_POLICIES_H_
#define ELECTION_POLICY_POLICIES_H_

#include <array>
#include <span>
#include <string>

#include "election/comm/engine.h"
#include "election/env/config.h"
#include "election/nn/layers.h"

namespace election::policy {

using diff::Tape;
using diff::Var;

inline constexpr std::size_t kGcnHidden = 32;
inline constexpr std::size_t kCandidateHidden = 32;
inline constexpr std::size_t kMemberHidden = 32;

// GCN over the following one-hots -> column max-pool -> LSTM -> two linear
// layers on [h; c_j] -> u_msg.
class CandidatePolicy {
 public:
  struct Output {
    Var u_msg;
    nn::LstmState state;
  };

  CandidatePolicy(nn::ParamStore& store, const std::string& group, const env::GameConfig& config,
                  Rng& rng);

  // `following` is the n x 2 matrix of F^(t) one-hots.
  Output Forward(Tape& tape, Var normalized_adjacency, Var following, Var propaganda,
                 const nn::LstmState& state) const;
  nn::LstmState InitialState(Tape& tape) const { return lstm_.ZeroState(tape); }

 private:
  nn::GcnLayer gcn1_, gcn2_, gcn3_;
  nn::LstmCell lstm_;
  nn::Linear hidden_, out_;
};

// Shared by all members. Decoded messages are read in the context of the
// member's preference, pooled, tracked by an LSTM, and turned into a message
// embedding, a step size lambda in (0, epsilon) and a target preference.
class MemberPolicy {
 public:
  struct Output {
    Var u_msg;
    Var lambda;
    Var target;  // m_hat
    nn::LstmState state;
  };

  MemberPolicy(nn::ParamStore& store, const env::GameConfig& config, Rng& rng);

  // Throws ContractError on an empty inbox.
  Output Forward(Tape& tape, Var preference, std::span<const Var> decoded,
                 const nn::LstmState& state, double epsilon) const;

 private:
  nn::Linear context1_, context2_;
  nn::LstmCell lstm_;
  nn::Linear msg_hidden_, msg_out_;
  nn::Linear lambda_;
  nn::Linear target_hidden_, target_out_;
};

// Every learnable parameter of the game, grouped as "comm", "c1", "c2" and
// "member".
class Model {
 public:
  Model(const env::GameConfig& config, std::uint64_t seed);
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;

  nn::ParamStore& params() { return params_; }
  const nn::ParamStore& params() const { return params_; }
  const comm::CommEngine& comm() const { return comm_; }
  const CandidatePolicy& candidate(int which) const { return which == 1 ? c1_ : c2_; }
  const MemberPolicy& members() const { return members_; }

  static constexpr std::array<const char*, 4> kGroups = {"comm", "c1", "c2", "member"};

 private:
  nn::ParamStore params_;
  Rng init_rng_;
  comm::CommEngine comm_;
  CandidatePolicy c1_, c2_;
  MemberPolicy members_;
};

comm::EngineDims EngineDimsFor(const env::GameConfig& config);

}  // namespace election::policy

#endif  // ELECTION_POLICY_POLICIES_H_
