#include "election/policy/policies.h"

#include "election/errors.h"

namespace election::policy {

using nn::Activation;

comm::EngineDims EngineDimsFor(const env::GameConfig& config) {
  comm::EngineDims dims;
  dims.vocab_size = static_cast<std::size_t>(config.n_vocab);
  dims.embedding_dim = static_cast<std::size_t>(config.d_vocab);
  dims.message_dim = static_cast<std::size_t>(config.d_msg);
  dims.max_length = static_cast<std::size_t>(config.l_max);
  dims.base_temperature = config.t0;
  return dims;
}

CandidatePolicy::CandidatePolicy(nn::ParamStore& store, const std::string& group,
                                 const env::GameConfig& config, Rng& rng)
    : gcn1_(store, group + "/gcn1", 2, kGcnHidden, rng),
      gcn2_(store, group + "/gcn2", kGcnHidden, kGcnHidden, rng),
      gcn3_(store, group + "/gcn3", kGcnHidden, static_cast<std::size_t>(config.d_msg), rng),
      lstm_(store, group + "/lstm", static_cast<std::size_t>(config.d_msg), kCandidateHidden, rng),
      hidden_(store, group + "/head1", kCandidateHidden + static_cast<std::size_t>(config.d), 32,
              Activation::kElu, rng),
      out_(store, group + "/head2", 32, static_cast<std::size_t>(config.d_msg), Activation::kNone,
           rng) {}

CandidatePolicy::Output CandidatePolicy::Forward(Tape& tape, Var normalized_adjacency,
                                                 Var following, Var propaganda,
                                                 const nn::LstmState& state) const {
  const auto& f = following.value();
  if (f.rank() != 2 || f.cols() != 2) throw ContractError("CandidatePolicy: following must be n x 2");
  Var h = gcn1_.Forward(tape, normalized_adjacency, following);
  h = gcn2_.Forward(tape, normalized_adjacency, h);
  h = gcn3_.Forward(tape, normalized_adjacency, h);
  Var summary = diff::ColumnMaxPool(h);
  nn::LstmState next = lstm_.Step(tape, summary, state);
  Var u = out_.Forward(tape, hidden_.Forward(tape, diff::Concat({next.h, propaganda})));
  return {u, next};
}

MemberPolicy::MemberPolicy(nn::ParamStore& store, const env::GameConfig& config, Rng& rng)
    : context1_(store, "member/context1",
                static_cast<std::size_t>(config.d_msg) + static_cast<std::size_t>(config.d), 32,
                Activation::kElu, rng),
      context2_(store, "member/context2", 32, 32, Activation::kElu, rng),
      lstm_(store, "member/lstm", 32, kMemberHidden, rng),
      msg_hidden_(store, "member/msg1", kMemberHidden, 32, Activation::kElu, rng),
      msg_out_(store, "member/msg2", 32, static_cast<std::size_t>(config.d_msg), Activation::kNone, rng),
      lambda_(store, "member/lambda", kMemberHidden, 1, Activation::kSigmoid, rng),
      target_hidden_(store, "member/target1", kMemberHidden, 32, Activation::kElu, rng),
      target_out_(store, "member/target2", 32, static_cast<std::size_t>(config.d), Activation::kNone,
                  rng) {}

MemberPolicy::Output MemberPolicy::Forward(Tape& tape, Var preference, std::span<const Var> decoded,
                                           const nn::LstmState& state, double epsilon) const {
  if (decoded.empty()) throw ContractError("MemberPolicy: empty inbox");
  std::vector<Var> rows;
  rows.reserve(decoded.size());
  for (const Var& v : decoded) rows.push_back(diff::Concat({v, preference}));
  Var context = context2_.Forward(tape, context1_.Forward(tape, diff::StackRows(rows)));
  Var summary = diff::ColumnMaxPool(context);
  nn::LstmState next = lstm_.Step(tape, summary, state);
  Output out;
  out.u_msg = msg_out_.Forward(tape, msg_hidden_.Forward(tape, next.h));
  out.lambda = diff::Scale(lambda_.Forward(tape, next.h), epsilon);
  out.target = target_out_.Forward(tape, target_hidden_.Forward(tape, next.h));
  out.state = next;
  return out;
}

Model::Model(const env::GameConfig& config, std::uint64_t seed)
    : init_rng_(Rng::ForStream(seed, Stream::kInit)),
      comm_(params_, EngineDimsFor(config), init_rng_),
      c1_(params_, "c1", config, init_rng_),
      c2_(params_, "c2", config, init_rng_),
      members_(params_, config, init_rng_) {}

}  // namespace election::policy
