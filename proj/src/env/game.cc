#include "election/env/game.h"

#include "election/errors.h"
#include "election/netgen/spectral.h"

namespace election::env {

Choice SampleChoice(Var preference, Var c1, Var c2, double temperature, Rng& rng,
                    diff::SampleMode mode, bool literal_logits) {
  const Tensor& m = preference.value();
  if (m.rank() != 1 || !m.SameShape(c1.value()) || !m.SameShape(c2.value()))
    throw ContractError("SampleChoice: preference/propaganda dimension mismatch");
  const double sign = literal_logits ? 1.0 : -1.0;
  const double scale = sign / static_cast<double>(m.size());
  Var logits = diff::Concat({diff::Scale(diff::SquaredNorm(diff::Sub(preference, c1)), scale),
                             diff::Scale(diff::SquaredNorm(diff::Sub(preference, c2)), scale)});
  const diff::CategoricalSample s =
      diff::SampleCategorical(logits, preference.tape()->Constant(Tensor::Scalar(temperature)), rng, mode);
  return {s.onehot, static_cast<int>(s.index)};
}

Var UpdatePreference(Var preference, Var target, Var lambda, double epsilon) {
  if (lambda.value().size() != 1) throw ContractError("UpdatePreference: lambda must be scalar");
  const double l = lambda.value()[0];
  if (!(l >= 0.0 && l <= epsilon)) {
    throw ContractError("UpdatePreference: lambda " + std::to_string(l) + " outside [0, " +
                        std::to_string(epsilon) + "]");
  }
  Var keep = diff::AddScalar(diff::Scale(lambda, -1.0), 1.0);
  return diff::Add(diff::ScaleBy(preference, keep), diff::ScaleBy(target, lambda));
}

std::vector<std::vector<int>> RouteMessages(const netgen::Graph& graph,
                                            std::span<const int> following,
                                            std::span<const comm::Message> broadcasts,
                                            ActiveMask mask) {
  const std::size_t n = graph.node_count();
  if (following.size() != n) throw ContractError("RouteMessages: following size mismatch");
  std::vector<std::vector<int>> inbox(n);
  for (std::size_t k = 0; k < broadcasts.size(); ++k) {
    const int sender = broadcasts[k].sender;
    const int id = static_cast<int>(k);
    if (sender >= 0) {
      for (int v : graph.neighbors(static_cast<std::size_t>(sender)))
        inbox[static_cast<std::size_t>(v)].push_back(id);
      continue;
    }
    const int candidate = sender == comm::kCandidateOne ? 1 : 2;
    if (!IsActive(mask, candidate)) continue;
    for (std::size_t i = 0; i < n; ++i)
      if (following[i] == candidate - 1) inbox[i].push_back(id);
  }
  return inbox;
}

RewardRecord ComputeRewards(std::span<const Choice> votes, std::span<const Var> final_preferences,
                            Var c1, Var c2, RewardMode mode) {
  const std::size_t n = votes.size();
  if (n == 0 || final_preferences.size() != n)
    throw ContractError("ComputeRewards: votes/preferences size mismatch");
  Tape& tape = *c1.tape();
  RewardRecord r;
  std::vector<Var> rows;
  std::vector<Var> member_terms;
  for (std::size_t i = 0; i < n; ++i) {
    rows.push_back(votes[i].onehot);
    r.votes.push_back(votes[i].index);
    (votes[i].index == 0 ? r.votes1 : r.votes2) += 1;
    Var dist = diff::Concat({diff::SquaredNorm(diff::Sub(final_preferences[i], c1)),
                             diff::SquaredNorm(diff::Sub(final_preferences[i], c2))});
    member_terms.push_back(diff::Dot(votes[i].onehot, dist));
  }
  // Column sums of the n x 2 vote matrix: (N1, N2).
  Var counts = diff::Embed(diff::StackRows(rows), tape.Constant(Tensor(diff::Shape{n}, 1.0)));
  Var n1 = diff::Sum(diff::Slice(counts, 0, 1));
  Var n2 = diff::Sum(diff::Slice(counts, 1, 1));
  r.candidate1 = n1;
  r.candidate2 = mode == RewardMode::kUnbiased ? n2 : diff::Scale(n2, -1.0);
  r.members = diff::Scale(diff::Sum(diff::Concat(member_terms)), -1.0 / static_cast<double>(n));
  return r;
}

std::vector<int> GameState::FollowingIndices() const {
  std::vector<int> out;
  out.reserve(following.size());
  for (const Choice& c : following) out.push_back(c.index);
  return out;
}

Tensor GameState::PreferenceSnapshot() const {
  const std::size_t n = preferences.size();
  const std::size_t d = n ? preferences[0].value().size() : 0;
  Tensor out({n, d});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) out.at(i, k) = preferences[i].value()[k];
  return out;
}

GameState InitEpisode(const GameConfig& config, const netgen::Graph& graph,
                      const Tensor* fixed_preferences, Tape& tape, Rng& rng,
                      const StateDims& dims, diff::SampleMode mode) {
  const std::size_t n = graph.node_count();
  const std::size_t d = static_cast<std::size_t>(config.d);
  if (n != static_cast<std::size_t>(config.n))
    throw ContractError("InitEpisode: graph has " + std::to_string(n) + " nodes, config.n = " +
                        std::to_string(config.n));
  if (dims.member_hidden < d) throw ContractError("InitEpisode: member hidden smaller than d");

  Tensor initial;
  if (config.network == NetworkKind::kRgg) {
    if (!graph.embeddings()) throw ContractError("InitEpisode: RGG network without embeddings");
    initial = *graph.embeddings();
  } else if (fixed_preferences) {
    initial = *fixed_preferences;
  } else {
    initial = netgen::SpectralPreferences(graph, d).preferences;
  }
  if (initial.rows() != n || initial.cols() != d)
    throw ContractError("InitEpisode: initial preferences have the wrong shape");

  GameState s;
  Tensor c1({d});
  for (double& v : c1.values()) v = rng.Normal();
  Tensor c2 = c1;
  for (double& v : c2.values()) v = -v;
  s.c1 = tape.Constant(std::move(c1));
  s.c2 = tape.Constant(std::move(c2));

  s.preferences.reserve(n);
  s.member_states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tensor row = Tensor::Vector(initial.Row(i));
    Tensor cell({dims.member_hidden});
    for (std::size_t k = 0; k < d; ++k) cell[k] = row[k];
    s.preferences.push_back(tape.Constant(std::move(row)));
    s.member_states.push_back({tape.Constant(Tensor({dims.member_hidden})), tape.Constant(std::move(cell))});
  }
  for (auto& cs : s.candidate_states)
    cs = {tape.Constant(Tensor({dims.candidate_hidden})), tape.Constant(Tensor({dims.candidate_hidden}))};
  for (std::size_t i = 0; i < n; ++i)
    s.following.push_back(SampleChoice(s.preferences[i], s.c1, s.c2, config.t_gumbel, rng, mode,
                                       config.literal_distance_logits));
  s.inbox.assign(n, {});
  s.t = 1;
  return s;
}

}  // namespace election::env
