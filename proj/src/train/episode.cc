#include "election/train/episode.h"

#include <bit>
#include <cstring>
#include <optional>

#include "election/errors.h"
#include "election/netgen/rgg.h"
#include "election/netgen/spectral.h"

namespace election::train {
namespace {

class Fnv {
 public:
  void Add(std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h_ ^= (x >> (8 * b)) & 0xffu;
      h_ *= 1099511628211ull;
    }
  }
  void Add(int x) { Add(static_cast<std::uint64_t>(static_cast<std::int64_t>(x))); }
  void Add(double x) { Add(std::bit_cast<std::uint64_t>(x)); }
  void Add(const Tensor& t) {
    Add(static_cast<std::uint64_t>(t.size()));
    for (double v : t.values()) Add(v);
  }
  void Add(const std::vector<int>& v) {
    Add(static_cast<std::uint64_t>(v.size()));
    for (int x : v) Add(x);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

}  // namespace

std::uint64_t EpisodeTrace::Hash() const {
  Fnv h;
  h.Add(episode);
  h.Add(seed);
  h.Add(config_hash);
  h.Add(graph_id);
  for (char c : mask) h.Add(static_cast<int>(c));
  h.Add(propaganda);
  for (const StepRecord& s : steps) {
    h.Add(s.step);
    h.Add(s.following);
    h.Add(s.preferences);
    for (const MessageRecord& m : s.messages) {
      h.Add(m.sender);
      h.Add(m.symbols);
    }
  }
  h.Add(final_preferences);
  h.Add(votes);
  h.Add(reward_c1);
  h.Add(reward_c2);
  h.Add(reward_members);
  return h.value();
}

NetworkSource NetworkSource::Rgg(const env::GameConfig& config) {
  NetworkSource s;
  s.n_ = static_cast<std::size_t>(config.n);
  s.d_ = config.d;
  s.beta_ = config.beta;
  return s;
}

NetworkSource NetworkSource::Fixed(netgen::Graph graph, const env::GameConfig& config) {
  if (graph.node_count() != static_cast<std::size_t>(config.n)) {
    throw ValidationError("graph has " + std::to_string(graph.node_count()) +
                          " nodes but config.n = " + std::to_string(config.n));
  }
  NetworkSource s;
  s.n_ = graph.node_count();
  s.d_ = config.d;
  auto init = netgen::SpectralPreferences(graph, static_cast<std::size_t>(config.d));
  s.fixed_.normalized_adjacency = nn::NormalizeAdjacency(graph.DenseAdjacency());
  s.fixed_.id = graph.Fingerprint();
  s.fixed_.fixed_preferences = std::make_shared<const Tensor>(std::move(init.preferences));
  s.fixed_.graph = std::make_shared<const netgen::Graph>(std::move(graph));
  return s;
}

NetworkSource NetworkSource::FromConfig(const env::GameConfig& config) {
  if (config.network == env::NetworkKind::kRgg) return Rgg(config);
  return Fixed(netgen::LoadEdgeList(config.graph_file), config);
}

PreparedNetwork NetworkSource::Prepare(std::uint64_t master_seed, std::uint64_t episode) const {
  if (fixed()) return fixed_;
  Rng rng = Rng::ForStream(master_seed, Stream::kGraph, episode);
  auto graph = std::make_shared<const netgen::Graph>(netgen::SampleRgg(n_, d_, beta_, rng));
  PreparedNetwork p;
  p.normalized_adjacency = nn::NormalizeAdjacency(graph->DenseAdjacency());
  p.id = graph->Fingerprint();
  p.graph = std::move(graph);
  return p;
}

Episode RunEpisode(const env::GameConfig& config, const PreparedNetwork& network,
                   const policy::Model& model, Rng& noise, const EpisodeOptions& options,
                   std::uint64_t episode_index) {
  const netgen::Graph& graph = *network.graph;
  const std::size_t n = graph.node_count();
  const diff::SampleMode mode = options.sample_mode;
  const comm::CommEngine& engine = model.comm();

  Episode ep;
  ep.tape = std::make_unique<diff::Tape>();
  diff::Tape& tape = *ep.tape;
  tape.set_grad_enabled(options.requires_grad);

  env::StateDims dims{policy::kMemberHidden, policy::kCandidateHidden};
  env::GameState s =
      env::InitEpisode(config, graph, network.fixed_preferences.get(), tape, noise, dims, mode);
  Var a_norm = tape.Constant(network.normalized_adjacency);

  EpisodeTrace& trace = ep.trace;
  trace.episode = episode_index;
  trace.seed = config.seed;
  trace.config_hash = env::ConfigHash(config);
  trace.graph_id = network.id;
  trace.mask = env::ToString(options.mask);
  trace.propaganda = s.c1.value();

  const std::array<Var, 2> propaganda = {s.c1, s.c2};
  for (int t = 1; t <= config.episode_length; ++t) {
    s.t = t;
    if (t > 1) {
      for (std::size_t i = 0; i < n; ++i)
        s.following[i] = env::SampleChoice(s.preferences[i], s.c1, s.c2, config.t_gumbel, noise,
                                           mode, config.literal_distance_logits);
    }
    const std::vector<int> following = s.FollowingIndices();
    StepRecord record;
    if (options.record) {
      record.step = t;
      record.following = following;
      record.preferences = s.PreferenceSnapshot();
    }

    std::vector<comm::Message> broadcasts;
    std::vector<Var> f_rows;
    f_rows.reserve(n);
    for (const env::Choice& c : s.following) f_rows.push_back(c.onehot);
    Var f_matrix = diff::StackRows(f_rows);
    for (int j = 1; j <= 2; ++j) {
      if (!env::IsActive(options.mask, j)) continue;
      auto out = model.candidate(j).Forward(tape, a_norm, f_matrix, propaganda[static_cast<std::size_t>(j - 1)],
                                            s.candidate_states[static_cast<std::size_t>(j - 1)]);
      s.candidate_states[static_cast<std::size_t>(j - 1)] = out.state;
      comm::Message msg = engine.Encode(tape, out.u_msg, noise, mode);
      msg.sender = j == 1 ? comm::kCandidateOne : comm::kCandidateTwo;
      msg.step = t;
      broadcasts.push_back(std::move(msg));
    }

    // Each in-flight message is decoded once and shared by all recipients.
    std::vector<std::optional<Var>> decoded(s.in_flight.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (s.inbox[i].empty()) continue;
      std::vector<Var> received;
      received.reserve(s.inbox[i].size());
      for (int k : s.inbox[i]) {
        auto& slot = decoded[static_cast<std::size_t>(k)];
        if (!slot) slot = engine.Decode(tape, s.in_flight[static_cast<std::size_t>(k)]);
        received.push_back(*slot);
      }
      auto out = model.members().Forward(tape, s.preferences[i], received, s.member_states[i],
                                         config.epsilon);
      s.member_states[i] = out.state;
      s.preferences[i] = env::UpdatePreference(s.preferences[i], out.target, out.lambda, config.epsilon);
      comm::Message msg = engine.Encode(tape, out.u_msg, noise, mode);
      msg.sender = static_cast<int>(i);
      msg.step = t;
      broadcasts.push_back(std::move(msg));
    }

    if (options.record) {
      for (const comm::Message& m : broadcasts) record.messages.push_back({m.sender, m.symbols});
      trace.steps.push_back(std::move(record));
    }
    s.inbox = env::RouteMessages(graph, following, broadcasts, options.mask);
    s.in_flight = std::move(broadcasts);
  }

  std::vector<env::Choice> votes;
  votes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    votes.push_back(env::SampleChoice(s.preferences[i], s.c1, s.c2, config.t_gumbel, noise, mode,
                                      config.literal_distance_logits));
  ep.rewards = env::ComputeRewards(votes, s.preferences, s.c1, s.c2, config.reward_mode);

  trace.votes = ep.rewards.votes;
  trace.votes1 = ep.rewards.votes1;
  trace.votes2 = ep.rewards.votes2;
  trace.reward_c1 = ep.rewards.candidate1.value()[0];
  trace.reward_c2 = ep.rewards.candidate2.value()[0];
  trace.reward_members = ep.rewards.members.value()[0];
  if (options.record) trace.final_preferences = s.PreferenceSnapshot();
  return ep;
}

}  // namespace election::train
