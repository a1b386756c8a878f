#include <cmath>

#include "doctest.h"
#include "election/env/game.h"
#include "election/errors.h"
#include "election/netgen/rgg.h"
#include "../support/fixtures.h"

namespace election::env {
namespace {

TEST_CASE("config defaults and JSON round trip") {
  GameConfig c;
  CHECK(c.n == 100);
  CHECK(c.d == 2);
  CHECK(c.d_msg == 16);
  CHECK(c.n_vocab == 32);
  CHECK(c.l_max == 5);
  CHECK(c.episode_length == 5);
  CHECK(c.t0 == 0.2);
  CHECK(c.t_gumbel == 0.5);
  CHECK(c.learning_rate == 0.001);
  CHECK(c.epsilon == 0.5);
  c.reward_mode = RewardMode::kUnbiased;
  c.active_mask = ActiveMask::kC2Only;
  c.seed = 42;
  const GameConfig back = GameConfigFromJson(ToJson(c));
  CHECK(ConfigHash(back) == ConfigHash(c));
  CHECK(back.reward_mode == RewardMode::kUnbiased);
  CHECK(back.active_mask == ActiveMask::kC2Only);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"n", 10}, {"colour", 1}}), ValidationError);
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"n", 1}}), ValidationError);
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"epsilon", 1.5}}), ValidationError);
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"reward_mode", "fair"}}), ValidationError);
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"network", "file"}}), ValidationError);
  CHECK_THROWS_AS(GameConfigFromJson(nlohmann::json{{"n", "ten"}}), ValidationError);
  CHECK(GameConfigFromJson(nlohmann::json::object()).n == 100);
}

TEST_CASE("choice of an equidistant member is a fair coin") {
  const int draws = 10000;
  int first = 0;
  Rng rng(1);
  for (int i = 0; i < draws; ++i) {
    Tape tape;
    Choice c = SampleChoice(tape.Constant(Tensor::Vector({0, 0})), tape.Constant(Tensor::Vector({1, 1})),
                            tape.Constant(Tensor::Vector({-1, -1})), 0.5, rng);
    first += c.index == 0;
  }
  // Chi-squared with one degree of freedom; 6.635 is the 0.99 quantile.
  const double e = draws / 2.0;
  const double chi2 = std::pow(first - e, 2) / e + std::pow(draws - first - e, 2) / e;
  CHECK(chi2 < 6.635);
}

TEST_CASE("choice logits are negative scaled squared distances") {
  // Squared distances (0, 2) with d = 2 give logits (0, -1); at T = 0.5 the
  // relaxed probabilities are softmax(0, -2).
  Tape tape;
  Var m = tape.Constant(Tensor::Vector({0, 0}));
  Var c1 = tape.Constant(Tensor::Vector({0, 0}));
  Var c2 = tape.Constant(Tensor::Vector({1, 1}));
  const std::vector<double> zero(2, 0.0);
  Var logits = diff::Concat({diff::Scale(diff::SquaredNorm(diff::Sub(m, c1)), -0.5),
                             diff::Scale(diff::SquaredNorm(diff::Sub(m, c2)), -0.5)});
  Var p = diff::GumbelSoftmax(logits, 0.5, zero);
  CHECK(p.value()[0] == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-15));
  CHECK(p.value()[0] == doctest::Approx(0.88080).epsilon(1e-5));

  // A member sitting on c1 picks c1 whenever noise is weak relative to the
  // gap; with c2 far away that is every draw.
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    Tape t;
    Choice c = SampleChoice(t.Constant(Tensor::Vector({3, 3})), t.Constant(Tensor::Vector({3, 3})),
                            t.Constant(Tensor::Vector({-3, -3})), 0.5, rng);
    CHECK(c.index == 0);
    CHECK(c.onehot.value() == Tensor::Vector({1, 0}));
  }
}

TEST_CASE("preference update") {
  Tape tape;
  Var m = tape.Constant(Tensor::Vector({0.3, -0.7}));
  Var target = tape.Constant(Tensor::Vector({1.0, 2.0}));
  CHECK(UpdatePreference(m, target, tape.Constant(Tensor::Scalar(0.0)), 0.5).value() == m.value());
  Var u = UpdatePreference(tape.Constant(Tensor::Vector({0, 0})), tape.Constant(Tensor::Vector({1, 1})),
                           tape.Constant(Tensor::Scalar(0.25)), 0.5);
  CHECK(u.value() == Tensor::Vector({0.25, 0.25}));
  CHECK_THROWS_AS(UpdatePreference(m, target, tape.Constant(Tensor::Scalar(0.6)), 0.5), ContractError);
  CHECK_THROWS_AS(UpdatePreference(m, target, tape.Constant(Tensor::Scalar(-0.1)), 0.5), ContractError);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const Tensor a = Tensor::Vector({rng.Normal(), rng.Normal()});
    const Tensor b = Tensor::Vector({rng.Normal(), rng.Normal()});
    const double lambda = 0.5 * rng.Uniform();
    Tape t;
    const Tensor r = UpdatePreference(t.Constant(a), t.Constant(b), t.Constant(Tensor::Scalar(lambda)), 0.5).value();
    auto dist = [](const Tensor& x, const Tensor& y) { return std::hypot(x[0] - y[0], x[1] - y[1]); };
    CHECK(std::abs(dist(r, a) + dist(r, b) - dist(a, b)) < 1e-12);
    CHECK(dist(r, a) <= 0.5 * dist(a, b) + 1e-15);
  }
}

comm::Message Broadcast(int sender) {
  comm::Message m;
  m.sender = sender;
  return m;
}

TEST_CASE("routing") {
  // 0 - 1 - 2, plus isolated 3.
  const netgen::Graph g = netgen::Graph::FromEdges(4, {{0, 1}, {1, 2}});
  const std::vector<comm::Message> sent = {Broadcast(comm::kCandidateOne), Broadcast(comm::kCandidateTwo),
                                           Broadcast(0), Broadcast(2)};
  const std::vector<int> following = {1, 0, 0, 1};
  auto inbox = RouteMessages(g, following, sent, ActiveMask::kBoth);
  CHECK(inbox[1].size() == 3);  // C1 + members 0 and 2
  CHECK(inbox[3] == std::vector<int>{1});
  CHECK(inbox[0] == std::vector<int>{1});

  inbox = RouteMessages(g, following, sent, ActiveMask::kC1Only);
  CHECK(inbox[3].empty());  // isolated, following the muted C2
  CHECK(inbox[0].empty());
  CHECK(inbox[1].size() == 3);
  // Only members have inboxes at all.
  CHECK(inbox.size() == 4);
}

Choice Vote(Tape& tape, int index) {
  return {tape.Constant(Tensor::OneHot(2, static_cast<std::size_t>(index))), index};
}

TEST_CASE("rewards") {
  Tape tape;
  Var c1 = tape.Constant(Tensor::Vector({1, 0}));
  Var c2 = tape.Constant(Tensor::Vector({-1, 0}));
  std::vector<Choice> votes;
  std::vector<Var> prefs;
  for (int i = 0; i < 100; ++i) {
    votes.push_back(Vote(tape, 0));
    prefs.push_back(c1);
  }
  RewardRecord r = ComputeRewards(votes, prefs, c1, c2, RewardMode::kBiased);
  CHECK(r.candidate1.value().item() == 100);
  CHECK(r.candidate2.value().item() == 0);
  CHECK(r.members.value().item() == 0);
  CHECK(r.Winner() == 1);

  votes.clear();
  prefs.clear();
  for (int i = 0; i < 100; ++i) {
    votes.push_back(Vote(tape, i < 60 ? 0 : 1));
    prefs.push_back(tape.Constant(Tensor::Vector({0, 1})));
  }
  r = ComputeRewards(votes, prefs, c1, c2, RewardMode::kUnbiased);
  CHECK(r.candidate1.value().item() == 60);
  CHECK(r.candidate2.value().item() == 40);
  CHECK(r.votes1 + r.votes2 == 100);
  // Every member is at squared distance 2 from its candidate.
  CHECK(r.members.value().item() == doctest::Approx(-2.0).epsilon(1e-15));
  r = ComputeRewards(votes, prefs, c1, c2, RewardMode::kBiased);
  CHECK(r.candidate2.value().item() == -40);
}

TEST_CASE("episode initialization") {
  GameConfig config;
  config.n = 12;
  config.beta = 0.3;
  Rng graph_rng(4);
  const netgen::Graph g = netgen::SampleRgg(12, 2, 0.3, graph_rng);
  Tape tape;
  Rng rng(5);
  GameState s = InitEpisode(config, g, nullptr, tape, rng, StateDims{});
  for (std::size_t k = 0; k < 2; ++k) CHECK(s.c2.value()[k] == -s.c1.value()[k]);
  CHECK(s.PreferenceSnapshot() == *g.embeddings());
  for (std::size_t i = 0; i < 12; ++i) {
    const Tensor& cell = s.member_states[i].c.value();
    CHECK(cell.size() == 32);
    CHECK(cell[0] == g.embeddings()->at(i, 0));
    CHECK(cell[1] == g.embeddings()->at(i, 1));
    for (std::size_t k = 2; k < 32; ++k) CHECK(cell[k] == 0.0);
    CHECK(s.inbox[i].empty());
    double row = 0;
    for (double v : s.following[i].onehot.value().values()) row += v;
    CHECK(row == 1.0);
  }

  const netgen::Graph bare = testing::Path(12);
  Tape t2;
  CHECK_THROWS_AS(InitEpisode(config, bare, nullptr, t2, rng, StateDims{}), ContractError);
  config.network = NetworkKind::kFile;
  config.graph_file = "unused";
  GameState f = InitEpisode(config, bare, nullptr, t2, rng, StateDims{});
  for (std::size_t i = 0; i < 12; ++i)
    CHECK(std::hypot(f.preferences[i].value()[0], f.preferences[i].value()[1]) == doctest::Approx(1.0));
}

}  // namespace
}  // namespace election::env
