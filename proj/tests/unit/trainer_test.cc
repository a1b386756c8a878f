#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "election/errors.h"
#include "election/train/checkpoint.h"
#include "election/train/trainer.h"

namespace election::train {
namespace {

namespace fs = std::filesystem;

env::GameConfig Small(std::uint64_t seed = 7) {
  env::GameConfig c;
  c.n = 10;
  c.beta = 0.3;
  c.seed = seed;
  return c;
}

Episode Play(const env::GameConfig& c, std::uint64_t index, env::ActiveMask mask = env::ActiveMask::kBoth) {
  static std::map<std::uint64_t, std::unique_ptr<policy::Model>> models;
  auto& model = models[c.seed];
  if (!model) model = std::make_unique<policy::Model>(c, c.seed);
  const NetworkSource source = NetworkSource::Rgg(c);
  Rng noise = Rng::ForStream(c.seed, Stream::kNoise, index);
  EpisodeOptions options;
  options.mask = mask;
  options.requires_grad = false;
  return RunEpisode(c, source.Prepare(c.seed, index), *model, noise, options, index);
}

TEST_CASE("episode trace shape") {
  const env::GameConfig c = Small();
  const Episode ep = Play(c, 0);
  REQUIRE(ep.trace.steps.size() == 5);
  // Only candidates speak at the first step.
  for (const auto& m : ep.trace.steps[0].messages) CHECK(m.sender < 0);
  CHECK(ep.trace.steps[0].messages.size() == 2);
  CHECK(ep.trace.votes.size() == 10);
  CHECK(ep.trace.votes1 + ep.trace.votes2 == 10);
  for (const auto& s : ep.trace.steps) {
    CHECK(s.following.size() == 10);
    CHECK(s.preferences.shape() == diff::Shape{10, 2});
    for (const auto& m : s.messages) {
      CHECK(m.symbols.size() <= 5);  // empty when the end token comes first
      for (int sym : m.symbols) CHECK((sym >= 0 && sym < 32));
    }
  }

  const Episode muted = Play(c, 0, env::ActiveMask::kC1Only);
  for (const auto& s : muted.trace.steps)
    for (const auto& m : s.messages) CHECK(m.sender != comm::kCandidateTwo);
}

TEST_CASE("same seed gives the same trace") {
  const env::GameConfig c = Small();
  for (std::uint64_t e = 0; e < 3; ++e) CHECK(Play(c, e).trace.Hash() == Play(c, e).trace.Hash());
  CHECK(Play(c, 0).trace.Hash() != Play(c, 1).trace.Hash());
}

TEST_CASE("update target is uniform") {
  Rng rng(11);
  std::map<UpdateTarget, int> counts;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) ++counts[SelectUpdateTarget(rng)];
  for (auto [target, k] : counts) CHECK(std::abs(k / double(draws) - 1.0 / 3.0) < 0.01);
  CHECK(counts.size() == 3);
  CHECK(std::string(GroupOf(UpdateTarget::kCandidate1)) == "c1");
  CHECK(std::string(GroupOf(UpdateTarget::kCandidate2)) == "c2");
  CHECK(std::string(GroupOf(UpdateTarget::kMembers)) == "member");
}

TEST_CASE("target sequence does not depend on the episode's other randomness") {
  env::GameConfig a = Small(3);
  env::GameConfig b = Small(3);
  b.n = 14;
  b.episode_length = 2;
  Trainer ta(a, NetworkSource::Rgg(a));
  Trainer tb(b, NetworkSource::Rgg(b));
  for (int i = 0; i < 10; ++i) CHECK(ta.Step().target == tb.Step().target);
}

std::map<std::string, diff::Tensor> Snapshot(const policy::Model& model) {
  std::map<std::string, diff::Tensor> out;
  for (const auto& [name, p] : model.params()) out.emplace(name, p.value);
  return out;
}

TEST_CASE("each step updates exactly the chosen group and the comm engine") {
  const env::GameConfig c = Small(5);
  Trainer trainer(c, NetworkSource::Rgg(c));
  std::map<UpdateTarget, int> seen;
  for (int i = 0; i < 12; ++i) {
    const auto before = Snapshot(trainer.model());
    const StepResult r = trainer.Step();
    ++seen[r.target];
    const auto after = Snapshot(trainer.model());
    const std::string target = GroupOf(r.target);
    bool comm_changed = false;
    for (const auto& [name, value] : before) {
      const std::string group = name.substr(0, name.find('/'));
      const bool changed = !(after.at(name) == value);
      if (group == "comm") comm_changed |= changed;
      else if (group != target) CHECK_MESSAGE(!changed, name);
    }
    CHECK(comm_changed);
    bool target_changed = false;
    for (const auto& [name, value] : before)
      if (name.rfind(target + "/", 0) == 0) target_changed |= !(after.at(name) == value);
    CHECK(target_changed);
  }
  CHECK(seen.size() == 3);
}

TEST_CASE("progress log and checkpoints") {
  const fs::path dir = fs::temp_directory_path() / "election_trainer_test";
  fs::remove_all(dir);
  const env::GameConfig c = Small(9);
  Trainer trainer(c, NetworkSource::Rgg(c));
  TrainOptions options;
  options.episodes = 6;
  options.checkpoint_interval = 4;
  options.output_dir = dir;
  RunTraining(trainer, options);
  CHECK(fs::exists(dir / "checkpoint_4.emcp"));
  CHECK(fs::exists(dir / "checkpoint_final.emcp"));
  CHECK_FALSE(fs::exists(dir / "checkpoint_6.emcp"));

  std::ifstream in(dir / "progress.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "episode,c1_wins_cum,c2_wins_cum,ties_cum,loss");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 5);
    CHECK(v[0] == rows);
    CHECK(v[1] + v[2] + v[3] == rows);
    CHECK(std::isfinite(v[4]));
  }
  CHECK(rows == 6);

  const Checkpoint cp = LoadCheckpoint(dir / "checkpoint_final.emcp");
  CHECK(cp.episode == 6);
  CHECK(cp.stats.games() == 6);
  const std::string bytes = SerializeCheckpoint(cp);
  CHECK_THROWS_AS(ParseCheckpoint(bytes.substr(0, bytes.size() / 2)), FormatError);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(ParseCheckpoint(bad), FormatError);
  CHECK_THROWS_AS(ParseCheckpoint(bytes + "!"), FormatError);
  CHECK_THROWS_AS(LoadCheckpoint(dir / "absent.emcp"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("random-parameter episodes have finite losses") {
  env::GameConfig c = Small();
  int finite = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    c.seed = 1000 + s;
    const policy::Model model(c, c.seed);
    Rng noise = Rng::ForStream(c.seed, Stream::kNoise, 0);
    EpisodeOptions options;
    options.record = false;
    options.requires_grad = false;
    const Episode ep = RunEpisode(c, NetworkSource::Rgg(c).Prepare(c.seed, 0), model, noise, options);
    finite += std::isfinite(ep.rewards.candidate1.value().item()) &&
              std::isfinite(ep.rewards.candidate2.value().item()) &&
              std::isfinite(ep.rewards.members.value().item());
  }
  CHECK(finite == 1000);
}

}  // namespace
}  // namespace election::train
