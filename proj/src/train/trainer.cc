#include "election/train/trainer.h"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "election/errors.h"

namespace election::train {

std::string ToString(UpdateTarget target) {
  switch (target) {
    case UpdateTarget::kCandidate1: return "c1";
    case UpdateTarget::kCandidate2: return "c2";
    case UpdateTarget::kMembers: return "members";
  }
  return "?";
}

const char* GroupOf(UpdateTarget target) {
  switch (target) {
    case UpdateTarget::kCandidate1: return "c1";
    case UpdateTarget::kCandidate2: return "c2";
    case UpdateTarget::kMembers: return "member";
  }
  return "";
}

UpdateTarget SelectUpdateTarget(Rng& rng) {
  return static_cast<UpdateTarget>(rng.UniformInt(3));
}

Trainer::Trainer(env::GameConfig config, NetworkSource source)
    : config_(std::move(config)),
      source_(std::move(source)),
      model_(std::make_unique<policy::Model>(config_, config_.seed)) {
  config_.Validate();
  adam_options_.learning_rate = config_.learning_rate;
  for (const char* g : policy::Model::kGroups) adam_[g];
}

Trainer::Trainer(const Checkpoint& cp, NetworkSource source) : Trainer(cp.config, std::move(source)) {
  if (cp.master_seed != config_.seed) throw FormatError("checkpoint seed does not match its config");
  for (auto& [name, p] : model_->params()) {
    auto it = cp.tensors.find("param/" + name);
    if (it == cp.tensors.end()) throw FormatError("checkpoint is missing parameter " + name);
    if (it->second.shape() != p.value.shape())
      throw FormatError("checkpoint shape mismatch for " + name);
    p.value = it->second;
  }
  for (auto& [group, state] : adam_) {
    if (auto it = cp.adam_steps.find(group); it != cp.adam_steps.end()) state.step = it->second;
    const std::string prefix = "adam/" + group + "/";
    for (const auto& [name, t] : cp.tensors) {
      if (!name.starts_with(prefix)) continue;
      std::string rest = name.substr(prefix.size());
      if (rest.starts_with("m/")) state.first_moment[rest.substr(2)] = t;
      else if (rest.starts_with("v/")) state.second_moment[rest.substr(2)] = t;
    }
  }
  episode_ = cp.episode;
  stats_ = cp.stats;
}

StepResult Trainer::Step() {
  const auto index = static_cast<std::uint64_t>(episode_);
  const PreparedNetwork network = source_.Prepare(config_.seed, index);
  Rng noise = Rng::ForStream(config_.seed, Stream::kNoise, index);
  EpisodeOptions options;
  options.mask = config_.active_mask;
  options.record = false;
  Episode ep = RunEpisode(config_, network, *model_, noise, options, index);

  Rng target_rng = Rng::ForStream(config_.seed, Stream::kTarget, index);
  StepResult result;
  result.episode = index;
  result.target = SelectUpdateTarget(target_rng);
  result.winner = ep.rewards.Winner();

  Var reward = result.target == UpdateTarget::kCandidate1   ? ep.rewards.candidate1
               : result.target == UpdateTarget::kCandidate2 ? ep.rewards.candidate2
                                                            : ep.rewards.members;
  Var loss = diff::Scale(reward, -1.0);
  result.loss = loss.value().item();
  if (!std::isfinite(result.loss)) throw DomainError("non-finite loss at episode " + std::to_string(index));

  auto& params = model_->params();
  params.ZeroGrad();
  ep.tape->Backward(loss);
  for (const char* g : {"comm", GroupOf(result.target)}) {
    std::vector<diff::Parameter*> group = params.Group(g);
    diff::AdamStep(group, adam_.find(g)->second, adam_options_);
  }

  ++episode_;
  stats_.Record(result.winner);
  return result;
}

Checkpoint Trainer::MakeCheckpoint() const {
  Checkpoint cp;
  cp.config = config_;
  cp.episode = episode_;
  cp.master_seed = config_.seed;
  cp.stats = stats_;
  for (const auto& [name, p] : model_->params()) cp.tensors["param/" + name] = p.value;
  for (const auto& [group, state] : adam_) {
    cp.adam_steps[group] = state.step;
    for (const auto& [name, t] : state.first_moment) cp.tensors["adam/" + group + "/m/" + name] = t;
    for (const auto& [name, t] : state.second_moment) cp.tensors["adam/" + group + "/v/" + name] = t;
  }
  return cp;
}

void RunTraining(Trainer& trainer, const TrainOptions& options,
                 const std::function<void(const StepResult&)>& on_step) {
  const bool write = !options.output_dir.empty();
  std::ofstream progress;
  if (write) {
    std::filesystem::create_directories(options.output_dir);
    const auto path = options.output_dir / "progress.csv";
    const bool resume = trainer.episode() > 0 && std::filesystem::exists(path);
    progress.open(path, resume ? std::ios::app : std::ios::trunc);
    if (!progress) throw IoError("cannot write " + path.string());
    if (!resume) progress << "episode,c1_wins_cum,c2_wins_cum,ties_cum,loss\n";
    progress << std::setprecision(17);
  }
  while (trainer.episode() < options.episodes) {
    StepResult r = trainer.Step();
    const WinStats& s = trainer.stats();
    if (write) {
      progress << trainer.episode() << ',' << s.c1_wins << ',' << s.c2_wins << ',' << s.ties << ','
               << r.loss << '\n';
      if (options.checkpoint_interval > 0 && trainer.episode() % options.checkpoint_interval == 0) {
        SaveCheckpoint(options.output_dir /
                           ("checkpoint_" + std::to_string(trainer.episode()) + ".emcp"),
                       trainer.MakeCheckpoint());
      }
    }
    if (on_step) on_step(r);
  }
  if (write) {
    progress.flush();
    if (!progress) throw IoError("write failed: " + (options.output_dir / "progress.csv").string());
    SaveCheckpoint(options.output_dir / "checkpoint_final.emcp", trainer.MakeCheckpoint());
  }
}

}  // namespace election::train
