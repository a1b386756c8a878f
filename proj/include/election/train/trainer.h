#ifndef ELECTION_TRAIN_TRAINER_H_
#define ELECTION_TRAIN_TRAINER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include "election/diff/adam.h"
#include "election/train/checkpoint.h"
#include "election/train/episode.h"

namespace election::train {

enum class UpdateTarget { kCandidate1, kCandidate2, kMembers };

std::string ToString(UpdateTarget target);
// Parameter group updated alongside "comm" for this target.
const char* GroupOf(UpdateTarget target);

// Uniform over the three targets.
UpdateTarget SelectUpdateTarget(Rng& rng);

struct StepResult {
  std::uint64_t episode = 0;
  UpdateTarget target = UpdateTarget::kMembers;
  double loss = 0.0;
  int winner = 0;
};

class Trainer {
 public:
  // Fresh parameters from config.seed.
  Trainer(env::GameConfig config, NetworkSource source);
  // Continues exactly where `checkpoint` stopped.
  Trainer(const Checkpoint& checkpoint, NetworkSource source);

  // One episode plus one update of the chosen group and the comm engine.
  StepResult Step();

  Checkpoint MakeCheckpoint() const;

  policy::Model& model() { return *model_; }
  const policy::Model& model() const { return *model_; }
  const env::GameConfig& config() const { return config_; }
  const NetworkSource& source() const { return source_; }
  std::int64_t episode() const { return episode_; }
  const WinStats& stats() const { return stats_; }

 private:
  env::GameConfig config_;
  NetworkSource source_;
  std::unique_ptr<policy::Model> model_;
  std::map<std::string, diff::AdamState, std::less<>> adam_;
  diff::AdamOptions adam_options_;
  std::int64_t episode_ = 0;
  WinStats stats_;
};

struct TrainOptions {
  std::int64_t episodes = 10000;
  std::int64_t checkpoint_interval = 1000;  // 0 disables periodic checkpoints
  std::filesystem::path output_dir;         // empty: nothing written
};

// Runs until trainer.episode() reaches options.episodes. Writes
// progress.csv, checkpoint_<episode>.emcp every interval and
// checkpoint_final.emcp under output_dir.
void RunTraining(Trainer& trainer, const TrainOptions& options,
                 const std::function<void(const StepResult&)>& on_step = {});

}  // namespace election::train

#endif  // ELECTION_TRAIN_TRAINER_H_
