#ifndef ELECTION_ENV_CONFIG_H_
#define ELECTION_ENV_CONFIG_H_

#include <cstdint>
#include <string>

#include "json.hpp"

namespace election::env {

enum class RewardMode { kBiased, kUnbiased };
enum class ActiveMask { kBoth, kC1Only, kC2Only };
enum class NetworkKind { kRgg, kFile };

std::string ToString(RewardMode mode);
std::string ToString(ActiveMask mask);
std::string ToString(NetworkKind kind);
RewardMode ParseRewardMode(const std::string& s);
// Accepts "both", "c1", "c2".
ActiveMask ParseActiveMask(const std::string& s);
NetworkKind ParseNetworkKind(const std::string& s);

bool IsActive(ActiveMask mask, int candidate);  // candidate is 1 or 2

struct GameConfig {
  int n = 100;                  // members
  int d = 2;                    // preference dimension
  int d_msg = 16;
  int d_vocab = 16;
  int n_vocab = 32;
  int l_max = 5;                // max message length
  int episode_length = 5;       // T propaganda steps
  double t0 = 0.2;              // base encoder temperature
  double t_gumbel = 0.5;        // temperature for following and voting
  double learning_rate = 0.001;
  double epsilon = 0.5;         // cap on the preference step lambda
  RewardMode reward_mode = RewardMode::kBiased;
  ActiveMask active_mask = ActiveMask::kBoth;
  NetworkKind network = NetworkKind::kRgg;
  double beta = 0.05;           // RGG edge probability
  std::string graph_file;       // for NetworkKind::kFile
  // Feed +squared distances (instead of their negation) as choice logits.
  bool literal_distance_logits = false;
  std::uint64_t seed = 0;

  // Throws ValidationError on out-of-range fields.
  void Validate() const;
};

nlohmann::json ToJson(const GameConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
GameConfig GameConfigFromJson(const nlohmann::json& j);
// FNV-1a of the canonical JSON dump.
std::uint64_t ConfigHash(const GameConfig& config);

}  // namespace election::env

#endif  // ELECTION_ENV_CONFIG_H_
