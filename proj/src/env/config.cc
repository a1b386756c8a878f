#include "election/env/config.h"

#include <set>

#include "election/errors.h"

namespace election::env {

std::string ToString(RewardMode mode) { return mode == RewardMode::kBiased ? "biased" : "unbiased"; }

std::string ToString(ActiveMask mask) {
  switch (mask) {
    case ActiveMask::kBoth:
      return "both";
    case ActiveMask::kC1Only:
      return "c1";
    case ActiveMask::kC2Only:
      return "c2";
  }
  return "both";
}

std::string ToString(NetworkKind kind) { return kind == NetworkKind::kRgg ? "rgg" : "file"; }

RewardMode ParseRewardMode(const std::string& s) {
  if (s == "biased") return RewardMode::kBiased;
  if (s == "unbiased") return RewardMode::kUnbiased;
  throw ValidationError("reward_mode must be \"biased\" or \"unbiased\", got \"" + s + "\"");
}

ActiveMask ParseActiveMask(const std::string& s) {
  if (s == "both") return ActiveMask::kBoth;
  if (s == "c1") return ActiveMask::kC1Only;
  if (s == "c2") return ActiveMask::kC2Only;
  throw ValidationError("mask must be one of both|c1|c2, got \"" + s + "\"");
}

NetworkKind ParseNetworkKind(const std::string& s) {
  if (s == "rgg") return NetworkKind::kRgg;
  if (s == "file") return NetworkKind::kFile;
  throw ValidationError("network must be \"rgg\" or \"file\", got \"" + s + "\"");
}

bool IsActive(ActiveMask mask, int candidate) {
  switch (mask) {
    case ActiveMask::kBoth:
      return true;
    case ActiveMask::kC1Only:
      return candidate == 1;
    case ActiveMask::kC2Only:
      return candidate == 2;
  }
  return true;
}

void GameConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("invalid config: " + what);
  };
  require(n >= 2, "n must be >= 2");
  require(d >= 1, "d must be >= 1");
  require(d_msg >= 1 && d_vocab >= 1, "dimensions must be positive");
  require(n_vocab >= 1, "n_vocab must be >= 1");
  require(l_max >= 1, "l_max must be >= 1");
  require(episode_length >= 1, "episode_length must be >= 1");
  require(t0 >= 0.0, "t0 must be >= 0");
  require(t_gumbel > 0.0, "t_gumbel must be > 0");
  require(learning_rate > 0.0, "learning_rate must be > 0");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  if (network == NetworkKind::kRgg) {
    require(beta > 0.0 && beta < 1.0, "beta must lie in (0,1)");
  } else {
    require(!graph_file.empty(), "graph_file is required when network is \"file\"");
  }
}

nlohmann::json ToJson(const GameConfig& c) {
  return nlohmann::json{
      {"n", c.n},
      {"d", c.d},
      {"d_msg", c.d_msg},
      {"d_vocab", c.d_vocab},
      {"n_vocab", c.n_vocab},
      {"l_max", c.l_max},
      {"episode_length", c.episode_length},
      {"t0", c.t0},
      {"t_gumbel", c.t_gumbel},
      {"learning_rate", c.learning_rate},
      {"epsilon", c.epsilon},
      {"reward_mode", ToString(c.reward_mode)},
      {"active_mask", ToString(c.active_mask)},
      {"network", ToString(c.network)},
      {"beta", c.beta},
      {"graph_file", c.graph_file},
      {"literal_distance_logits", c.literal_distance_logits},
      {"seed", c.seed},
  };
}

GameConfig GameConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> kKeys = {
      "n", "d", "d_msg", "d_vocab", "n_vocab", "l_max", "episode_length", "t0", "t_gumbel",
      "learning_rate", "epsilon", "reward_mode", "active_mask", "network", "beta", "graph_file",
      "literal_distance_logits", "seed"};
  for (const auto& [key, value] : j.items())
    if (!kKeys.contains(key)) throw ValidationError("unknown config key \"" + key + "\"");

  GameConfig c;
  try {
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    read("n", c.n);
    read("d", c.d);
    read("d_msg", c.d_msg);
    read("d_vocab", c.d_vocab);
    read("n_vocab", c.n_vocab);
    read("l_max", c.l_max);
    read("episode_length", c.episode_length);
    read("t0", c.t0);
    read("t_gumbel", c.t_gumbel);
    read("learning_rate", c.learning_rate);
    read("epsilon", c.epsilon);
    read("beta", c.beta);
    read("graph_file", c.graph_file);
    read("literal_distance_logits", c.literal_distance_logits);
    read("seed", c.seed);
    if (j.contains("reward_mode")) c.reward_mode = ParseRewardMode(j.at("reward_mode").get<std::string>());
    if (j.contains("active_mask")) c.active_mask = ParseActiveMask(j.at("active_mask").get<std::string>());
    if (j.contains("network")) c.network = ParseNetworkKind(j.at("network").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config type error: ") + e.what());
  }
  c.Validate();
  return c;
}

std::uint64_t ConfigHash(const GameConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : ToJson(config).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace election::env
