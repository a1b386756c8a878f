#ifndef ELECTION_CLI_CLI_H_
#define ELECTION_CLI_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "election/env/config.h"

namespace election::cli {

// A config file: every GameConfig key plus output/run controls.
struct RunConfig {
  env::GameConfig game;
  std::filesystem::path output_dir;  // empty if not given
  std::int64_t episodes = 10000;
  std::int64_t checkpoint_interval = 1000;
  std::int64_t eval_episodes = 0;  // post-training evaluation, 0 to skip
};

// Unknown keys and invalid values raise ValidationError. Relative graph_file
// and output_dir paths are resolved against `base_dir`.
RunConfig RunConfigFromJson(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Exit codes: 0 success, 1 runtime or validation failure, 2 bad usage.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace election::cli

#endif  // ELECTION_CLI_CLI_H_
