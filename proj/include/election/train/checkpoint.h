#ifndef ELECTION_TRAIN_CHECKPOINT_H_
#define ELECTION_TRAIN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "election/diff/tensor.h"
#include "election/env/config.h"

namespace election::train {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct WinStats {
  std::int64_t c1_wins = 0;
  std::int64_t c2_wins = 0;
  std::int64_t ties = 0;

  std::int64_t games() const { return c1_wins + c2_wins + ties; }
  void Record(int winner);
};

// Tensors are named "param/<name>", "adam/<group>/m/<name>" and
// "adam/<group>/v/<name>".
struct Checkpoint {
  std::uint32_t version = kCheckpointVersion;
  env::GameConfig config;
  std::map<std::string, diff::Tensor> tensors;
  std::map<std::string, std::int64_t> adam_steps;  // per group
  std::int64_t episode = 0;                       // episodes completed
  std::uint64_t master_seed = 0;
  WinStats stats;
};

// "EMCP", u32 version, u32 entry count, entries (u32 name length, name, u32
// rank, u64 extents, f64 payload), then a u64-length-prefixed JSON trailer.
// All integers and floats little-endian.
std::string SerializeCheckpoint(const Checkpoint& checkpoint);
// FormatError on a bad magic, unknown version or truncated/garbled data.
Checkpoint ParseCheckpoint(std::string_view bytes);

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace election::train

#endif  // ELECTION_TRAIN_CHECKPOINT_H_
