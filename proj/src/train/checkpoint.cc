#include "election/train/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "election/errors.h"

namespace election::train {
namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

constexpr char kMagic[4] = {'E', 'M', 'C', 'P'};

template <typename T>
void Put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view Bytes(std::uint64_t n) {
    Need(n);
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw FormatError("checkpoint truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

void WinStats::Record(int winner) {
  if (winner == 1) ++c1_wins;
  else if (winner == 2) ++c2_wins;
  else ++ties;
}

std::string SerializeCheckpoint(const Checkpoint& cp) {
  std::string out(kMagic, 4);
  Put<std::uint32_t>(out, cp.version);
  Put<std::uint32_t>(out, static_cast<std::uint32_t>(cp.tensors.size()));
  for (const auto& [name, t] : cp.tensors) {
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    Put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape().size()));
    for (std::size_t e : t.shape()) Put<std::uint64_t>(out, e);
    for (double v : t.values()) Put<double>(out, v);
  }
  nlohmann::json trailer;
  trailer["config"] = env::ToJson(cp.config);
  trailer["episode"] = cp.episode;
  trailer["adam_steps"] = cp.adam_steps;
  trailer["rng"] = {{"master_seed", cp.master_seed}, {"next_episode", cp.episode}};
  trailer["stats"] = {{"c1_wins", cp.stats.c1_wins},
                      {"c2_wins", cp.stats.c2_wins},
                      {"ties", cp.stats.ties}};
  const std::string json = trailer.dump();
  Put<std::uint64_t>(out, json.size());
  out += json;
  return out;
}

Checkpoint ParseCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  if (r.Bytes(4) != std::string_view(kMagic, 4)) throw FormatError("not a checkpoint (bad magic)");
  Checkpoint cp;
  cp.version = r.Get<std::uint32_t>();
  if (cp.version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(cp.version));
  const auto count = r.Get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(r.Bytes(r.Get<std::uint32_t>()));
    const auto rank = r.Get<std::uint32_t>();
    if (rank > 2) throw FormatError("tensor '" + name + "' has rank " + std::to_string(rank));
    diff::Shape shape;
    std::uint64_t total = 1;
    for (std::uint32_t k = 0; k < rank; ++k) {
      const auto e = r.Get<std::uint64_t>();
      if (e > (std::uint64_t{1} << 32)) throw FormatError("tensor '" + name + "' extent too large");
      shape.push_back(static_cast<std::size_t>(e));
      total *= e;
    }
    std::string_view payload = r.Bytes(total * sizeof(double));
    diff::Tensor t(shape);
    std::memcpy(t.values().data(), payload.data(), payload.size());
    if (!cp.tensors.emplace(std::move(name), std::move(t)).second)
      throw FormatError("duplicate tensor entry");
  }
  const auto json_size = r.Get<std::uint64_t>();
  std::string_view json = r.Bytes(json_size);
  if (!r.done()) throw FormatError("trailing bytes after checkpoint trailer");
  try {
    const auto trailer = nlohmann::json::parse(json);
    cp.config = env::GameConfigFromJson(trailer.at("config"));
    cp.episode = trailer.at("episode").get<std::int64_t>();
    cp.adam_steps = trailer.at("adam_steps").get<std::map<std::string, std::int64_t>>();
    cp.master_seed = trailer.at("rng").at("master_seed").get<std::uint64_t>();
    const auto& stats = trailer.at("stats");
    cp.stats.c1_wins = stats.at("c1_wins").get<std::int64_t>();
    cp.stats.c2_wins = stats.at("c2_wins").get<std::int64_t>();
    cp.stats.ties = stats.at("ties").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad checkpoint trailer: ") + e.what());
  } catch (const ValidationError& e) {
    throw FormatError(std::string("bad checkpoint config: ") + e.what());
  }
  return cp;
}

void SaveCheckpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const std::string bytes = SerializeCheckpoint(checkpoint);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return ParseCheckpoint(ss.str());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace election::train
