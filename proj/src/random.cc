#include "election/random.h"

#include <sstream>

#include "election/errors.h"

namespace election {

Rng Rng::ForStream(std::uint64_t master_seed, Stream stream, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  const auto s = static_cast<std::uint64_t>(stream);
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(s), hi(s), lo(index), hi(index)};
  Rng rng;
  rng.engine_.seed(seq);
  return rng;
}

double Rng::Normal(double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(engine_);
}

std::uint64_t Rng::UniformInt(std::uint64_t n) {
  if (n == 0) throw ContractError("UniformInt: empty range");
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

std::string Rng::SerializeState() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::RestoreState(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (!is) throw FormatError("corrupt rng state");
}

}  // namespace election
