#ifndef ELECTION_RANDOM_H_
#define ELECTION_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>

namespace election {

// Independent random streams derived from one master seed. Each stream is
// further indexed (usually by episode), so changing the draws of one stream
// never shifts another.
enum class Stream : std::uint64_t {
  kInit = 1,
  kGraph = 2,
  kNoise = 3,
  kTarget = 4,
  kEval = 5,
  kCluster = 6,
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static Rng ForStream(std::uint64_t master_seed, Stream stream, std::uint64_t index = 0);

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Normal(double mean = 0.0, double stddev = 1.0);
  // Uniform integer in [0, n).
  std::uint64_t UniformInt(std::uint64_t n);

  std::mt19937_64& engine() { return engine_; }
  std::string SerializeState() const;
  void RestoreState(const std::string& state);

 private:
  std::mt19937_64 engine_;
};

}  // namespace election

#endif  // ELECTION_RANDOM_H_
