#ifndef ELECTION_ANALYSIS_LANGUAGE_H_
#define ELECTION_ANALYSIS_LANGUAGE_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>

#include "election/diff/tensor.h"
#include "election/train/episode.h"

namespace election::analysis {

using diff::Tensor;

struct MemberSymbolMatrix {
  Tensor counts;  // n x vocab, W_ij = times member i uttered word j
  std::int64_t episodes = 0;
};

// Counts member-uttered words over traces that all come from the same graph
// (ContractError otherwise, or if a symbol is outside [0, vocab)).
MemberSymbolMatrix BuildMemberSymbolMatrix(std::span<const train::EpisodeTrace> traces,
                                           std::size_t members, std::size_t vocab);

// X_ij = W_ij * ln(n / df_j); columns nobody uses stay zero.
Tensor TfIdf(const Tensor& counts);

struct NgramTable {
  std::map<int, double> unigrams;
  std::map<std::pair<int, int>, double> bigrams;  // within a message only
};

// Keyed by speaker class: "c1", "c2", "members". Classes that never spoke
// are absent.
using NgramStats = std::map<std::string, NgramTable>;

NgramStats ComputeNgramStats(std::span<const train::EpisodeTrace> traces);
std::string SpeakerClass(int sender);

}  // namespace election::analysis

#endif  // ELECTION_ANALYSIS_LANGUAGE_H_
