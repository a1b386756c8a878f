#include "election/analysis/language.h"

#include <cmath>

#include "election/comm/engine.h"
#include "election/errors.h"

namespace election::analysis {

MemberSymbolMatrix BuildMemberSymbolMatrix(std::span<const train::EpisodeTrace> traces,
                                           std::size_t members, std::size_t vocab) {
  MemberSymbolMatrix w;
  w.counts = Tensor({members, vocab});
  if (traces.empty()) return w;
  const std::uint64_t graph = traces.front().graph_id;
  for (const auto& trace : traces) {
    if (trace.graph_id != graph)
      throw ContractError("member-symbol matrix needs traces from a single fixed graph");
    for (const auto& step : trace.steps) {
      for (const auto& msg : step.messages) {
        if (msg.sender < 0) continue;
        if (static_cast<std::size_t>(msg.sender) >= members)
          throw ContractError("trace sender " + std::to_string(msg.sender) + " out of range");
        for (int s : msg.symbols) {
          if (s < 0 || static_cast<std::size_t>(s) >= vocab)
            throw ContractError("symbol " + std::to_string(s) + " outside the vocabulary");
          w.counts.at(static_cast<std::size_t>(msg.sender), static_cast<std::size_t>(s)) += 1.0;
        }
      }
    }
  }
  w.episodes = static_cast<std::int64_t>(traces.size());
  return w;
}

Tensor TfIdf(const Tensor& counts) {
  if (counts.rank() != 2) throw ContractError("TfIdf: expected a matrix");
  const std::size_t n = counts.rows();
  const std::size_t v = counts.cols();
  Tensor x({n, v});
  for (std::size_t j = 0; j < v; ++j) {
    std::size_t df = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (counts.at(i, j) < 0.0) throw ContractError("TfIdf: negative count");
      if (counts.at(i, j) > 0.0) ++df;
    }
    if (df == 0) continue;
    const double idf = std::log(static_cast<double>(n) / static_cast<double>(df));
    for (std::size_t i = 0; i < n; ++i) x.at(i, j) = counts.at(i, j) * idf;
  }
  return x;
}

std::string SpeakerClass(int sender) {
  if (sender == comm::kCandidateOne) return "c1";
  if (sender == comm::kCandidateTwo) return "c2";
  return "members";
}

NgramStats ComputeNgramStats(std::span<const train::EpisodeTrace> traces) {
  std::map<std::string, std::map<int, double>> uni;
  std::map<std::string, std::map<std::pair<int, int>, double>> bi;
  for (const auto& trace : traces) {
    for (const auto& step : trace.steps) {
      for (const auto& msg : step.messages) {
        const std::string cls = SpeakerClass(msg.sender);
        for (std::size_t k = 0; k < msg.symbols.size(); ++k) {
          uni[cls][msg.symbols[k]] += 1.0;
          if (k + 1 < msg.symbols.size()) bi[cls][{msg.symbols[k], msg.symbols[k + 1]}] += 1.0;
        }
      }
    }
  }
  NgramStats stats;
  auto normalize = [](auto& table) {
    double total = 0.0;
    for (const auto& [key, c] : table) total += c;
    for (auto& [key, c] : table) c /= total;
  };
  for (auto& [cls, table] : uni) {
    normalize(table);
    stats[cls].unigrams = std::move(table);
  }
  for (auto& [cls, table] : bi) {
    normalize(table);
    stats[cls].bigrams = std::move(table);
  }
  return stats;
}

}  // namespace election::analysis
