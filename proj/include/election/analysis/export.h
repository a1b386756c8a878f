#ifndef ELECTION_ANALYSIS_EXPORT_H_
#define ELECTION_ANALYSIS_EXPORT_H_

#include <filesystem>
#include <span>

#include "election/analysis/evaluate.h"
#include "election/analysis/language.h"

namespace election::analysis {

inline constexpr int kTraceSchemaVersion = 1;

// Header "node_id,s0,s1,...". Integral values are written without a
// fractional part; others with round-trip precision.
void WriteMatrixCsv(const std::filesystem::path& path, const Tensor& matrix);
// Header "node_id,cluster".
void WriteLabelsCsv(const std::filesystem::path& path, std::span<const int> labels);
// Header "mode,mask,c1_frac,c2_frac,tie_frac,episodes".
void WriteScoreTableCsv(const std::filesystem::path& path, const ScoreTable& table);
// Header "speaker,order,symbols,frequency"; bigram symbols are "a b".
void WriteNgramCsv(const std::filesystem::path& path, const NgramStats& stats);

// One JSON object per line: a record per propaganda step
// {schema, episode, step, F, preferences, messages:[{sender, symbols}]}
// and a final {schema, episode, step: T+1, votes, preferences, winner}.
// Senders are "C1", "C2" or the member index.
void WriteTracesJsonl(const std::filesystem::path& path,
                      std::span<const train::EpisodeTrace> traces);

}  // namespace election::analysis

#endif  // ELECTION_ANALYSIS_EXPORT_H_
