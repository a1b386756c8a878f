#include "election/analysis/export.h"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "election/comm/engine.h"
#include "election/errors.h"
#include "json.hpp"

namespace election::analysis {
namespace {

std::ofstream Open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void WriteNumber(std::ostream& out, double v) {
  if (v == std::trunc(v) && std::abs(v) < 9.0e15) {
    out << static_cast<long long>(v);
  } else {
    out << v;
  }
}

nlohmann::json PreferencesJson(const Tensor& p) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < p.rows(); ++i) rows.push_back(p.Row(i));
  return rows;
}

}  // namespace

void WriteMatrixCsv(const std::filesystem::path& path, const Tensor& matrix) {
  if (matrix.rank() != 2) throw ContractError("WriteMatrixCsv: expected a matrix");
  auto out = Open(path);
  out << "node_id";
  for (std::size_t j = 0; j < matrix.cols(); ++j) out << ",s" << j;
  out << '\n';
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out << i;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      out << ',';
      WriteNumber(out, matrix.at(i, j));
    }
    out << '\n';
  }
  Finish(out, path);
}

void WriteLabelsCsv(const std::filesystem::path& path, std::span<const int> labels) {
  auto out = Open(path);
  out << "node_id,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
  Finish(out, path);
}

void WriteScoreTableCsv(const std::filesystem::path& path, const ScoreTable& table) {
  auto out = Open(path);
  out << "mode,mask,c1_frac,c2_frac,tie_frac,episodes\n";
  for (const ScoreRow& r : table) {
    out << env::ToString(r.mode) << ',' << env::ToString(r.mask) << ',' << r.c1_frac << ','
        << r.c2_frac << ',' << r.tie_frac << ',' << r.episodes << '\n';
  }
  Finish(out, path);
}

void WriteNgramCsv(const std::filesystem::path& path, const NgramStats& stats) {
  auto out = Open(path);
  out << "speaker,order,symbols,frequency\n";
  for (const auto& [speaker, table] : stats) {
    for (const auto& [s, f] : table.unigrams) out << speaker << ",1," << s << ',' << f << '\n';
    for (const auto& [s, f] : table.bigrams)
      out << speaker << ",2," << s.first << ' ' << s.second << ',' << f << '\n';
  }
  Finish(out, path);
}

void WriteTracesJsonl(const std::filesystem::path& path,
                      std::span<const train::EpisodeTrace> traces) {
  auto out = Open(path);
  for (const auto& trace : traces) {
    for (const auto& step : trace.steps) {
      nlohmann::json j;
      j["schema"] = kTraceSchemaVersion;
      j["episode"] = trace.episode;
      j["step"] = step.step;
      j["F"] = step.following;
      j["preferences"] = PreferencesJson(step.preferences);
      nlohmann::json msgs = nlohmann::json::array();
      for (const auto& m : step.messages) {
        nlohmann::json sender;
        if (m.sender == comm::kCandidateOne) sender = "C1";
        else if (m.sender == comm::kCandidateTwo) sender = "C2";
        else sender = m.sender;
        msgs.push_back({{"sender", sender}, {"symbols", m.symbols}});
      }
      j["messages"] = std::move(msgs);
      out << j.dump() << '\n';
    }
    nlohmann::json v;
    v["schema"] = kTraceSchemaVersion;
    v["episode"] = trace.episode;
    v["step"] = static_cast<int>(trace.steps.size()) + 1;
    v["votes"] = trace.votes;
    v["preferences"] = PreferencesJson(trace.final_preferences);
    v["winner"] = trace.Winner() == 1 ? "C1" : trace.Winner() == 2 ? "C2" : "tie";
    out << v.dump() << '\n';
  }
  Finish(out, path);
}

}  // namespace election::analysis
