#include "election/cli/cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "election/analysis/cluster.h"
#include "election/analysis/evaluate.h"
#include "election/analysis/export.h"
#include "election/analysis/language.h"
#include "election/errors.h"
#include "election/netgen/rgg.h"
#include "election/train/trainer.h"

namespace election::cli {
namespace fs = std::filesystem;
namespace {

constexpr const char* kOutEnv = "ELECTION_ARENA_OUT";

fs::path ResolveOutput(const std::string& flag, const fs::path& from_config = {}) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') return env;
  throw ValidationError(std::string("no output directory: pass --out or set ") + kOutEnv);
}

void PrepareOutputDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

// Reads "node_id,community" rows (header optional) into a label per node.
std::vector<int> LoadCommunities(const fs::path& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open communities file " + path.string());
  std::vector<int> labels(n, 0);
  std::vector<bool> seen(n, false);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    long long node = 0;
    long long label = 0;
    if (!(ss >> node >> label)) {
      if (line_no == 1) continue;  // header
      throw ParseError("expected 'node_id,community' in " + path.string(), line_no);
    }
    if (node < 0 || static_cast<std::size_t>(node) >= n)
      throw ValidationError("community node " + std::to_string(node) + " out of range in " + path.string());
    labels[static_cast<std::size_t>(node)] = static_cast<int>(label);
    seen[static_cast<std::size_t>(node)] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i]) throw ValidationError("communities file has no label for node " + std::to_string(i));
  return labels;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
};

int Train(const Context& ctx, const std::string& config_path, std::optional<std::uint64_t> seed,
          const std::string& out_flag, std::optional<std::int64_t> episodes,
          const std::string& resume) {
  RunConfig rc = LoadRunConfig(config_path);
  if (seed) rc.game.seed = *seed;
  if (episodes) rc.episodes = *episodes;
  if (rc.episodes < 0) throw ValidationError("episodes must be non-negative");
  const fs::path out_dir = ResolveOutput(out_flag, rc.output_dir);
  // Everything that can fail on bad input happens before the first write.
  train::NetworkSource source = train::NetworkSource::FromConfig(rc.game);
  std::unique_ptr<train::Trainer> trainer;
  if (resume.empty()) {
    trainer = std::make_unique<train::Trainer>(rc.game, std::move(source));
  } else {
    const train::Checkpoint cp = train::LoadCheckpoint(resume);
    if (env::ConfigHash(cp.config) != env::ConfigHash(rc.game))
      throw ValidationError("checkpoint " + resume + " was trained with a different config");
    trainer = std::make_unique<train::Trainer>(cp, std::move(source));
  }

  PrepareOutputDir(out_dir);
  {
    std::ofstream cfg(out_dir / "config.json");
    nlohmann::json j = env::ToJson(rc.game);
    j["episodes"] = rc.episodes;
    j["checkpoint_interval"] = rc.checkpoint_interval;
    j["eval_episodes"] = rc.eval_episodes;
    cfg << j.dump(2) << '\n';
    if (!cfg) throw IoError("cannot write " + (out_dir / "config.json").string());
  }
  train::TrainOptions options;
  options.episodes = rc.episodes;
  options.checkpoint_interval = rc.checkpoint_interval;
  options.output_dir = out_dir;
  const std::int64_t report = std::max<std::int64_t>(1, rc.episodes / 20);
  train::RunTraining(*trainer, options, [&](const train::StepResult& r) {
    const auto done = static_cast<std::int64_t>(r.episode) + 1;
    if (done % report == 0) {
      const auto& s = trainer->stats();
      ctx.err << "episode " << done << "/" << rc.episodes << "  c1 "
              << static_cast<double>(s.c1_wins) / static_cast<double>(s.games()) << '\n';
    }
  });
  if (rc.eval_episodes > 0) {
    analysis::EvalOptions eo;
    eo.episodes = rc.eval_episodes;
    eo.mask = rc.game.active_mask;
    eo.seed = rc.game.seed;
    const auto result = analysis::Evaluate(trainer->model(), rc.game, trainer->source(), eo);
    analysis::WriteScoreTableCsv(out_dir / "scores.csv", {result.score});
  }
  ctx.out << (out_dir / "checkpoint_final.emcp").string() << '\n';
  return 0;
}

struct LoadedModel {
  env::GameConfig config;
  std::unique_ptr<policy::Model> model;
};

LoadedModel LoadModel(const std::string& path) {
  const train::Checkpoint cp = train::LoadCheckpoint(path);
  LoadedModel m;
  m.config = cp.config;
  m.model = std::make_unique<policy::Model>(cp.config, cp.config.seed);
  for (auto& [name, p] : m.model->params()) {
    auto it = cp.tensors.find("param/" + name);
    if (it == cp.tensors.end() || it->second.shape() != p.value.shape())
      throw FormatError(path + ": missing or misshapen parameter " + name);
    p.value = it->second;
  }
  return m;
}

int Eval(const Context& ctx, const std::string& checkpoint, const std::string& mask,
         std::int64_t episodes, int workers, std::optional<std::uint64_t> seed,
         const std::string& graph, const std::string& out_flag) {
  const env::ActiveMask m = env::ParseActiveMask(mask);
  const fs::path out_dir = ResolveOutput(out_flag);
  LoadedModel lm = LoadModel(checkpoint);
  if (!graph.empty()) {
    lm.config.network = env::NetworkKind::kFile;
    lm.config.graph_file = graph;
  }
  const train::NetworkSource source = train::NetworkSource::FromConfig(lm.config);
  analysis::EvalOptions eo;
  eo.mask = m;
  eo.episodes = episodes;
  eo.workers = workers;
  eo.seed = seed.value_or(lm.config.seed);
  const auto result = analysis::Evaluate(*lm.model, lm.config, source, eo);
  PrepareOutputDir(out_dir);
  analysis::WriteScoreTableCsv(out_dir / "scores.csv", {result.score});
  ctx.out << "mode,mask,c1_frac,c2_frac,tie_frac,episodes\n"
          << env::ToString(result.score.mode) << ',' << env::ToString(result.score.mask) << ','
          << result.score.c1_frac << ',' << result.score.c2_frac << ',' << result.score.tie_frac
          << ',' << result.score.episodes << '\n';
  return 0;
}

int Analyze(const Context& ctx, const std::string& checkpoint, const std::string& graph,
            std::int64_t episodes, int k, const std::string& mask, int workers,
            std::optional<std::uint64_t> seed, const std::string& communities,
            const std::string& out_flag) {
  const env::ActiveMask m = env::ParseActiveMask(mask);
  const fs::path out_dir = ResolveOutput(out_flag);
  LoadedModel lm = LoadModel(checkpoint);
  lm.config.network = env::NetworkKind::kFile;
  lm.config.graph_file = graph;
  const train::NetworkSource source = train::NetworkSource::FromConfig(lm.config);
  const auto n = static_cast<std::size_t>(lm.config.n);
  std::vector<int> truth;
  if (!communities.empty()) truth = LoadCommunities(communities, n);

  analysis::EvalOptions eo;
  eo.mask = m;
  eo.episodes = episodes;
  eo.workers = workers;
  eo.seed = seed.value_or(lm.config.seed);
  eo.record = true;
  const auto result = analysis::Evaluate(*lm.model, lm.config, source, eo);
  const auto w = analysis::BuildMemberSymbolMatrix(result.traces, n,
                                                   static_cast<std::size_t>(lm.config.n_vocab));
  const diff::Tensor x = analysis::TfIdf(w.counts);
  const std::vector<int> labels = analysis::SpectralCluster(x, k, eo.seed);
  const auto ngrams = analysis::ComputeNgramStats(result.traces);

  PrepareOutputDir(out_dir);
  analysis::WriteMatrixCsv(out_dir / "member_symbol.csv", w.counts);
  analysis::WriteMatrixCsv(out_dir / "tfidf.csv", x);
  analysis::WriteLabelsCsv(out_dir / "labels.csv", labels);
  analysis::WriteNgramCsv(out_dir / "ngrams.csv", ngrams);
  analysis::WriteTracesJsonl(out_dir / "traces.jsonl", result.traces);
  analysis::WriteScoreTableCsv(out_dir / "scores.csv", {result.score});
  if (!truth.empty()) {
    const double nmi = analysis::NormalizedMutualInformation(labels, truth);
    std::ofstream summary(out_dir / "summary.json");
    summary << nlohmann::json{{"nmi", nmi}, {"k", k}, {"episodes", episodes}}.dump(2) << '\n';
    if (!summary) throw IoError("cannot write " + (out_dir / "summary.json").string());
    ctx.out << "nmi " << nmi << '\n';
  }
  ctx.out << out_dir.string() << '\n';
  return 0;
}

int GenGraph(const Context& ctx, std::int64_t n, int d, double beta, std::uint64_t seed,
             const std::string& out_flag) {
  if (n < 2) throw ValidationError("--n must be at least 2");
  if (d < 1) throw ValidationError("--d must be positive");
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("--beta must lie in (0, 1)");
  fs::path out = out_flag;
  if (out.is_relative()) {
    if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') out = fs::path(env) / out;
  }
  Rng rng = Rng::ForStream(seed, Stream::kGraph, 0);
  const netgen::Graph g = netgen::SampleRgg(static_cast<std::size_t>(n), d, beta, rng);
  if (out.has_parent_path()) PrepareOutputDir(out.parent_path());
  netgen::SaveEdgeList(g, out);
  fs::path emb = out;
  emb += ".emb";
  netgen::SaveEmbeddings(*g.embeddings(), emb);
  ctx.out << "nodes " << g.node_count() << " edges " << g.edge_count() << " density "
          << g.Density() << '\n';
  return 0;
}

}  // namespace

RunConfig RunConfigFromJson(const nlohmann::json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  nlohmann::json game = j;
  RunConfig rc;
  try {
    if (game.contains("output_dir")) rc.output_dir = game["output_dir"].get<std::string>();
    if (game.contains("episodes")) rc.episodes = game["episodes"].get<std::int64_t>();
    if (game.contains("checkpoint_interval"))
      rc.checkpoint_interval = game["checkpoint_interval"].get<std::int64_t>();
    if (game.contains("eval_episodes")) rc.eval_episodes = game["eval_episodes"].get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad run control: ") + e.what());
  }
  for (const char* key : {"output_dir", "episodes", "checkpoint_interval", "eval_episodes"})
    game.erase(key);
  rc.game = env::GameConfigFromJson(game);
  if (!rc.game.graph_file.empty() && fs::path(rc.game.graph_file).is_relative() && !base_dir.empty())
    rc.game.graph_file = (base_dir / rc.game.graph_file).lexically_normal().string();
  if (!rc.output_dir.empty() && rc.output_dir.is_relative() && !base_dir.empty())
    rc.output_dir = (base_dir / rc.output_dir).lexically_normal();
  if (rc.episodes < 0) throw ValidationError("episodes must be non-negative");
  if (rc.checkpoint_interval < 0) throw ValidationError("checkpoint_interval must be non-negative");
  if (rc.eval_episodes < 0) throw ValidationError("eval_episodes must be non-negative");
  return rc;
}

RunConfig LoadRunConfig(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    return RunConfigFromJson(j, path.parent_path());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voting game with learned discrete communication", "election_arena"};
  app.require_subcommand(1);
  Context ctx{out, err};

  std::string config_path, out_flag, resume, checkpoint, graph, communities, mask = "both";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> train_episodes;
  std::int64_t episodes = 500;
  std::int64_t analyze_episodes = 100;
  int workers = 1;
  int k = 2;
  std::int64_t gen_n = 100;
  int gen_d = 2;
  double gen_beta = 0.05;
  std::uint64_t gen_seed = 0;

  auto* train_cmd = app.add_subcommand("train", "Train all policies and the communication engine");
  train_cmd->add_option("--config", config_path, "JSON config file")->required();
  train_cmd->add_option("--seed", seed, "Master seed (overrides the config)");
  train_cmd->add_option("--out", out_flag, "Output directory");
  train_cmd->add_option("--episodes", train_episodes, "Episode count (overrides the config)");
  train_cmd->add_option("--resume", resume, "Continue from this checkpoint");

  auto* eval_cmd = app.add_subcommand("eval", "Win rates of a checkpoint on held-out episodes");
  eval_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--mask", mask, "Active candidates: both, c1 or c2")
      ->check(CLI::IsMember({"both", "c1", "c2"}));
  eval_cmd->add_option("--episodes", episodes, "Episodes")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", seed, "Evaluation seed (default: the checkpoint's)");
  eval_cmd->add_option("--graph", graph, "Play on this fixed edge list instead");
  eval_cmd->add_option("--out", out_flag, "Output directory");

  auto* analyze_cmd = app.add_subcommand("analyze", "Language statistics and clustering on a fixed graph");
  analyze_cmd->add_option("--checkpoint", checkpoint, "Checkpoint file")->required();
  analyze_cmd->add_option("--graph", graph, "Edge list of the fixed network")->required();
  analyze_cmd->add_option("--episodes", analyze_episodes, "Episodes")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--k", k, "Clusters")->check(CLI::Range(2, 1000));
  analyze_cmd->add_option("--mask", mask, "Active candidates: both, c1 or c2")
      ->check(CLI::IsMember({"both", "c1", "c2"}));
  analyze_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--seed", seed, "Evaluation seed (default: the checkpoint's)");
  analyze_cmd->add_option("--communities", communities, "CSV node_id,community for NMI scoring");
  analyze_cmd->add_option("--out", out_flag, "Output directory");

  auto* gen_cmd = app.add_subcommand("gen-graph", "Sample a random geometric graph");
  gen_cmd->add_option("--n", gen_n, "Nodes")->required();
  gen_cmd->add_option("--d", gen_d, "Embedding dimension")->required();
  gen_cmd->add_option("--beta", gen_beta, "Target edge density")->required();
  gen_cmd->add_option("--seed", gen_seed, "Seed")->required();
  gen_cmd->add_option("--out", out_flag, "Edge-list path; embeddings go to <out>.emb")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*train_cmd) return Train(ctx, config_path, seed, out_flag, train_episodes, resume);
    if (*eval_cmd) return Eval(ctx, checkpoint, mask, episodes, workers, seed, graph, out_flag);
    if (*analyze_cmd)
      return Analyze(ctx, checkpoint, graph, analyze_episodes, k, mask, workers, seed, communities,
                     out_flag);
    if (*gen_cmd) return GenGraph(ctx, gen_n, gen_d, gen_beta, gen_seed, out_flag);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace election::cli
