#include "election/analysis/evaluate.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "election/errors.h"

namespace election::analysis {

EvalResult Evaluate(const policy::Model& model, const env::GameConfig& config,
                    const train::NetworkSource& source, const EvalOptions& options) {
  if (options.episodes <= 0) throw ValidationError("evaluation needs at least one episode");
  if (options.workers <= 0) throw ValidationError("workers must be positive");
  const auto count = static_cast<std::size_t>(options.episodes);
  std::vector<train::EpisodeTrace> traces(count);

  auto run = [&](std::size_t e) {
    const std::uint64_t index = train::kEvalIndexBase + e;
    const train::PreparedNetwork network = source.Prepare(options.seed, index);
    Rng noise = Rng::ForStream(options.seed, Stream::kEval, e);
    train::EpisodeOptions eo;
    eo.mask = options.mask;
    eo.record = options.record;
    eo.requires_grad = false;
    traces[e] = train::RunEpisode(config, network, model, noise, eo, e).trace;
  };

  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(options.workers), count);
  if (workers == 1) {
    for (std::size_t e = 0; e < count; ++e) run(e);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t e = w; e < count; e += workers) run(e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  EvalResult result;
  std::int64_t wins[3] = {0, 0, 0};
  for (const auto& t : traces) ++wins[t.Winner()];
  const double total = static_cast<double>(count);
  result.score.mode = config.reward_mode;
  result.score.mask = options.mask;
  result.score.c1_frac = static_cast<double>(wins[1]) / total;
  result.score.c2_frac = static_cast<double>(wins[2]) / total;
  result.score.tie_frac = static_cast<double>(wins[0]) / total;
  result.score.episodes = options.episodes;
  if (options.record) result.traces = std::move(traces);
  return result;
}

}  // namespace election::analysis
