#include "kgr/search.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "kgr/error.hpp"
#include "kgr/hashing.hpp"
#include "kgr/parallel.hpp"

namespace kgr {

SearchContext SearchContext::build(const RuleSet& rules, SimilarityMatrix sims,
                                   std::span<const PredictionTask> tasks,
                                   const KnowledgeGraph& train,
                                   const GroundingLimits& limits,
                                   std::size_t top_k) {
  SearchContext context;
  context.rules = &rules;
  context.top_k = top_k;
  context.tasks.reserve(tasks.size());
  for (const PredictionTask& task : tasks) {
    if (task.relation != sims.key().relation ||
        task.direction != sims.key().direction) {
      throw ContractViolation("validation task outside the search group");
    }
    context.tasks.push_back(
        {task.target, collect_firings(rules, sims.members(), task, train, limits)});
  }
  context.sims = std::move(sims);
  return context;
}

namespace {

template <typename RankFn>
std::optional<double> mean_reciprocal_rank(const SearchContext& context,
                                           RankFn&& rank) {
  if (context.tasks.empty()) return std::nullopt;
  std::mt19937_64 unused;
  std::vector<double> ranks;
  ranks.reserve(context.tasks.size());
  for (const auto& task : context.tasks) {
    const CandidateRanking ranking = rank(task.firings);
    ranks.push_back(rank_of(task.target, ranking.entries, TiePolicy::kAverage, unused));
  }
  return mrr(ranks);
}

bool better(double fa, const ThresholdVector& va, double fb,
            const ThresholdVector& vb) {
  if (fa != fb) return fa > fb;
  return va < vb;
}

SearchResult pick_best(const SearchContext& context,
                       std::span<const ThresholdVector> candidates,
                       unsigned threads) {
  SearchResult result;
  if (context.tasks.empty() || candidates.empty()) {
    result.thresholds = ThresholdVector::uniform(0.0);
    return result;
  }
  std::vector<double> scores(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    scores[i] = *fitness(context, candidates[i]);
  });

  std::size_t best = 0;
  double running = -1.0;
  result.trace.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i > 0 && better(scores[i], candidates[i], scores[best], candidates[best])) {
      best = i;
    }
    running = std::max(running, scores[i]);
    result.trace.push_back(running);
  }
  result.thresholds = candidates[best];
  result.fitness = scores[best];
  return result;
}

}  // namespace

std::optional<double> fitness(const SearchContext& context,
                              const ThresholdVector& thresholds) {
  if (context.tasks.empty()) return std::nullopt;
  const ClusterModel model = cluster(*context.rules, context.sims, thresholds);
  const std::vector<std::uint32_t> cluster_of = model.assignment();
  return mean_reciprocal_rank(context, [&](std::span<const Firing> firings) {
    return rank_non_redundant(firings, cluster_of, context.top_k);
  });
}

std::optional<double> strategy_mrr(const SearchContext& context,
                                   Aggregation strategy) {
  switch (strategy) {
    case Aggregation::kMaximum:
      return mean_reciprocal_rank(context, [&](std::span<const Firing> f) {
        return rank_maximum(f, context.top_k);
      });
    case Aggregation::kNoisyOr:
      return mean_reciprocal_rank(context, [&](std::span<const Firing> f) {
        return rank_noisy_or(f, context.top_k);
      });
    default:
      throw ContractViolation("strategy_mrr supports max and noisyor only");
  }
}

std::vector<double> grid_values(unsigned steps) {
  if (steps == 0) throw ContractViolation("grid needs at least one step");
  std::vector<double> values;
  values.reserve(steps + 1);
  for (unsigned i = 0; i <= steps; ++i) {
    values.push_back(static_cast<double>(i) / static_cast<double>(steps));
  }
  return values;
}

SearchResult grid_search(const SearchContext& context, unsigned steps,
                         unsigned threads) {
  std::vector<ThresholdVector> candidates;
  for (double t : grid_values(steps)) candidates.push_back(ThresholdVector::uniform(t));
  return pick_best(context, candidates, threads);
}

SearchResult random_search(const SearchContext& context,
                           const RandomSearchOptions& options,
                           unsigned threads) {
  if (!options.continuous && options.levels == 0) {
    throw ContractViolation("random search needs at least one level");
  }
  std::vector<ThresholdVector> candidates{ThresholdVector::uniform(0.0),
                                          ThresholdVector::uniform(1.0)};
  const RelationDirection key = context.key();
  std::mt19937_64 rng(combine_seed(
      options.seed, (static_cast<std::uint64_t>(key.relation) << 1) |
                        static_cast<std::uint64_t>(key.direction)));
  std::uniform_int_distribution<unsigned> level(0, options.levels);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  candidates.reserve(candidates.size() + options.iterations);
  for (std::size_t i = 0; i < options.iterations; ++i) {
    ThresholdVector v;
    for (double& x : v.values) {
      x = options.continuous ? unit(rng)
                             : static_cast<double>(level(rng)) /
                                   static_cast<double>(options.levels);
    }
    candidates.push_back(v);
  }
  return pick_best(context, candidates, threads);
}

void write_thresholds(std::ostream& out, const ThresholdTable& table,
                      const Vocabulary& vocabulary) {
  for (const auto& [key, entry] : table) {
    out << vocabulary.relations.name(key.relation) << '\t'
        << to_string(key.direction) << '\t';
    for (std::size_t i = 0; i < 6; ++i) {
      if (i) out << ' ';
      out << format_double(entry.thresholds[i]);
    }
    out << '\t' << (entry.fitness ? format_double(*entry.fitness) : "nan") << '\n';
  }
}

ThresholdTable read_thresholds(std::istream& in, const Vocabulary& vocabulary) {
  ThresholdTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() != 4) {
      throw ParseError("expected 4 tab-separated fields", line_no);
    }
    auto relation = vocabulary.relations.find(fields[0]);
    if (!relation) {
      throw ResolutionError("line " + std::to_string(line_no) +
                            ": unknown relation '" + fields[0] + "'");
    }
    Direction direction;
    if (!parse_direction(fields[1], direction)) {
      throw ParseError("direction must be head or tail", line_no);
    }
    ThresholdEntry entry;
    std::stringstream values(fields[2]);
    for (double& v : entry.thresholds.values) {
      std::string token;
      if (!(values >> token)) throw ParseError("expected 6 thresholds", line_no);
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("invalid threshold '" + token + "'", line_no);
      }
    }
    if (std::string extra; values >> extra) {
      throw ParseError("expected 6 thresholds", line_no);
    }
    if (!entry.thresholds.valid()) {
      throw FormatError("threshold outside [0,1]", line_no);
    }
    if (fields[3] != "nan") {
      double f = 0.0;
      auto [ptr, ec] = std::from_chars(fields[3].data(),
                                       fields[3].data() + fields[3].size(), f);
      if (ec != std::errc{} || ptr != fields[3].data() + fields[3].size()) {
        throw ParseError("invalid fitness '" + fields[3] + "'", line_no);
      }
      entry.fitness = f;
    }
    table[{*relation, direction}] = entry;
  }
  return table;
}

ThresholdTable load_thresholds(const std::filesystem::path& path,
                               const Vocabulary& vocabulary) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_thresholds(in, vocabulary);
}

}  // namespace kgr
