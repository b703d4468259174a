#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "kgr/aggregation.hpp"
#include "kgr/clustering.hpp"
#include "kgr/evaluation.hpp"
#include "kgr/similarity.hpp"

namespace kgr {

// Validation data for one (relation, direction): the group's similarity
// matrix and, per validation task, the filtered firings of the group's
// rules. Firings are computed once; every candidate threshold vector only
// re-clusters and re-aggregates.
struct SearchContext {
  struct Task {
    EntityId target = 0;
    std::vector<Firing> firings;
  };

  const RuleSet* rules = nullptr;
  SimilarityMatrix sims;
  std::vector<Task> tasks;
  std::size_t top_k = kDefaultTopK;

  RelationDirection key() const noexcept { return sims.key(); }

  // `tasks` must all belong to the matrix's (relation, direction).
  static SearchContext build(const RuleSet& rules, SimilarityMatrix sims,
                             std::span<const PredictionTask> tasks,
                             const KnowledgeGraph& train,
                             const GroundingLimits& limits = {},
                             std::size_t top_k = kDefaultTopK);
};

// Validation MRR (average tie policy) of Non-redundant Noisy-OR under the
// given thresholds. nullopt without validation tasks.
std::optional<double> fitness(const SearchContext& context,
                              const ThresholdVector& thresholds);

// Validation MRR of plain Maximum or Noisy-OR aggregation.
std::optional<double> strategy_mrr(const SearchContext& context,
                                   Aggregation strategy);

struct SearchResult {
  ThresholdVector thresholds;
  std::optional<double> fitness;
  // Best fitness after each evaluated candidate, in evaluation order.
  std::vector<double> trace;
};

// The scalar grid {i/steps : i = 0..steps}, ascending.
std::vector<double> grid_values(unsigned steps);

// Uniform vectors [t,t,t,t,t,t] over grid_values(steps). Ties go to the
// smaller t. Without validation tasks the all-zeros vector is returned.
SearchResult grid_search(const SearchContext& context, unsigned steps,
                         unsigned threads = 1);

struct RandomSearchOptions {
  unsigned levels = 10;  // components drawn from {i/levels}
  std::size_t iterations = 10'000;
  std::uint64_t seed = 42;
  bool continuous = false;  // draw components from U[0,1] instead
};

// Evaluates all-zeros, all-ones, then `iterations` random vectors drawn
// from a stream seeded by (seed, relation, direction). The best fitness
// wins; ties go to the lexicographically smaller vector.
SearchResult random_search(const SearchContext& context,
                           const RandomSearchOptions& options,
                           unsigned threads = 1);

struct ThresholdEntry {
  ThresholdVector thresholds;
  std::optional<double> fitness;
};
using ThresholdTable = std::map<RelationDirection, ThresholdEntry>;

// relation<TAB>direction<TAB>t1 t2 t3 t4 t5 t6<TAB>fitness; '#' comments.
void write_thresholds(std::ostream& out, const ThresholdTable& table,
                      const Vocabulary& vocabulary);
ThresholdTable read_thresholds(std::istream& in, const Vocabulary& vocabulary);
ThresholdTable load_thresholds(const std::filesystem::path& path,
                               const Vocabulary& vocabulary);

}  // namespace kgr
