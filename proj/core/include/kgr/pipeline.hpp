#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "kgr/aggregation.hpp"
#include "kgr/config.hpp"
#include "kgr/evaluation.hpp"
#include "kgr/graph.hpp"
#include "kgr/miner.hpp"
#include "kgr/ruleset.hpp"
#include "kgr/search.hpp"
#include "kgr/similarity.hpp"

namespace kgr {

// Ranked answers for both open slots of one evaluation triple.
struct PredictionBlock {
  Triple triple;
  std::vector<RankedCandidate> heads;
  std::vector<RankedCandidate> tails;
};

// Per triple: `head<TAB>rel<TAB>tail`, then `Heads: e<TAB>score...` and
// `Tails: ...`. Lines starting with '#' are comments.
void write_predictions(std::ostream& out, std::span<const PredictionBlock> blocks,
                       const Vocabulary& vocabulary);
std::vector<PredictionBlock> read_predictions(std::istream& in,
                                              const Vocabulary& vocabulary);

// Splits whose triples are removed from the rankings of `split`: the split
// itself and every split before it.
std::vector<const KnowledgeGraph*> filter_splits(const Dataset& data, Split split);

// Validation tasks grouped by (relation, direction), filtered with train and
// valid.
std::map<RelationDirection, std::vector<PredictionTask>> validation_tasks(
    const Dataset& data);

enum class SearchStrategy : std::uint8_t { kGrid, kRandom };

struct SearchOptions {
  SearchStrategy strategy = SearchStrategy::kRandom;
  unsigned grid_steps = 200;
  RandomSearchOptions random;
  std::size_t top_k = kDefaultTopK;
  GroundingLimits limits;
  unsigned threads = 1;
};

// Thresholds for every rule group; groups without validation tasks get
// all zeros. `results`, when given, receives each group's search result.
ThresholdTable learn_thresholds(
    const Dataset& data, const RuleSet& rules, const RuleSignatures& signatures,
    const SearchOptions& options,
    std::map<RelationDirection, SearchResult>* results = nullptr);

struct ApplyOptions {
  Aggregation aggregation = Aggregation::kMaximum;
  std::size_t top_k = kDefaultTopK;
  GroundingLimits limits;
  unsigned threads = 1;
};

// Rankings for every triple of `split` (valid or test). Non-redundant
// Noisy-OR needs `thresholds` and `signatures`; groups missing from the
// table fall back to all zeros.
std::vector<PredictionBlock> predict(const Dataset& data, Split split,
                                     const RuleSet& rules,
                                     const ApplyOptions& options,
                                     const ThresholdTable* thresholds = nullptr,
                                     const RuleSignatures* signatures = nullptr);

EvalReport evaluate_predictions(std::span<const PredictionBlock> blocks,
                                TiePolicy policy, std::uint64_t seed);

// The file-based stages behind the command line tool. Each stage reads the
// artifacts of earlier stages from the paths in the config and raises
// MissingArtifact naming the stage that produces a missing file.
class Pipeline {
 public:
  explicit Pipeline(Config config);

  const Config& config() const noexcept { return config_; }

  RuleSet mine();
  RuleSignatures calc_sims();
  ThresholdTable search();
  std::vector<PredictionBlock> apply();
  EvalReport eval();

 private:
  const Dataset& dataset();
  RuleSet load_rules();
  RuleSignatures load_checked_signatures(const RuleSet& rules);
  GroundingLimits limits() const;
  unsigned threads() const;

  Config config_;
  std::optional<Dataset> dataset_;
};

}  // namespace kgr
