#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kgr/clustering.hpp"
#include "kgr/inference.hpp"
#include "kgr/ruleset.hpp"

namespace kgr {

enum class Aggregation : std::uint8_t {
  kMaximum,
  kNoisyOr,
  kNonRedundantNoisyOr,
  kValidationSelected,  // per relation and direction: Maximum or Noisy-OR
};

std::string_view to_string(Aggregation a) noexcept;
bool parse_aggregation(std::string_view text, Aggregation& out) noexcept;

// One rule proposing one entity. `rule` is the rule's position inside its
// (relation, direction) group.
struct Firing {
  EntityId entity = 0;
  std::uint32_t rule = 0;
  double confidence = 0.0;
};

struct RankedCandidate {
  EntityId entity = 0;
  double score = 0.0;
  friend bool operator==(const RankedCandidate&, const RankedCandidate&) = default;
};

// Scores are non-increasing. Equal scores are ordered by ascending entity
// id, except under Maximum where the remaining confidences decide first.
struct CandidateRanking {
  Aggregation strategy = Aggregation::kMaximum;
  std::size_t k = 0;
  std::vector<RankedCandidate> entries;
};

inline constexpr std::size_t kDefaultTopK = 100;

// 1 - prod(1 - c). A single confidence is returned unchanged.
double noisy_or(std::span<const double> confidences) noexcept;

// Firings must be sorted by (entity, rule) with no duplicate pair.
CandidateRanking rank_maximum(std::span<const Firing> firings, std::size_t k);
CandidateRanking rank_noisy_or(std::span<const Firing> firings, std::size_t k);
// `cluster_of[rule]` maps group positions to clusters; within a cluster the
// best confidence counts, across clusters Noisy-OR combines them.
CandidateRanking rank_non_redundant(std::span<const Firing> firings,
                                    std::span<const std::uint32_t> cluster_of,
                                    std::size_t k);

// Convenience forms taking per-entity confidence lists.
struct EntityConfidences {
  EntityId entity = 0;
  std::vector<double> confidences;
};
struct EntityClusterConfidences {
  EntityId entity = 0;
  // one confidence list per cluster that fired for the entity
  std::vector<std::vector<double>> clusters;
};
CandidateRanking aggregate_max(std::span<const EntityConfidences> firings,
                               std::size_t k = kDefaultTopK);
CandidateRanking aggregate_noisy_or(std::span<const EntityConfidences> firings,
                                    std::size_t k = kDefaultTopK);
CandidateRanking aggregate_nrno(std::span<const EntityClusterConfidences> firings,
                                std::size_t k = kDefaultTopK);

// Applies every rule of the group to the task and returns the firings for
// entities outside the task filter, sorted by (entity, rule).
std::vector<Firing> collect_firings(const RuleSet& rules,
                                    std::span<const std::uint32_t> group,
                                    const PredictionTask& task,
                                    const KnowledgeGraph& graph,
                                    const GroundingLimits& limits = {});

// Validation-selected strategy for one (relation, direction): the one with
// the higher validation MRR, Maximum on ties or when the pair never occurs
// in validation.
Aggregation select_vs(std::optional<double> maximum_mrr,
                      std::optional<double> noisy_or_mrr) noexcept;

struct StrategyScores {
  std::optional<double> maximum_mrr;
  std::optional<double> noisy_or_mrr;
};
std::map<RelationDirection, Aggregation> select_vs(
    const std::map<RelationDirection, StrategyScores>& validation);

}  // namespace kgr
