#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "kgr/aggregation.hpp"
#include "kgr/graph.hpp"

namespace kgr {

// How the target is ranked inside a group of candidates sharing its score.
enum class TiePolicy : std::uint8_t { kTop, kBottom, kAverage, kOrdinal, kRandom };

inline constexpr std::array<TiePolicy, 5> kAllTiePolicies{
    TiePolicy::kTop, TiePolicy::kBottom, TiePolicy::kAverage,
    TiePolicy::kOrdinal, TiePolicy::kRandom};

std::string_view to_string(TiePolicy p) noexcept;
bool parse_tie_policy(std::string_view text, TiePolicy& out) noexcept;

// Rank of a target missing from the candidate list.
inline constexpr double kUnranked = std::numeric_limits<double>::infinity();

// 1-based rank of `target` in an already filtered ranking.
double rank_of(EntityId target, std::span<const RankedCandidate> ranking,
               TiePolicy policy, std::mt19937_64& rng);

// Mean of 1/rank; unranked targets contribute 0. nullopt for no tasks.
std::optional<double> mrr(std::span<const double> ranks);
// Fraction of ranks <= k. nullopt for no tasks.
std::optional<double> hits_at(std::span<const double> ranks, double k);

// Known answers for the open slot of the task triple across `splits`,
// excluding `target`. Sorted, unique.
std::vector<EntityId> build_filter(RelationId relation, Direction direction,
                                   EntityId known, EntityId target,
                                   std::span<const KnowledgeGraph* const> splits);

// Two tasks per triple of `queries` (tail then head), filtered against
// `filter_splits`.
std::vector<PredictionTask> make_tasks(
    const KnowledgeGraph& queries,
    std::span<const KnowledgeGraph* const> filter_splits);

struct Metrics {
  std::size_t tasks = 0;
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
};

Metrics summarize(std::span<const double> ranks);

struct EvalReport {
  TiePolicy policy = TiePolicy::kAverage;  // policy of the breakdowns
  std::size_t tasks = 0;
  std::map<TiePolicy, Metrics> overall;
  std::map<Direction, Metrics> by_direction;
  std::map<RelationDirection, Metrics> by_relation;
};

struct RankedTask {
  RelationId relation = 0;
  Direction direction = Direction::kTail;
  EntityId target = 0;
  std::span<const RankedCandidate> ranking;
};

// Ranks every task under every policy. The RANDOM policy draws from a
// stream seeded by (seed, task index), so the result does not depend on
// evaluation order.
EvalReport evaluate(std::span<const RankedTask> tasks, TiePolicy policy,
                    std::uint64_t seed);

// Aligned table followed by key=value lines.
void write_report(std::ostream& out, const EvalReport& report,
                  const Vocabulary& vocabulary);

}  // namespace kgr
