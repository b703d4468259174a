#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "kgr/ruleset.hpp"
#include "kgr/similarity.hpp"

namespace kgr {

// Similarity cutoffs per unordered rule-type pair, in the order
// C/C, C/AC1, C/AC2, AC1/AC2, AC1/AC1, AC2/AC2.
struct ThresholdVector {
  std::array<double, 6> values{};

  static ThresholdVector uniform(double t) noexcept {
    ThresholdVector v;
    v.values.fill(t);
    return v;
  }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  bool valid() const noexcept;

  friend auto operator<=>(const ThresholdVector&,
                          const ThresholdVector&) = default;
};

// Position of the unordered type pair in ThresholdVector.
std::size_t type_combo(RuleType a, RuleType b) noexcept;
inline std::size_t type_combo(const Rule& a, const Rule& b) noexcept {
  return type_combo(a.type(), b.type());
}

enum class AggregationMode : std::uint8_t { kMaximum, kNoisyOr, kMixed };

// All zeros clusters everything together (pure Maximum); all ones leaves
// every rule alone (pure Noisy-OR).
AggregationMode degenerate_mode(const ThresholdVector& t) noexcept;

// A partition of one (relation, direction) group. Cluster members are
// positions into the similarity matrix, ascending; clusters are ordered by
// their smallest member.
struct ClusterModel {
  RelationDirection key;
  ThresholdVector thresholds;
  std::vector<std::vector<std::uint32_t>> clusters;

  // cluster index for every matrix position
  std::vector<std::uint32_t> assignment() const;
};

// Connected components of the graph with an edge (i, j) whenever
// sim(i, j) > thresholds[type_combo(i, j)]. The all-zeros vector yields a
// single cluster.
ClusterModel cluster(const RuleSet& rules, const SimilarityMatrix& sims,
                     const ThresholdVector& thresholds);

// One line per rule: relation<TAB>direction<TAB>cluster<TAB>rule index.
void write_clusters(std::ostream& out, const ClusterModel& model,
                    const SimilarityMatrix& sims, const Vocabulary& vocabulary);

}  // namespace kgr
