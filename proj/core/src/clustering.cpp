#include "kgr/clustering.hpp"

#include <algorithm>
#include <deque>
#include <ostream>

namespace kgr {

bool ThresholdVector::valid() const noexcept {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return v >= 0.0 && v <= 1.0; });
}

std::size_t type_combo(RuleType a, RuleType b) noexcept {
  if (a > b) std::swap(a, b);
  // rows: a, columns: b (b >= a)
  static constexpr std::size_t kTable[3][3] = {
      {0, 1, 2},  // C/C, C/AC1, C/AC2
      {1, 4, 3},  // AC1/AC1, AC1/AC2
      {2, 3, 5},  // AC2/AC2
  };
  return kTable[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

AggregationMode degenerate_mode(const ThresholdVector& t) noexcept {
  const auto& v = t.values;
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
    return AggregationMode::kMaximum;
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 1.0; })) {
    return AggregationMode::kNoisyOr;
  }
  return AggregationMode::kMixed;
}

std::vector<std::uint32_t> ClusterModel::assignment() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  std::vector<std::uint32_t> out(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::uint32_t member : clusters[c]) {
      out[member] = static_cast<std::uint32_t>(c);
    }
  }
  return out;
}

ClusterModel cluster(const RuleSet& rules, const SimilarityMatrix& sims,
                     const ThresholdVector& thresholds) {
  ClusterModel model;
  model.key = sims.key();
  model.thresholds = thresholds;
  const std::size_t n = sims.size();
  if (n == 0) return model;

  if (degenerate_mode(thresholds) == AggregationMode::kMaximum) {
    std::vector<std::uint32_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);
    model.clusters.push_back(std::move(all));
    return model;
  }

  std::vector<RuleType> types(n);
  for (std::size_t i = 0; i < n; ++i) types[i] = rules[sims.members()[i]].type();

  std::vector<bool> visited(n, false);
  std::deque<std::uint32_t> queue;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (visited[seed]) continue;
    std::vector<std::uint32_t> members;
    visited[seed] = true;
    queue.push_back(static_cast<std::uint32_t>(seed));
    while (!queue.empty()) {
      const std::uint32_t j = queue.front();
      queue.pop_front();
      members.push_back(j);
      for (std::size_t k = 0; k < n; ++k) {
        if (visited[k]) continue;
        if (sims.at(j, k) > thresholds[type_combo(types[j], types[k])]) {
          visited[k] = true;
          queue.push_back(static_cast<std::uint32_t>(k));
        }
      }
    }
    std::sort(members.begin(), members.end());
    model.clusters.push_back(std::move(members));
  }
  return model;
}

void write_clusters(std::ostream& out, const ClusterModel& model,
                    const SimilarityMatrix& sims,
                    const Vocabulary& vocabulary) {
  const auto& relation = vocabulary.relations.name(model.key.relation);
  for (std::size_t c = 0; c < model.clusters.size(); ++c) {
    for (std::uint32_t member : model.clusters[c]) {
      out << relation << '\t' << to_string(model.key.direction) << '\t' << c
          << '\t' << sims.members()[member] << '\n';
    }
  }
}

}  // namespace kgr
