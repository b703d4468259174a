#include "kgr/aggregation.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

namespace kgr {

std::string_view to_string(Aggregation a) noexcept {
  switch (a) {
    case Aggregation::kMaximum:
      return "max";
    case Aggregation::kNoisyOr:
      return "noisyor";
    case Aggregation::kNonRedundantNoisyOr:
      return "nrno";
    case Aggregation::kValidationSelected:
      return "vs";
  }
  return "?";
}

bool parse_aggregation(std::string_view text, Aggregation& out) noexcept {
  for (Aggregation a : {Aggregation::kMaximum, Aggregation::kNoisyOr,
                        Aggregation::kNonRedundantNoisyOr,
                        Aggregation::kValidationSelected}) {
    if (text == to_string(a)) {
      out = a;
      return true;
    }
  }
  return false;
}

double noisy_or(std::span<const double> confidences) noexcept {
  if (confidences.size() == 1) return confidences.front();
  double miss = 1.0;
  for (double c : confidences) miss *= 1.0 - c;
  return 1.0 - miss;
}

namespace {

// Calls fn(entity, span of that entity's firings) per entity.
template <typename Fn>
void for_each_entity(std::span<const Firing> firings, Fn&& fn) {
  std::size_t i = 0;
  while (i < firings.size()) {
    std::size_t j = i;
    while (j < firings.size() && firings[j].entity == firings[i].entity) ++j;
    fn(firings[i].entity, firings.subspan(i, j - i));
    i = j;
  }
}

void order_by_score(std::vector<RankedCandidate>& entries, std::size_t k) {
  auto better = [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entity < b.entity;
  };
  if (entries.size() > k) {
    std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(k),
                      entries.end(), better);
    entries.resize(k);
  } else {
    std::sort(entries.begin(), entries.end(), better);
  }
}

}  // namespace

CandidateRanking rank_maximum(std::span<const Firing> firings, std::size_t k) {
  struct Row {
    EntityId entity;
    std::vector<double> descending;
  };
  std::vector<Row> rows;
  for_each_entity(firings, [&](EntityId e, std::span<const Firing> fs) {
    Row row{e, {}};
    row.descending.reserve(fs.size());
    for (const Firing& f : fs) row.descending.push_back(f.confidence);
    std::sort(row.descending.begin(), row.descending.end(), std::greater<>());
    rows.push_back(std::move(row));
  });
  auto better = [](const Row& a, const Row& b) {
    // A longer sequence beats its own prefix.
    if (a.descending != b.descending) {
      return std::lexicographical_compare(b.descending.begin(), b.descending.end(),
                                          a.descending.begin(), a.descending.end());
    }
    return a.entity < b.entity;
  };
  const std::size_t keep = std::min(k, rows.size());
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(keep),
                    rows.end(), better);

  CandidateRanking out{Aggregation::kMaximum, k, {}};
  out.entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.entries.push_back({rows[i].entity, rows[i].descending.front()});
  }
  return out;
}

CandidateRanking rank_noisy_or(std::span<const Firing> firings, std::size_t k) {
  CandidateRanking out{Aggregation::kNoisyOr, k, {}};
  std::vector<double> confs;
  for_each_entity(firings, [&](EntityId e, std::span<const Firing> fs) {
    confs.clear();
    for (const Firing& f : fs) confs.push_back(f.confidence);
    out.entries.push_back({e, noisy_or(confs)});
  });
  order_by_score(out.entries, k);
  return out;
}

CandidateRanking rank_non_redundant(std::span<const Firing> firings,
                                    std::span<const std::uint32_t> cluster_of,
                                    std::size_t k) {
  CandidateRanking out{Aggregation::kNonRedundantNoisyOr, k, {}};
  std::vector<std::pair<std::uint32_t, double>> best;  // (cluster, max)
  std::vector<double> maxima;
  for_each_entity(firings, [&](EntityId e, std::span<const Firing> fs) {
    best.clear();
    for (const Firing& f : fs) best.emplace_back(cluster_of[f.rule], f.confidence);
    std::sort(best.begin(), best.end());
    maxima.clear();
    for (std::size_t i = 0; i < best.size(); ++i) {
      if (i + 1 < best.size() && best[i + 1].first == best[i].first) continue;
      maxima.push_back(best[i].second);  // last of a run holds the maximum
    }
    out.entries.push_back({e, noisy_or(maxima)});
  });
  order_by_score(out.entries, k);
  return out;
}

namespace {

std::vector<Firing> firings_of(std::span<const EntityConfidences> rows) {
  std::vector<Firing> out;
  for (const auto& row : rows) {
    std::uint32_t r = 0;
    for (double c : row.confidences) out.push_back({row.entity, r++, c});
  }
  std::sort(out.begin(), out.end(), [](const Firing& a, const Firing& b) {
    return std::tie(a.entity, a.rule) < std::tie(b.entity, b.rule);
  });
  return out;
}

}  // namespace

CandidateRanking aggregate_max(std::span<const EntityConfidences> firings,
                               std::size_t k) {
  return rank_maximum(firings_of(firings), k);
}

CandidateRanking aggregate_noisy_or(std::span<const EntityConfidences> firings,
                                    std::size_t k) {
  return rank_noisy_or(firings_of(firings), k);
}

CandidateRanking aggregate_nrno(std::span<const EntityClusterConfidences> firings,
                                std::size_t k) {
  // Give every (entity, cluster) list its own pseudo rule ids so clusters
  // stay separate across entities.
  std::vector<Firing> flat;
  std::vector<std::uint32_t> cluster_of;
  for (const auto& row : firings) {
    for (std::size_t c = 0; c < row.clusters.size(); ++c) {
      for (double conf : row.clusters[c]) {
        const auto rule = static_cast<std::uint32_t>(cluster_of.size());
        cluster_of.push_back(static_cast<std::uint32_t>(c));
        flat.push_back({row.entity, rule, conf});
      }
    }
  }
  std::stable_sort(flat.begin(), flat.end(), [](const Firing& a, const Firing& b) {
    return a.entity < b.entity;
  });
  return rank_non_redundant(flat, cluster_of, k);
}

std::vector<Firing> collect_firings(const RuleSet& rules,
                                    std::span<const std::uint32_t> group,
                                    const PredictionTask& task,
                                    const KnowledgeGraph& graph,
                                    const GroundingLimits& limits) {
  std::vector<Firing> out;
  for (std::size_t pos = 0; pos < group.size(); ++pos) {
    const Rule& rule = rules[group[pos]];
    const CandidateSet found =
        candidates(rule, task, graph, limits, rules.indexing());
    for (EntityId e : found.entities) {
      if (std::binary_search(task.filter.begin(), task.filter.end(), e)) continue;
      out.push_back({e, static_cast<std::uint32_t>(pos), rule.confidence()});
    }
  }
  std::sort(out.begin(), out.end(), [](const Firing& a, const Firing& b) {
    return std::tie(a.entity, a.rule) < std::tie(b.entity, b.rule);
  });
  return out;
}

Aggregation select_vs(std::optional<double> maximum_mrr,
                      std::optional<double> noisy_or_mrr) noexcept {
  if (!maximum_mrr || !noisy_or_mrr) return Aggregation::kMaximum;
  return *noisy_or_mrr > *maximum_mrr ? Aggregation::kNoisyOr
                                      : Aggregation::kMaximum;
}

std::map<RelationDirection, Aggregation> select_vs(
    const std::map<RelationDirection, StrategyScores>& validation) {
  std::map<RelationDirection, Aggregation> out;
  for (const auto& [key, scores] : validation) {
    out[key] = select_vs(scores.maximum_mrr, scores.noisy_or_mrr);
  }
  return out;
}

}  // namespace kgr
