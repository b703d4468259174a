#include "kgr/inference.hpp"

#include <algorithm>

#include "kgr/error.hpp"

namespace kgr {

namespace {

void sort_unique(std::vector<EntityId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

struct Budget {
  std::size_t remaining;
  bool tripped = false;

  // Charges `n` expansions; false once the budget is exhausted.
  bool charge(std::size_t n) {
    if (n > remaining) {
      remaining = 0;
      tripped = true;
      return false;
    }
    remaining -= n;
    return true;
  }
};

// Entities reachable from `frontier` by following `steps` in order. With
// `backward`, the steps are walked from last to first with each hop
// reversed. Frontiers are deduplicated level by level, which is exact
// because only the existence of a path matters.
std::vector<EntityId> reach(const KnowledgeGraph& graph,
                            std::vector<EntityId> frontier,
                            std::span<const ChainStep> steps, bool backward,
                            Budget& budget) {
  const std::size_t n = steps.size();
  std::vector<EntityId> next;
  for (std::size_t i = 0; i < n && !frontier.empty(); ++i) {
    const ChainStep& s = backward ? steps[n - 1 - i] : steps[i];
    const bool forward = backward ? !s.forward : s.forward;
    next.clear();
    for (EntityId e : frontier) {
      auto hop = graph.step(e, s.relation, forward);
      if (!budget.charge(hop.size())) break;
      next.insert(next.end(), hop.begin(), hop.end());
    }
    sort_unique(next);
    frontier.swap(next);
    if (budget.tripped) break;
  }
  return frontier;
}

// Entities that start a complete grounding of the chain when its terminal
// variable is unbound.
std::vector<EntityId> open_chain_sources(const KnowledgeGraph& graph,
                                         std::span<const ChainStep> steps,
                                         Budget& budget) {
  const ChainStep& last = steps.back();
  std::vector<EntityId> sources;
  auto edges = graph.triples_of(last.relation);
  budget.charge(edges.size());
  sources.reserve(edges.size());
  for (const Triple& t : edges) sources.push_back(last.forward ? t.head : t.tail);
  sort_unique(sources);
  return reach(graph, std::move(sources), steps.first(steps.size() - 1),
               /*backward=*/true, budget);
}

// Variable-slot entities of an acyclic rule.
std::vector<EntityId> acyclic_variable_set(const Rule& rule,
                                           const KnowledgeGraph& graph,
                                           Budget& budget) {
  if (rule.type() == RuleType::kAC1) {
    return reach(graph, {*rule.terminal_constant()}, rule.chain(),
                 /*backward=*/true, budget);
  }
  return open_chain_sources(graph, rule.chain(), budget);
}

// Whether the chain can be grounded starting from `entity`.
bool acyclic_fires(const Rule& rule, const KnowledgeGraph& graph,
                   EntityId entity, Budget& budget) {
  auto ends = reach(graph, {entity}, rule.chain(), /*backward=*/false, budget);
  if (rule.type() == RuleType::kAC1) {
    return std::binary_search(ends.begin(), ends.end(),
                              *rule.terminal_constant());
  }
  return !ends.empty();
}

Triple place(RelationId relation, Direction slot_of_a, EntityId a,
             EntityId b) noexcept {
  return slot_of_a == Direction::kHead ? Triple{a, relation, b}
                                       : Triple{b, relation, a};
}

}  // namespace

Triple PredictionTask::triple() const noexcept {
  return direction == Direction::kTail ? Triple{known, relation, target}
                                       : Triple{target, relation, known};
}

InferredSet infer_heads(const Rule& rule, const KnowledgeGraph& graph,
                        const GroundingLimits& limits) {
  InferredSet out;
  if (graph.empty()) return out;
  const Direction origin = rule.chain_origin();
  const auto steps = rule.chain();

  if (rule.type() == RuleType::kC) {
    std::vector<EntityId> starts;
    const ChainStep& first = steps.front();
    for (const Triple& t : graph.triples_of(first.relation)) {
      starts.push_back(first.forward ? t.head : t.tail);
    }
    sort_unique(starts);
    for (EntityId x : starts) {
      Budget budget{limits.max_groundings};
      for (EntityId y : reach(graph, {x}, steps, false, budget)) {
        out.triples.push_back(place(rule.relation(), origin, x, y));
      }
      out.approximate |= budget.tripped;
    }
  } else {
    Budget budget{limits.max_groundings};
    const EntityId c = *rule.head_constant();
    for (EntityId x : acyclic_variable_set(rule, graph, budget)) {
      out.triples.push_back(place(rule.relation(), origin, x, c));
    }
    out.approximate = budget.tripped;
  }
  std::sort(out.triples.begin(), out.triples.end());
  out.triples.erase(std::unique(out.triples.begin(), out.triples.end()),
                    out.triples.end());
  return out;
}

std::optional<RuleConfidence> confidence(const Rule& rule,
                                         const KnowledgeGraph& train,
                                         const GroundingLimits& limits) {
  const InferredSet inferred = infer_heads(rule, train, limits);
  if (inferred.triples.empty()) return std::nullopt;
  RuleConfidence c;
  c.approximate = inferred.approximate;
  c.stats.predicted = inferred.triples.size();
  for (const Triple& t : inferred.triples) {
    if (train.contains(t)) ++c.stats.correct;
  }
  c.value = static_cast<double>(c.stats.correct) /
            static_cast<double>(c.stats.predicted);
  return c;
}

CandidateSet candidates(const Rule& rule, const PredictionTask& task,
                        const KnowledgeGraph& graph,
                        const GroundingLimits& limits,
                        AcyclicIndexing indexing) {
  if (rule.relation() != task.relation) {
    throw ContractViolation("rule head relation differs from task relation");
  }
  if (!RuleSet::answers(rule, task.direction, indexing)) {
    throw ContractViolation("rule is not indexed for the task direction");
  }

  CandidateSet out;
  if (graph.empty()) return out;
  Budget budget{limits.max_groundings};
  const Direction origin = rule.chain_origin();

  if (rule.type() == RuleType::kC) {
    // Known entity sits in the origin slot: walk the chain forward.
    const bool from_origin = task.direction != origin;
    out.entities = reach(graph, {task.known}, rule.chain(), !from_origin, budget);
  } else if (task.direction == origin) {
    if (task.known == *rule.head_constant()) {
      out.entities = acyclic_variable_set(rule, graph, budget);
    }
  } else if (acyclic_fires(rule, graph, task.known, budget)) {
    out.entities = {*rule.head_constant()};
  }
  out.approximate = budget.tripped;
  return out;
}

}  // namespace kgr
