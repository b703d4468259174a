#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/rule.hpp"
#include "kgr/ruleset.hpp"

namespace kgr {

// Bounds the work spent grounding one rule for one query entity. A result
// computed after the bound tripped is flagged approximate.
struct GroundingLimits {
  std::size_t max_groundings = 100'000;
};

struct InferredSet {
  std::vector<Triple> triples;  // sorted, unique
  bool approximate = false;
};

// All head triples the rule derives from `graph`.
InferredSet infer_heads(const Rule& rule, const KnowledgeGraph& graph,
                        const GroundingLimits& limits = {});

struct RuleConfidence {
  RuleStats stats;  // predicted = |inferred|, correct = |inferred & train|
  double value = 0.0;
  bool approximate = false;
};

// correct / predicted over `train`; nullopt when the rule infers nothing.
std::optional<RuleConfidence> confidence(const Rule& rule,
                                         const KnowledgeGraph& train,
                                         const GroundingLimits& limits = {});

// A query (known, relation, ?) or (?, relation, known). `filter` holds
// other known answers of the slot, sorted; it never contains `target`.
struct PredictionTask {
  RelationId relation = 0;
  Direction direction = Direction::kTail;
  EntityId known = 0;
  EntityId target = 0;
  std::vector<EntityId> filter;

  // The triple the task asks about, with the target in the open slot.
  Triple triple() const noexcept;
};

struct CandidateSet {
  std::vector<EntityId> entities;  // sorted, unique
  bool approximate = false;
};

// Entities e such that the task triple with e in the open slot belongs to
// infer_heads(rule). Grounds outward from the known entity instead of
// materializing the inferred set. Throws ContractViolation when the rule
// predicts another relation or is not indexed for the task direction.
CandidateSet candidates(const Rule& rule, const PredictionTask& task,
                        const KnowledgeGraph& graph,
                        const GroundingLimits& limits = {},
                        AcyclicIndexing indexing = AcyclicIndexing::kBothSlots);

}  // namespace kgr
