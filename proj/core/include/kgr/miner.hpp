#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/inference.hpp"
#include "kgr/rule.hpp"

namespace kgr {

// One walked edge. `forward` is true when the walk entered the edge at the
// triple's head and left at its tail.
struct PathEdge {
  Triple triple;
  bool forward = true;

  EntityId from() const noexcept { return forward ? triple.head : triple.tail; }
  EntityId to() const noexcept { return forward ? triple.tail : triple.head; }
};

// An anchor triple plus a walk that starts at one of its ends.
struct GroundPath {
  Triple anchor;
  bool from_head = true;  // walk starts at anchor.head
  std::vector<PathEdge> edges;

  EntityId start() const noexcept { return from_head ? anchor.head : anchor.tail; }
  EntityId other() const noexcept { return from_head ? anchor.tail : anchor.head; }
  std::size_t length() const noexcept { return edges.size(); }
  // The walk returned to the anchor end it did not start from.
  bool cyclic() const noexcept {
    return !edges.empty() && edges.back().to() == other();
  }
  // Consecutive edges share an entity and no edge, anchor included, repeats.
  bool valid() const;
};

struct WalkOptions {
  bool reflexive = false;  // allow triples r(c,c) as anchor or edge
  unsigned max_attempts = 32;
};

// Random walk of `length` edges from a uniformly drawn anchor, starting at
// its head or tail by coin flip and choosing uniformly among unused incident
// edges in either direction. Dead ends restart with a new anchor; nullopt
// after `max_attempts` failures.
std::optional<GroundPath> sample_path(const KnowledgeGraph& graph,
                                      std::size_t length, std::mt19937_64& rng,
                                      const WalkOptions& options = {});

// Single walk from a fixed anchor end; nullopt on a dead end.
std::optional<GroundPath> sample_path_from(const KnowledgeGraph& graph,
                                           const Triple& anchor, bool from_head,
                                           std::size_t length,
                                           std::mt19937_64& rng,
                                           const WalkOptions& options = {});

// Cyclic paths give the C rule and both AC1 rules; acyclic paths give the
// AC2 rule and the AC1 rule ending in the path's last entity. Rules are
// returned in canonical form. Throws ContractViolation for an empty path.
std::vector<Rule> generalize(const GroundPath& path);

struct MinerConfig {
  std::size_t cyclic_max_length = 3;
  std::size_t acyclic_max_length = 1;
  // Number of sampled paths; 0 switches to the wall-clock budget.
  std::size_t paths = 20'000;
  std::chrono::duration<double> budget{10.0};
  std::size_t chunk_size = 500;
  std::uint64_t seed = 42;
  std::uint64_t min_predicted = 2;
  double min_confidence = 0.0001;
  WalkOptions walk;
  GroundingLimits limits;
  unsigned threads = 1;
};

// Samples paths, generalizes, deduplicates by structure and keeps rules
// meeting the support and confidence minima. With a fixed path count the
// result depends only on the graph and the seed. Rules are ordered by head
// relation, then descending confidence, then structure.
std::vector<Rule> mine(const KnowledgeGraph& train, const MinerConfig& config);

}  // namespace kgr
