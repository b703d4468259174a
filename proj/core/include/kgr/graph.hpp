#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "kgr/types.hpp"
#include "kgr/vocabulary.hpp"

namespace kgr {

enum class Split : std::uint8_t { kTrain, kValid, kTest };

std::string_view to_string(Split s) noexcept;

// Immutable triple store. Every index is a sorted array, so all lookups
// return spans in ascending id order and iteration is deterministic.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(std::shared_ptr<const Vocabulary> vocabulary,
                 std::vector<Triple> triples, Split split = Split::kTrain);

  // Objects t with (h, r, t) stored, ascending.
  std::span<const EntityId> tails_of(EntityId head, RelationId relation) const;
  // Subjects h with (h, r, t) stored, ascending.
  std::span<const EntityId> heads_of(EntityId tail, RelationId relation) const;
  // tails_of when `forward`, heads_of otherwise.
  std::span<const EntityId> step(EntityId from, RelationId relation,
                                 bool forward) const {
    return forward ? tails_of(from, relation) : heads_of(from, relation);
  }

  bool contains(const Triple& t) const noexcept;

  // All triples ordered by (relation, head, tail).
  std::span<const Triple> triples() const noexcept { return by_relation_; }
  std::span<const Triple> triples_of(RelationId relation) const noexcept;
  // Triples with the entity as head (resp. tail), ordered by (relation, other).
  std::span<const Triple> outgoing(EntityId entity) const noexcept;
  std::span<const Triple> incoming(EntityId entity) const noexcept;

  std::size_t size() const noexcept { return by_relation_.size(); }
  bool empty() const noexcept { return by_relation_.empty(); }
  Split split() const noexcept { return split_; }
  std::size_t num_entities() const noexcept;
  std::size_t num_relations() const noexcept;
  const Vocabulary& vocabulary() const;
  const std::shared_ptr<const Vocabulary>& vocabulary_ptr() const noexcept {
    return vocabulary_;
  }

 private:
  void check_ids(EntityId entity, RelationId relation) const;

  std::shared_ptr<const Vocabulary> vocabulary_;
  Split split_ = Split::kTrain;

  std::vector<Triple> by_relation_;           // (r, h, t)
  std::vector<std::size_t> relation_offsets_;  // into by_relation_
  std::vector<EntityId> rht_heads_;
  std::vector<EntityId> rht_tails_;
  std::vector<EntityId> rth_tails_;  // (r, t, h) order
  std::vector<EntityId> rth_heads_;
  std::vector<Triple> by_head_;  // (h, r, t)
  std::vector<Triple> by_tail_;  // (t, r, h)
  std::vector<std::size_t> head_offsets_;
  std::vector<std::size_t> tail_offsets_;
};

// Reads `head<TAB>relation<TAB>tail` lines. New names are interned in
// sorted order so the resulting ids do not depend on line order. Blank
// lines are skipped; any other line without exactly three fields raises
// ParseError carrying its line number.
std::vector<Triple> read_tsv(std::istream& in, Vocabulary& vocabulary);

KnowledgeGraph load_tsv(const std::filesystem::path& path,
                        const std::shared_ptr<Vocabulary>& vocabulary,
                        Split split = Split::kTrain);

void write_tsv(std::ostream& out, std::span<const Triple> triples,
               const Vocabulary& vocabulary);

// Train/valid/test splits over one vocabulary. All three files are read
// before any graph is indexed, so every entity is addressable from every
// split.
struct Dataset {
  std::shared_ptr<Vocabulary> vocabulary;
  KnowledgeGraph train;
  KnowledgeGraph valid;
  KnowledgeGraph test;

  static Dataset load(const std::filesystem::path& train,
                      const std::filesystem::path& valid,
                      const std::filesystem::path& test);
  static Dataset from_triples(std::shared_ptr<Vocabulary> vocabulary,
                              std::vector<Triple> train,
                              std::vector<Triple> valid,
                              std::vector<Triple> test);

  const KnowledgeGraph& split(Split s) const noexcept;
};

}  // namespace kgr
