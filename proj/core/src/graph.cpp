#include "kgr/graph.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "kgr/error.hpp"

namespace kgr {

namespace {

template <typename Key>
std::vector<std::size_t> offsets_by(std::span<const Triple> sorted,
                                    std::size_t count, Key key) {
  std::vector<std::size_t> offsets(count + 1, 0);
  for (const Triple& t : sorted) ++offsets[key(t) + 1];
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return offsets;
}

std::span<const EntityId> equal_block(std::span<const EntityId> keys,
                                      std::span<const EntityId> values,
                                      EntityId key) {
  auto [lo, hi] = std::equal_range(keys.begin(), keys.end(), key);
  const auto first = static_cast<std::size_t>(lo - keys.begin());
  return values.subspan(first, static_cast<std::size_t>(hi - lo));
}

}  // namespace

std::string_view to_string(Split s) noexcept {
  switch (s) {
    case Split::kTrain:
      return "train";
    case Split::kValid:
      return "valid";
    case Split::kTest:
      return "test";
  }
  return "?";
}

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const Vocabulary> vocabulary,
                               std::vector<Triple> triples, Split split)
    : vocabulary_(std::move(vocabulary)), split_(split) {
  if (!vocabulary_) throw ContractViolation("graph requires a vocabulary");

  std::size_t n_entities = vocabulary_->entities.size();
  std::size_t n_relations = vocabulary_->relations.size();
  for (const Triple& t : triples) {
    if (t.head >= n_entities || t.tail >= n_entities ||
        t.relation >= n_relations) {
      throw DomainError("triple references an id outside the vocabulary");
    }
  }

  auto rht = [](const Triple& a, const Triple& b) {
    return std::tie(a.relation, a.head, a.tail) <
           std::tie(b.relation, b.head, b.tail);
  };
  std::sort(triples.begin(), triples.end(), rht);
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  by_relation_ = std::move(triples);

  relation_offsets_ = offsets_by(by_relation_, n_relations,
                                 [](const Triple& t) { return t.relation; });
  rht_heads_.reserve(by_relation_.size());
  rht_tails_.reserve(by_relation_.size());
  for (const Triple& t : by_relation_) {
    rht_heads_.push_back(t.head);
    rht_tails_.push_back(t.tail);
  }

  std::vector<Triple> rth = by_relation_;
  std::sort(rth.begin(), rth.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.relation, a.tail, a.head) <
           std::tie(b.relation, b.tail, b.head);
  });
  rth_tails_.reserve(rth.size());
  rth_heads_.reserve(rth.size());
  for (const Triple& t : rth) {
    rth_tails_.push_back(t.tail);
    rth_heads_.push_back(t.head);
  }

  by_head_ = by_relation_;
  std::sort(by_head_.begin(), by_head_.end(),
            [](const Triple& a, const Triple& b) {
              return std::tie(a.head, a.relation, a.tail) <
                     std::tie(b.head, b.relation, b.tail);
            });
  by_tail_ = std::move(rth);
  std::stable_sort(by_tail_.begin(), by_tail_.end(),
                   [](const Triple& a, const Triple& b) {
                     return a.tail < b.tail;
                   });
  head_offsets_ =
      offsets_by(by_head_, n_entities, [](const Triple& t) { return t.head; });
  tail_offsets_ =
      offsets_by(by_tail_, n_entities, [](const Triple& t) { return t.tail; });
}

void KnowledgeGraph::check_ids(EntityId entity, RelationId relation) const {
  if (entity >= num_entities()) {
    throw DomainError("unknown entity id " + std::to_string(entity));
  }
  if (relation >= num_relations()) {
    throw DomainError("unknown relation id " + std::to_string(relation));
  }
}

std::size_t KnowledgeGraph::num_entities() const noexcept {
  return vocabulary_ ? vocabulary_->entities.size() : 0;
}

std::size_t KnowledgeGraph::num_relations() const noexcept {
  return vocabulary_ ? vocabulary_->relations.size() : 0;
}

const Vocabulary& KnowledgeGraph::vocabulary() const {
  if (!vocabulary_) throw ContractViolation("graph has no vocabulary");
  return *vocabulary_;
}

std::span<const Triple> KnowledgeGraph::triples_of(
    RelationId relation) const noexcept {
  if (relation + 1 >= relation_offsets_.size()) return {};
  const std::size_t lo = relation_offsets_[relation];
  return std::span<const Triple>(by_relation_)
      .subspan(lo, relation_offsets_[relation + 1] - lo);
}

std::span<const EntityId> KnowledgeGraph::tails_of(EntityId head,
                                                   RelationId relation) const {
  check_ids(head, relation);
  if (relation + 1 >= relation_offsets_.size()) return {};
  const std::size_t lo = relation_offsets_[relation];
  const std::size_t n = relation_offsets_[relation + 1] - lo;
  return equal_block(std::span<const EntityId>(rht_heads_).subspan(lo, n),
                     std::span<const EntityId>(rht_tails_).subspan(lo, n),
                     head);
}

std::span<const EntityId> KnowledgeGraph::heads_of(EntityId tail,
                                                   RelationId relation) const {
  check_ids(tail, relation);
  if (relation + 1 >= relation_offsets_.size()) return {};
  const std::size_t lo = relation_offsets_[relation];
  const std::size_t n = relation_offsets_[relation + 1] - lo;
  return equal_block(std::span<const EntityId>(rth_tails_).subspan(lo, n),
                     std::span<const EntityId>(rth_heads_).subspan(lo, n),
                     tail);
}

bool KnowledgeGraph::contains(const Triple& t) const noexcept {
  if (t.head >= num_entities() || t.relation >= num_relations()) return false;
  if (t.relation + 1 >= relation_offsets_.size()) return false;
  auto tails = tails_of(t.head, t.relation);
  return std::binary_search(tails.begin(), tails.end(), t.tail);
}

std::span<const Triple> KnowledgeGraph::outgoing(
    EntityId entity) const noexcept {
  if (entity + 1 >= head_offsets_.size()) return {};
  const std::size_t lo = head_offsets_[entity];
  return std::span<const Triple>(by_head_).subspan(
      lo, head_offsets_[entity + 1] - lo);
}

std::span<const Triple> KnowledgeGraph::incoming(
    EntityId entity) const noexcept {
  if (entity + 1 >= tail_offsets_.size()) return {};
  const std::size_t lo = tail_offsets_[entity];
  return std::span<const Triple>(by_tail_).subspan(
      lo, tail_offsets_[entity + 1] - lo);
}

std::vector<Triple> read_tsv(std::istream& in, Vocabulary& vocabulary) {
  std::vector<std::array<std::string, 3>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t first = line.find('\t');
    const std::size_t second =
        first == std::string::npos ? first : line.find('\t', first + 1);
    if (second == std::string::npos ||
        line.find('\t', second + 1) != std::string::npos) {
      throw ParseError("expected 3 tab-separated fields", line_no);
    }
    std::array<std::string, 3> fields{line.substr(0, first),
                                      line.substr(first + 1, second - first - 1),
                                      line.substr(second + 1)};
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError("empty field", line_no);
    }
    rows.push_back(std::move(fields));
  }

  std::set<std::string_view> new_entities;
  std::set<std::string_view> new_relations;
  for (const auto& row : rows) {
    for (int i : {0, 2}) {
      if (!vocabulary.entities.find(row[i])) new_entities.insert(row[i]);
    }
    if (!vocabulary.relations.find(row[1])) new_relations.insert(row[1]);
  }
  for (auto name : new_entities) vocabulary.entities.intern(name);
  for (auto name : new_relations) vocabulary.relations.intern(name);

  std::vector<Triple> triples;
  triples.reserve(rows.size());
  for (const auto& row : rows) {
    triples.push_back({*vocabulary.entities.find(row[0]),
                       *vocabulary.relations.find(row[1]),
                       *vocabulary.entities.find(row[2])});
  }
  return triples;
}

namespace {

std::vector<Triple> read_tsv_file(const std::filesystem::path& path,
                                  Vocabulary& vocabulary) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_tsv(in, vocabulary);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace

KnowledgeGraph load_tsv(const std::filesystem::path& path,
                        const std::shared_ptr<Vocabulary>& vocabulary,
                        Split split) {
  auto triples = read_tsv_file(path, *vocabulary);
  return KnowledgeGraph(vocabulary, std::move(triples), split);
}

void write_tsv(std::ostream& out, std::span<const Triple> triples,
               const Vocabulary& vocabulary) {
  for (const Triple& t : triples) {
    out << vocabulary.entities.name(t.head) << '\t'
        << vocabulary.relations.name(t.relation) << '\t'
        << vocabulary.entities.name(t.tail) << '\n';
  }
}

Dataset Dataset::load(const std::filesystem::path& train,
                      const std::filesystem::path& valid,
                      const std::filesystem::path& test) {
  auto vocabulary = std::make_shared<Vocabulary>();
  auto tr = read_tsv_file(train, *vocabulary);
  auto va = read_tsv_file(valid, *vocabulary);
  auto te = read_tsv_file(test, *vocabulary);
  return from_triples(std::move(vocabulary), std::move(tr), std::move(va),
                      std::move(te));
}

Dataset Dataset::from_triples(std::shared_ptr<Vocabulary> vocabulary,
                              std::vector<Triple> train,
                              std::vector<Triple> valid,
                              std::vector<Triple> test) {
  Dataset d;
  d.vocabulary = std::move(vocabulary);
  d.train = KnowledgeGraph(d.vocabulary, std::move(train), Split::kTrain);
  d.valid = KnowledgeGraph(d.vocabulary, std::move(valid), Split::kValid);
  d.test = KnowledgeGraph(d.vocabulary, std::move(test), Split::kTest);
  return d;
}

const KnowledgeGraph& Dataset::split(Split s) const noexcept {
  switch (s) {
    case Split::kValid:
      return valid;
    case Split::kTest:
      return test;
    default:
      return train;
  }
}

}  // namespace kgr
