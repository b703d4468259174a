#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgr/types.hpp"
#include "kgr/vocabulary.hpp"

namespace kgr {

class Term {
 public:
  static constexpr Term variable(char name) noexcept {
    return Term(Kind::kVariable, static_cast<std::uint32_t>(name));
  }
  static constexpr Term constant(EntityId entity) noexcept {
    return Term(Kind::kConstant, entity);
  }

  constexpr bool is_variable() const noexcept {
    return kind_ == Kind::kVariable;
  }
  constexpr bool is_constant() const noexcept {
    return kind_ == Kind::kConstant;
  }
  constexpr char name() const noexcept { return static_cast<char>(value_); }
  constexpr EntityId entity() const noexcept { return value_; }

  friend constexpr bool operator==(const Term&, const Term&) = default;

 private:
  enum class Kind : std::uint8_t { kVariable, kConstant };
  constexpr Term(Kind kind, std::uint32_t value) : kind_(kind), value_(value) {}

  Kind kind_;
  std::uint32_t value_;
};

// rel(first, second), meaning the triple (first, rel, second).
struct Atom {
  RelationId relation = 0;
  Term first = Term::variable('X');
  Term second = Term::variable('Y');

  const Term& slot(Direction d) const noexcept {
    return d == Direction::kHead ? first : second;
  }
  friend bool operator==(const Atom&, const Atom&) = default;
};

enum class RuleType : std::uint8_t { kC = 0, kAC1 = 1, kAC2 = 2 };

std::string_view to_string(RuleType type) noexcept;

struct RuleStats {
  std::uint64_t predicted = 0;
  std::uint64_t correct = 0;
  friend bool operator==(const RuleStats&, const RuleStats&) = default;
};

// One hop of a body chain: from the current entity follow `relation`
// forward (current is the triple head) or backward (current is the tail).
struct ChainStep {
  RelationId relation = 0;
  bool forward = true;
  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

// A Horn rule with a single head atom and a body that forms a chain.
//
//   C    h(X,Y) <= chain from X to Y through fresh variables
//   AC1  h(c,X) <= chain from X ending in a constant
//   AC2  h(c,X) <= chain from X ending in a variable that occurs once
//
// Term order inside each atom is kept exactly as written; the chain view is
// derived from it and drives grounding.
class Rule {
 public:
  // Classifies the structure; throws ClassificationError when it matches no
  // rule type.
  Rule(Atom head, std::vector<Atom> body);

  const Atom& head() const noexcept { return head_; }
  std::span<const Atom> body() const noexcept { return body_; }
  RuleType type() const noexcept { return type_; }
  RelationId relation() const noexcept { return head_.relation; }
  std::size_t length() const noexcept { return body_.size(); }

  double confidence() const noexcept { return confidence_; }
  const std::optional<RuleStats>& stats() const noexcept { return stats_; }
  void set_confidence(double confidence) noexcept { confidence_ = confidence; }
  // Stores the counts and sets confidence to correct / predicted.
  void set_stats(RuleStats stats);
  void set_stats(RuleStats stats, double confidence);

  // Head slot holding the variable the chain starts from.
  Direction chain_origin() const noexcept { return origin_; }
  // Body hops ordered from the origin variable outward.
  std::span<const ChainStep> chain() const noexcept { return chain_; }
  // For AC rules: the constant in the head.
  std::optional<EntityId> head_constant() const noexcept;
  // For AC1 rules: the constant the chain must end at.
  std::optional<EntityId> terminal_constant() const noexcept {
    return terminal_;
  }

  // Same rule modulo variable names and body order.
  Rule canonical() const;
  // Id-based string identifying the canonical structure.
  std::string structure_key() const;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head_ == b.head_ && a.body_ == b.body_;
  }

 private:
  Atom head_;
  std::vector<Atom> body_;
  RuleType type_ = RuleType::kC;
  double confidence_ = 0.0;
  std::optional<RuleStats> stats_;

  Direction origin_ = Direction::kHead;
  std::vector<ChainStep> chain_;
  std::optional<EntityId> terminal_;
};

// Grammar: `rel(a,b) <= rel(a,b), rel(a,b)`. Single upper-case letters are
// variables; every other token is an entity name. Unknown names raise
// ResolutionError.
Rule parse_rule(std::string_view text, const Vocabulary& vocabulary);
// As above, but unknown entity and relation names are added.
Rule parse_rule_extending(std::string_view text, Vocabulary& vocabulary);

std::string serialize_rule(const Rule& rule, const Vocabulary& vocabulary);

// Shortest decimal that reads back to the same double.
std::string format_double(double value);

}  // namespace kgr
