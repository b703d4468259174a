#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "kgr/rule.hpp"

namespace kgr {

// Which query directions an acyclic rule is indexed under. A rule h(c,X)
// always answers the slot of X. Under kBothSlots it also answers the slot
// of c: for the query with X bound, it proposes c when the body holds.
enum class AcyclicIndexing : std::uint8_t { kBothSlots, kVariableSlotOnly };

// Rules grouped by (head relation, predicted direction). Group members are
// indices into rules(), ascending.
class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules,
                   AcyclicIndexing indexing = AcyclicIndexing::kBothSlots);

  std::span<const Rule> rules() const noexcept { return rules_; }
  const Rule& operator[](std::size_t i) const { return rules_.at(i); }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }
  AcyclicIndexing indexing() const noexcept { return indexing_; }

  std::span<const std::uint32_t> group(RelationId relation,
                                       Direction direction) const;
  std::span<const std::uint32_t> group(RelationDirection key) const {
    return group(key.relation, key.direction);
  }
  // Keys of every non-empty group, ascending.
  std::vector<RelationDirection> groups() const;

  // True when `rule` is indexed under `direction` with the given policy.
  static bool answers(const Rule& rule, Direction direction,
                      AcyclicIndexing indexing) noexcept;

 private:
  std::vector<Rule> rules_;
  AcyclicIndexing indexing_ = AcyclicIndexing::kBothSlots;
  std::map<RelationDirection, std::vector<std::uint32_t>> groups_;
};

struct RuleFileOptions {
  // Skip lines whose rule cannot be resolved or classified instead of
  // failing; useful for rule files produced by other miners.
  bool skip_unsupported = false;
  AcyclicIndexing indexing = AcyclicIndexing::kBothSlots;
};

struct RuleFileReport {
  std::size_t loaded = 0;
  std::size_t skipped = 0;
};

// Line format: predicted<TAB>correct<TAB>confidence<TAB>rule. Lines starting
// with '#' are comments.
RuleSet read_ruleset(std::istream& in, const Vocabulary& vocabulary,
                     const RuleFileOptions& options = {},
                     RuleFileReport* report = nullptr);
RuleSet load_ruleset(const std::filesystem::path& path,
                     const Vocabulary& vocabulary,
                     const RuleFileOptions& options = {},
                     RuleFileReport* report = nullptr);

void write_ruleset(std::ostream& out, const RuleSet& rules,
                   const Vocabulary& vocabulary);
void save_ruleset(const std::filesystem::path& path, const RuleSet& rules,
                  const Vocabulary& vocabulary, std::string_view header = {});

}  // namespace kgr
