#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kgr/inference.hpp"
#include "kgr/ruleset.hpp"

namespace kgr {

// |a & b| / |a | b| over sorted, unique triple lists; nullopt when both
// are empty.
std::optional<double> exact_jaccard(std::span<const Triple> a,
                                    std::span<const Triple> b);

// The k seeds of a MinHash family. Hash i of a triple is
// fmix64(triple_key(t) ^ seeds[i]).
struct MinHashSeeds {
  std::vector<std::uint64_t> values;

  static MinHashSeeds derive(std::uint64_t master_seed, std::size_t k);
  std::size_t k() const noexcept { return values.size(); }
  std::uint64_t fingerprint() const noexcept;
  friend bool operator==(const MinHashSeeds&, const MinHashSeeds&) = default;
};

struct MinHashSignature {
  std::vector<std::uint64_t> minima;  // one per hash function
  std::uint64_t seeds_fingerprint = 0;
};

// Per-function minima over the set; nullopt for an empty set.
std::optional<MinHashSignature> signature(std::span<const Triple> set,
                                          const MinHashSeeds& seeds);

// Fraction of positions where the minima agree. Throws ContractViolation
// when the signatures come from different hash families.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Signatures of every rule's inferred set over the training graph. Rules
// that infer nothing have no signature and never fire.
struct RuleSignatures {
  MinHashSeeds seeds;
  std::uint64_t rules_fingerprint = 0;
  std::vector<std::optional<MinHashSignature>> by_rule;
};

RuleSignatures compute_signatures(const RuleSet& rules,
                                  const KnowledgeGraph& train,
                                  const MinHashSeeds& seeds,
                                  const GroundingLimits& limits = {},
                                  unsigned threads = 1);

std::uint64_t rules_fingerprint(const RuleSet& rules);

// Binary cache: magic, version, k, rule count, rules fingerprint, seeds,
// then one presence byte plus k minima per rule. Little-endian. An optional
// block of '#' text lines may precede the magic.
void save_signatures(const std::filesystem::path& path,
                     const RuleSignatures& signatures,
                     std::string_view header = {});
RuleSignatures load_signatures(const std::filesystem::path& path);

// Symmetric similarity of the rules in one (relation, direction) group.
// Position i refers to members()[i].
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(RelationDirection key, std::vector<std::uint32_t> members);

  RelationDirection key() const noexcept { return key_; }
  std::span<const std::uint32_t> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  double at(std::size_t i, std::size_t j) const noexcept {
    return values_[i * members_.size() + j];
  }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    values_[i * members_.size() + j] = value;
    values_[j * members_.size() + i] = value;
  }

 private:
  RelationDirection key_;
  std::vector<std::uint32_t> members_;
  std::vector<double> values_;
};

// Estimated similarities for one group. Missing signatures score 0
// against everything else; the diagonal is 1.
SimilarityMatrix build_similarity_matrix(RelationDirection key,
                                         std::span<const std::uint32_t> members,
                                         const RuleSignatures& signatures,
                                         unsigned threads = 1);

}  // namespace kgr
