#include "kgr/similarity.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "kgr/error.hpp"
#include "kgr/hashing.hpp"
#include "kgr/parallel.hpp"

namespace kgr {

std::optional<double> exact_jaccard(std::span<const Triple> a,
                                    std::span<const Triple> b) {
  if (a.empty() && b.empty()) return std::nullopt;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t all = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(all);
}

MinHashSeeds MinHashSeeds::derive(std::uint64_t master_seed, std::size_t k) {
  MinHashSeeds seeds;
  seeds.values.reserve(k);
  std::uint64_t state = master_seed;
  for (std::size_t i = 0; i < k; ++i) seeds.values.push_back(splitmix64(state));
  return seeds;
}

std::uint64_t MinHashSeeds::fingerprint() const noexcept {
  std::uint64_t h = fmix64(values.size());
  for (std::uint64_t v : values) h = combine_seed(h, v);
  return h;
}

std::optional<MinHashSignature> signature(std::span<const Triple> set,
                                          const MinHashSeeds& seeds) {
  if (set.empty()) return std::nullopt;
  MinHashSignature sig;
  sig.seeds_fingerprint = seeds.fingerprint();
  sig.minima.assign(seeds.k(), std::numeric_limits<std::uint64_t>::max());
  for (const Triple& t : set) {
    const std::uint64_t key = triple_key(t);
    for (std::size_t i = 0; i < seeds.k(); ++i) {
      sig.minima[i] = std::min(sig.minima[i], fmix64(key ^ seeds.values[i]));
    }
  }
  return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
  if (a.minima.size() != b.minima.size() ||
      a.seeds_fingerprint != b.seeds_fingerprint || a.minima.empty()) {
    throw ContractViolation("signatures come from different MinHash families");
  }
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.minima.size(); ++i) {
    agree += a.minima[i] == b.minima[i];
  }
  return static_cast<double>(agree) / static_cast<double>(a.minima.size());
}

std::uint64_t rules_fingerprint(const RuleSet& rules) {
  std::uint64_t h = fmix64(rules.size());
  for (const Rule& r : rules.rules()) h = combine_seed(h, fnv1a(r.structure_key()));
  return h;
}

RuleSignatures compute_signatures(const RuleSet& rules,
                                  const KnowledgeGraph& train,
                                  const MinHashSeeds& seeds,
                                  const GroundingLimits& limits,
                                  unsigned threads) {
  RuleSignatures out;
  out.seeds = seeds;
  out.rules_fingerprint = rules_fingerprint(rules);
  out.by_rule.resize(rules.size());
  parallel_for(rules.size(), threads, [&](std::size_t i) {
    const InferredSet inferred = infer_heads(rules[i], train, limits);
    out.by_rule[i] = signature(inferred.triples, seeds);
  });
  return out;
}

namespace {

constexpr std::array<char, 8> kMagic{'K', 'G', 'R', 'M', 'H', 'S', 'I', 'G'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw ParseError("truncated signature cache");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw ParseError("truncated signature cache");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

void save_signatures(const std::filesystem::path& path,
                     const RuleSignatures& signatures, std::string_view header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << header;
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(signatures.seeds.k()));
  put_u64(out, signatures.by_rule.size());
  put_u64(out, signatures.rules_fingerprint);
  for (std::uint64_t s : signatures.seeds.values) put_u64(out, s);
  for (const auto& sig : signatures.by_rule) {
    out.put(sig ? 1 : 0);
    if (sig) {
      for (std::uint64_t m : sig->minima) put_u64(out, m);
    }
  }
}

RuleSignatures load_signatures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  for (std::string line; in.peek() == '#';) std::getline(in, line);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) {
    throw ParseError(path.string() + ": not a signature cache");
  }
  if (get_u32(in) != kVersion) {
    throw ParseError(path.string() + ": unsupported signature cache version");
  }
  const std::uint32_t k = get_u32(in);
  const std::uint64_t count = get_u64(in);
  RuleSignatures out;
  out.rules_fingerprint = get_u64(in);
  out.seeds.values.resize(k);
  for (auto& s : out.seeds.values) s = get_u64(in);
  const std::uint64_t fp = out.seeds.fingerprint();
  out.by_rule.resize(count);
  for (auto& sig : out.by_rule) {
    const int present = in.get();
    if (present == std::char_traits<char>::eof()) {
      throw ParseError(path.string() + ": truncated signature cache");
    }
    if (present) {
      MinHashSignature s;
      s.seeds_fingerprint = fp;
      s.minima.resize(k);
      for (auto& m : s.minima) m = get_u64(in);
      sig = std::move(s);
    }
  }
  return out;
}

SimilarityMatrix::SimilarityMatrix(RelationDirection key,
                                   std::vector<std::uint32_t> members)
    : key_(key),
      members_(std::move(members)),
      values_(members_.size() * members_.size(), 0.0) {
  for (std::size_t i = 0; i < members_.size(); ++i) set(i, i, 1.0);
}

SimilarityMatrix build_similarity_matrix(RelationDirection key,
                                         std::span<const std::uint32_t> members,
                                         const RuleSignatures& signatures,
                                         unsigned threads) {
  SimilarityMatrix m(key, {members.begin(), members.end()});
  const std::size_t n = members.size();
  parallel_for(n, threads, [&](std::size_t i) {
    const auto& a = signatures.by_rule.at(members[i]);
    if (!a) return;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& b = signatures.by_rule.at(members[j]);
      if (b) m.set(i, j, estimate_jaccard(*a, *b));
    }
  });
  return m;
}

}  // namespace kgr
