#pragma once

// Shared fixtures and reference implementations for the test binaries.
// The oracles here deliberately avoid the library's chain machinery: they
// enumerate variable assignments directly over the literal atoms.

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kgr/graph.hpp"
#include "kgr/inference.hpp"
#include "kgr/clustering.hpp"
#include "kgr/rule.hpp"
#include "kgr/ruleset.hpp"
#include "kgr/similarity.hpp"
#include "kgr/synthetic.hpp"

namespace kgr::testing {

// max lives uk, john lives uk, uk lang english, max speaks english.
inline Dataset g0() {
  auto vocab = std::make_shared<Vocabulary>();
  std::istringstream train(
      "max\tlives\tuk\n"
      "john\tlives\tuk\n"
      "uk\tlang\tenglish\n"
      "max\tspeaks\tenglish\n");
  auto triples = read_tsv(train, *vocab);
  return Dataset::from_triples(vocab, std::move(triples), {}, {});
}

// Loads named splits the same way the command line tool reads files.
inline Dataset from_named(const NamedSplits& splits) {
  auto text = [](const std::vector<NamedTriple>& ts) {
    std::string out;
    for (const auto& t : ts) out += t.head + '\t' + t.relation + '\t' + t.tail + '\n';
    return out;
  };
  auto vocab = std::make_shared<Vocabulary>();
  std::istringstream a(text(splits.train)), b(text(splits.valid)), c(text(splits.test));
  auto train = read_tsv(a, *vocab);
  auto valid = read_tsv(b, *vocab);
  auto test = read_tsv(c, *vocab);
  return Dataset::from_triples(vocab, std::move(train), std::move(valid), std::move(test));
}

inline Dataset planted(const PlantedOptions& options = {}) {
  return from_named(planted_dataset(options));
}

inline EntityId entity(const Dataset& d, std::string_view name) {
  return *d.vocabulary->entities.find(name);
}
inline RelationId relation(const Dataset& d, std::string_view name) {
  return *d.vocabulary->relations.find(name);
}

// Every head triple derivable by some assignment of the rule's variables
// to entities of `graph`.
inline std::set<Triple> brute_force_heads(const Rule& rule, const KnowledgeGraph& graph) {
  std::vector<char> vars;
  auto note = [&](const Term& t) {
    if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name()) == vars.end()) {
      vars.push_back(t.name());
    }
  };
  note(rule.head().first);
  note(rule.head().second);
  for (const Atom& a : rule.body()) {
    note(a.first);
    note(a.second);
  }
  const auto n = static_cast<EntityId>(graph.num_entities());
  std::map<char, EntityId> binding;
  std::set<Triple> out;

  auto value = [&](const Term& t) -> std::optional<EntityId> {
    if (t.is_constant()) return t.entity();
    auto it = binding.find(t.name());
    if (it == binding.end()) return std::nullopt;
    return it->second;
  };
  // Body atoms whose terms are all bound must hold.
  auto consistent = [&] {
    for (const Atom& a : rule.body()) {
      auto f = value(a.first);
      auto s = value(a.second);
      if (f && s && !graph.contains({*f, a.relation, *s})) return false;
    }
    return true;
  };
  auto assign = [&](auto&& self, std::size_t i) -> void {
    if (!consistent()) return;
    if (i == vars.size()) {
      out.insert({*value(rule.head().first), rule.relation(), *value(rule.head().second)});
      return;
    }
    for (EntityId e = 0; e < n; ++e) {
      binding[vars[i]] = e;
      self(self, i + 1);
    }
    binding.erase(vars[i]);
  };
  assign(assign, 0);
  return out;
}

inline std::set<EntityId> project(const std::set<Triple>& heads, const PredictionTask& task) {
  std::set<EntityId> out;
  for (const Triple& t : heads) {
    if (task.direction == Direction::kTail && t.head == task.known) out.insert(t.tail);
    if (task.direction == Direction::kHead && t.tail == task.known) out.insert(t.head);
  }
  return out;
}

// Random graph over `entities` entities and `relations` relations.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t entities,
                              std::size_t relations, std::size_t triples) {
  auto vocab = std::make_shared<Vocabulary>();
  for (std::size_t e = 0; e < entities; ++e) vocab->entities.intern("e" + std::to_string(e));
  for (std::size_t r = 0; r < relations; ++r) vocab->relations.intern("r" + std::to_string(r));
  std::uniform_int_distribution<EntityId> pe(0, static_cast<EntityId>(entities - 1));
  std::uniform_int_distribution<RelationId> pr(0, static_cast<RelationId>(relations - 1));
  std::vector<Triple> ts;
  for (std::size_t i = 0; i < triples; ++i) ts.push_back({pe(rng), pr(rng), pe(rng)});
  return Dataset::from_triples(vocab, std::move(ts), {}, {});
}

// Random well-formed rule with a body of 1..max_length atoms. Atom
// orientation, body order and head orientation are all randomized.
inline Rule random_rule(std::mt19937_64& rng, std::size_t entities, std::size_t relations,
                        std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> plen(1, max_length);
  std::uniform_int_distribution<EntityId> pe(0, static_cast<EntityId>(entities - 1));
  std::uniform_int_distribution<RelationId> pr(0, static_cast<RelationId>(relations - 1));
  std::uniform_int_distribution<int> ptype(0, 2);
  std::bernoulli_distribution coin(0.5);
  const std::size_t n = plen(rng);
  const auto type = static_cast<RuleType>(ptype(rng));

  std::vector<Term> path;  // n + 1 terms from the head variable outward
  path.push_back(Term::variable('X'));
  for (std::size_t i = 1; i < n; ++i) path.push_back(Term::variable(static_cast<char>('A' + i - 1)));
  if (type == RuleType::kC) {
    path.push_back(Term::variable('Y'));
  } else if (type == RuleType::kAC1) {
    path.push_back(Term::constant(pe(rng)));
  } else {
    path.push_back(Term::variable(static_cast<char>('A' + n - 1)));
  }
  std::vector<Atom> body;
  for (std::size_t i = 0; i < n; ++i) {
    const RelationId r = pr(rng);
    body.push_back(coin(rng) ? Atom{r, path[i], path[i + 1]} : Atom{r, path[i + 1], path[i]});
  }
  if (coin(rng)) std::reverse(body.begin(), body.end());
  const Term other = type == RuleType::kC ? Term::variable('Y') : Term::constant(pe(rng));
  const RelationId h = pr(rng);
  const Atom head = coin(rng) ? Atom{h, path[0], other} : Atom{h, other, path[0]};
  return Rule(head, std::move(body));
}

// A single-relation rule group of random types with a random symmetric
// similarity matrix. Similarities sit on a 0.05 lattice so that values
// equal to a threshold occur.
struct RandomGroup {
  std::shared_ptr<Vocabulary> vocabulary;
  RuleSet rules;
  SimilarityMatrix sims;
};

inline RandomGroup random_group(std::mt19937_64& rng, std::size_t n) {
  RandomGroup g;
  g.vocabulary = std::make_shared<Vocabulary>();
  std::uniform_int_distribution<int> ptype(0, 2);
  std::vector<Rule> rules;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string b = "b" + std::to_string(i);
    std::string text;
    switch (ptype(rng)) {
      case 0: text = "h(X,Y) <= " + b + "(X,Y)"; break;
      case 1: text = "h(X,c) <= " + b + "(X,d)"; break;
      default: text = "h(X,c) <= " + b + "(X,A)"; break;
    }
    rules.push_back(parse_rule_extending(text, *g.vocabulary));
  }
  g.rules = RuleSet(std::move(rules), AcyclicIndexing::kVariableSlotOnly);
  std::vector<std::uint32_t> members(n);
  for (std::size_t i = 0; i < n; ++i) members[i] = static_cast<std::uint32_t>(i);
  g.sims = SimilarityMatrix({0, Direction::kHead}, members);
  std::uniform_int_distribution<int> lattice(0, 20);
  for (std::size_t i = 0; i < n; ++i) {
    g.sims.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j) g.sims.set(i, j, lattice(rng) / 20.0);
  }
  return g;
}

inline ThresholdVector random_thresholds(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lattice(0, 20);
  ThresholdVector t;
  for (double& v : t.values) v = lattice(rng) / 20.0;
  return t;
}

// Connected components by union-find over pairs above their threshold;
// all-zero thresholds put everything in one cluster.
inline std::vector<std::vector<std::uint32_t>> union_find_clusters(
    const RuleSet& rules, const SimilarityMatrix& sims, const ThresholdVector& t) {
  const std::size_t n = sims.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const bool all_zero = std::all_of(t.values.begin(), t.values.end(),
                                    [](double v) { return v == 0.0; });
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Rule& a = rules[sims.members()[i]];
      const Rule& b = rules[sims.members()[j]];
      if (all_zero || sims.at(i, j) > t[type_combo(a.type(), b.type())]) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, std::vector<std::uint32_t>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(static_cast<std::uint32_t>(i));
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace kgr::testing
