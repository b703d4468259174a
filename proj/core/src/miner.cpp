#include "kgr/miner.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "kgr/error.hpp"
#include "kgr/hashing.hpp"
#include "kgr/parallel.hpp"

namespace kgr {

bool GroundPath::valid() const {
  if (edges.empty()) return false;
  EntityId at = start();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].from() != at) return false;
    if (edges[i].triple == anchor) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if (edges[j].triple == edges[i].triple) return false;
    }
    at = edges[i].to();
  }
  return true;
}

namespace {

bool reflexive(const Triple& t) noexcept { return t.head == t.tail; }

bool used(const GroundPath& path, const Triple& t) {
  if (t == path.anchor) return true;
  return std::any_of(path.edges.begin(), path.edges.end(),
                     [&](const PathEdge& e) { return e.triple == t; });
}

}  // namespace

std::optional<GroundPath> sample_path_from(const KnowledgeGraph& graph,
                                           const Triple& anchor, bool from_head,
                                           std::size_t length,
                                           std::mt19937_64& rng,
                                           const WalkOptions& options) {
  if (length == 0) throw ContractViolation("path length must be at least 1");
  GroundPath path{anchor, from_head, {}};
  path.edges.reserve(length);
  std::vector<PathEdge> options_here;
  EntityId at = path.start();
  while (path.edges.size() < length) {
    options_here.clear();
    for (const Triple& t : graph.outgoing(at)) {
      if ((options.reflexive || !reflexive(t)) && !used(path, t)) {
        options_here.push_back({t, true});
      }
    }
    for (const Triple& t : graph.incoming(at)) {
      if ((options.reflexive || !reflexive(t)) && !used(path, t)) {
        options_here.push_back({t, false});
      }
    }
    if (options_here.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, options_here.size() - 1);
    const PathEdge edge = options_here[pick(rng)];
    path.edges.push_back(edge);
    at = edge.to();
  }
  return path;
}

std::optional<GroundPath> sample_path(const KnowledgeGraph& graph,
                                      std::size_t length, std::mt19937_64& rng,
                                      const WalkOptions& options) {
  if (length == 0) throw ContractViolation("path length must be at least 1");
  if (graph.empty()) throw ContractViolation("cannot sample from an empty graph");
  const auto triples = graph.triples();
  std::uniform_int_distribution<std::size_t> pick(0, triples.size() - 1);
  std::bernoulli_distribution coin(0.5);
  for (unsigned attempt = 0; attempt < options.max_attempts; ++attempt) {
    const Triple anchor = triples[pick(rng)];
    const bool from_head = coin(rng);
    if (!options.reflexive && reflexive(anchor)) continue;
    if (auto path = sample_path_from(graph, anchor, from_head, length, rng, options)) {
      return path;
    }
  }
  return std::nullopt;
}

namespace {

// Builds one rule from the path. `start` and `other` replace the anchor's
// two ends in the head; the walk begins at `start` and its last entity
// becomes `last`. Interior entities become fresh variables.
Rule instantiate(const GroundPath& path, Term start, Term other, Term last) {
  const std::size_t n = path.length();
  auto term_at = [&](std::size_t i) {
    if (i == 0) return start;
    if (i == n) return last;
    return Term::variable(static_cast<char>('A' + (i - 1)));
  };
  std::vector<Atom> body;
  body.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PathEdge& e = path.edges[i];
    const Term from = term_at(i);
    const Term to = term_at(i + 1);
    body.push_back(e.forward ? Atom{e.triple.relation, from, to}
                             : Atom{e.triple.relation, to, from});
  }
  const Atom head = path.from_head ? Atom{path.anchor.relation, start, other}
                                   : Atom{path.anchor.relation, other, start};
  return Rule(head, std::move(body)).canonical();
}

}  // namespace

std::vector<Rule> generalize(const GroundPath& path) {
  const std::size_t n = path.length();
  if (n == 0) throw ContractViolation("cannot generalize an empty path");
  if (n > 20) throw ContractViolation("path too long to generalize");
  std::vector<Rule> rules;
  const Term x = Term::variable('X');
  const Term y = Term::variable('Y');
  const Term start = Term::constant(path.start());
  const Term other = Term::constant(path.other());
  if (path.cyclic()) {
    rules.push_back(instantiate(path, x, y, y));
    rules.push_back(instantiate(path, x, other, other));
    rules.push_back(instantiate(path, start, y, y));
  } else {
    const Term fresh = Term::variable(static_cast<char>('A' + (n - 1)));
    rules.push_back(instantiate(path, x, other, fresh));
    rules.push_back(instantiate(path, x, other, Term::constant(path.edges.back().to())));
  }
  return rules;
}

namespace {

bool within_limits(const Rule& rule, const MinerConfig& config) {
  const std::size_t limit = rule.type() == RuleType::kC
                                ? config.cyclic_max_length
                                : config.acyclic_max_length;
  return rule.length() <= limit;
}

struct Candidate {
  std::string key;
  Rule rule;
};

// Generalized rules of one chunk, first occurrence of each structure only.
std::vector<Candidate> run_chunk(const KnowledgeGraph& train,
                                 const MinerConfig& config, std::size_t chunk,
                                 std::size_t count) {
  const std::size_t max_length =
      std::max(config.cyclic_max_length, config.acyclic_max_length);
  std::mt19937_64 rng(combine_seed(config.seed, chunk));
  std::vector<Candidate> out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t length = 1 + (chunk * config.chunk_size + i) % max_length;
    auto path = sample_path(train, length, rng, config.walk);
    if (!path) continue;
    for (Rule& rule : generalize(*path)) {
      if (!within_limits(rule, config)) continue;
      std::string key = rule.structure_key();
      if (seen.insert(key).second) out.push_back({std::move(key), std::move(rule)});
    }
  }
  return out;
}

}  // namespace

std::vector<Rule> mine(const KnowledgeGraph& train, const MinerConfig& config) {
  if (config.chunk_size == 0) throw ContractViolation("chunk size must be positive");
  if (config.paths == 0 && config.budget.count() <= 0) {
    throw ContractViolation("mining budget must be positive");
  }
  const std::size_t max_length =
      std::max(config.cyclic_max_length, config.acyclic_max_length);
  if (train.empty() || max_length == 0) return {};

  std::vector<Candidate> unique;
  std::unordered_map<std::string, std::size_t> index;
  auto merge = [&](std::vector<std::vector<Candidate>>& chunks) {
    for (auto& chunk : chunks) {
      for (Candidate& c : chunk) {
        if (index.emplace(c.key, unique.size()).second) unique.push_back(std::move(c));
      }
    }
  };

  const unsigned threads = resolve_threads(config.threads);
  if (config.paths > 0) {
    const std::size_t chunks = (config.paths + config.chunk_size - 1) / config.chunk_size;
    std::vector<std::vector<Candidate>> results(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
      const std::size_t count =
          std::min(config.chunk_size, config.paths - c * config.chunk_size);
      results[c] = run_chunk(train, config, c, count);
    });
    merge(results);
  } else {
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              config.budget);
    std::size_t next_chunk = 0;
    while (std::chrono::steady_clock::now() < deadline) {
      std::vector<std::vector<Candidate>> results(threads);
      parallel_for(threads, threads, [&](std::size_t w) {
        results[w] = run_chunk(train, config, next_chunk + w, config.chunk_size);
      });
      next_chunk += threads;
      merge(results);
    }
  }

  std::vector<std::optional<RuleConfidence>> scores(unique.size());
  parallel_for(unique.size(), threads, [&](std::size_t i) {
    scores[i] = confidence(unique[i].rule, train, config.limits);
  });

  std::vector<Candidate> kept;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    const auto& score = scores[i];
    if (!score || score->stats.predicted < config.min_predicted ||
        score->value < config.min_confidence) {
      continue;
    }
    unique[i].rule.set_stats(score->stats, score->value);
    kept.push_back(std::move(unique[i]));
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    if (a.rule.relation() != b.rule.relation()) {
      return a.rule.relation() < b.rule.relation();
    }
    if (a.rule.confidence() != b.rule.confidence()) {
      return a.rule.confidence() > b.rule.confidence();
    }
    return a.key < b.key;
  });

  std::vector<Rule> out;
  out.reserve(kept.size());
  for (Candidate& c : kept) out.push_back(std::move(c.rule));
  return out;
}

}  // namespace kgr
