#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <string>

#include "kgr/aggregation.hpp"
#include "kgr/clustering.hpp"
#include "kgr/inference.hpp"
#include "kgr/miner.hpp"
#include "kgr/ruleset.hpp"
#include "kgr/similarity.hpp"
#include "kgr/synthetic.hpp"

using namespace kgr;

namespace {

// The planted graph scaled up: 2000 persons over 50 countries.
const Dataset& large() {
  static const Dataset d = [] {
    PlantedOptions o;
    o.persons = 2000;
    o.countries = 50;
    const NamedSplits s = planted_dataset(o);
    std::string text;
    for (const auto& t : s.train) text += t.head + '\t' + t.relation + '\t' + t.tail + '\n';
    auto vocab = std::make_shared<Vocabulary>();
    std::istringstream in(text);
    auto train = read_tsv(in, *vocab);
    return Dataset::from_triples(vocab, std::move(train), {}, {});
  }();
  return d;
}

const RuleSet& mined() {
  static const RuleSet rules = [] {
    MinerConfig c;
    c.paths = 4000;
    return RuleSet(mine(large().train, c));
  }();
  return rules;
}

void BM_Mine(benchmark::State& state) {
  MinerConfig c;
  c.paths = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mine(large().train, c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mine)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_InferHeads(benchmark::State& state) {
  const Rule rule = parse_rule("speaks(X,Y) <= lives(X,A), lang(A,Y)", *large().vocabulary);
  for (auto _ : state) benchmark::DoNotOptimize(infer_heads(rule, large().train));
}
BENCHMARK(BM_InferHeads)->Unit(benchmark::kMicrosecond);

void BM_Candidates(benchmark::State& state) {
  const auto& d = large();
  const Rule rule = parse_rule("speaks(X,Y) <= lives(X,A), lang(A,Y)", *d.vocabulary);
  PredictionTask task;
  task.relation = rule.relation();
  task.direction = Direction::kHead;
  task.known = *d.vocabulary->entities.find("language00");
  for (auto _ : state) benchmark::DoNotOptimize(candidates(rule, task, d.train));
}
BENCHMARK(BM_Candidates)->Unit(benchmark::kMicrosecond);

void BM_Signatures(benchmark::State& state) {
  const MinHashSeeds seeds = MinHashSeeds::derive(42, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_signatures(mined(), large().train, seeds));
  state.counters["rules"] = static_cast<double>(mined().size());
}
BENCHMARK(BM_Signatures)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

// n C rules for one relation with similarities on a 0.05 lattice.
struct Group {
  Vocabulary vocabulary;
  RuleSet rules;
  SimilarityMatrix sims;
};

Group random_group(std::size_t n) {
  Group g;
  std::vector<Rule> rules;
  for (std::size_t i = 0; i < n; ++i) {
    rules.push_back(parse_rule_extending("h(X,Y) <= b" + std::to_string(i) + "(X,Y)", g.vocabulary));
  }
  g.rules = RuleSet(std::move(rules));
  std::vector<std::uint32_t> members(n);
  for (std::uint32_t i = 0; i < n; ++i) members[i] = i;
  g.sims = SimilarityMatrix({0, Direction::kTail}, members);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> lattice(0, 20);
  for (std::size_t i = 0; i < n; ++i) {
    g.sims.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < n; ++j) g.sims.set(i, j, lattice(rng) / 20.0);
  }
  return g;
}

void BM_Cluster(benchmark::State& state) {
  const Group g = random_group(static_cast<std::size_t>(state.range(0)));
  const ThresholdVector t = ThresholdVector::uniform(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(cluster(g.rules, g.sims, t));
}
BENCHMARK(BM_Cluster)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

std::vector<Firing> random_firings(std::size_t entities, std::size_t rules) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> conf(0.01, 1.0);
  std::bernoulli_distribution fires(0.1);
  std::vector<double> c(rules);
  for (double& x : c) x = conf(rng);
  std::vector<Firing> out;
  for (EntityId e = 0; e < entities; ++e) {
    for (std::uint32_t r = 0; r < rules; ++r) {
      if (fires(rng)) out.push_back({e, r, c[r]});
    }
  }
  return out;
}

void BM_Aggregate(benchmark::State& state) {
  const auto firings = random_firings(5000, 200);
  std::vector<std::uint32_t> cluster_of(200);
  for (std::uint32_t i = 0; i < 200; ++i) cluster_of[i] = i / 4;
  for (auto _ : state) {
    switch (state.range(0)) {
      case 0: benchmark::DoNotOptimize(rank_maximum(firings, 100)); break;
      case 1: benchmark::DoNotOptimize(rank_noisy_or(firings, 100)); break;
      default: benchmark::DoNotOptimize(rank_non_redundant(firings, cluster_of, 100)); break;
    }
  }
  state.SetLabel(state.range(0) == 0 ? "max" : state.range(0) == 1 ? "noisy-or" : "nrno");
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(firings.size()));
}
BENCHMARK(BM_Aggregate)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
