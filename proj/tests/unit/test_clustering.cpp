#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "kgr/clustering.hpp"

using namespace kgr;

namespace {

// Three C rules with sim(a,b) = sim(b,c) = 0.6 and sim(a,c) = 0.1.
kgr::testing::RandomGroup chain_group() {
  kgr::testing::RandomGroup g;
  g.vocabulary = std::make_shared<Vocabulary>();
  std::vector<Rule> rules;
  for (const char* text : {"h(X,Y) <= a(X,Y)", "h(X,Y) <= b(X,Y)", "h(X,Y) <= c(X,Y)"}) {
    rules.push_back(parse_rule_extending(text, *g.vocabulary));
  }
  g.rules = RuleSet(std::move(rules));
  g.sims = SimilarityMatrix({0, Direction::kTail}, {0, 1, 2});
  for (std::size_t i = 0; i < 3; ++i) g.sims.set(i, i, 1.0);
  g.sims.set(0, 1, 0.6);
  g.sims.set(1, 2, 0.6);
  g.sims.set(0, 2, 0.1);
  return g;
}

bool refines(const ClusterModel& fine, const ClusterModel& coarse) {
  const auto of = coarse.assignment();
  for (const auto& c : fine.clusters) {
    for (std::uint32_t m : c) {
      if (of[m] != of[c.front()]) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("type combinations follow the threshold order") {
  CHECK(type_combo(RuleType::kC, RuleType::kC) == 0);
  CHECK(type_combo(RuleType::kC, RuleType::kAC1) == 1);
  CHECK(type_combo(RuleType::kAC1, RuleType::kC) == 1);
  CHECK(type_combo(RuleType::kC, RuleType::kAC2) == 2);
  CHECK(type_combo(RuleType::kAC1, RuleType::kAC2) == 3);
  CHECK(type_combo(RuleType::kAC2, RuleType::kAC1) == 3);
  CHECK(type_combo(RuleType::kAC1, RuleType::kAC1) == 4);
  CHECK(type_combo(RuleType::kAC2, RuleType::kAC2) == 5);
}

TEST_CASE("degenerate threshold vectors") {
  CHECK(degenerate_mode(ThresholdVector::uniform(0.0)) == AggregationMode::kMaximum);
  CHECK(degenerate_mode(ThresholdVector::uniform(1.0)) == AggregationMode::kNoisyOr);
  ThresholdVector mixed = ThresholdVector::uniform(0.0);
  mixed.values[3] = 1.0;
  CHECK(degenerate_mode(mixed) == AggregationMode::kMixed);
  CHECK(degenerate_mode(ThresholdVector::uniform(0.5)) == AggregationMode::kMixed);
  CHECK(ThresholdVector::uniform(0.5).valid());
  CHECK_FALSE(ThresholdVector::uniform(1.5).valid());
}

TEST_CASE("similarity chains transitively") {
  const auto g = chain_group();
  ThresholdVector t = ThresholdVector::uniform(1.0);
  t.values[0] = 0.5;
  const ClusterModel m = cluster(g.rules, g.sims, t);
  REQUIRE(m.clusters.size() == 1);
  CHECK(m.clusters[0] == std::vector<std::uint32_t>{0, 1, 2});

  // the bound is strict
  t.values[0] = 0.6;
  CHECK(cluster(g.rules, g.sims, t).clusters.size() == 3);
}

TEST_CASE("all ones gives singletons, all zeros one cluster") {
  const auto g = chain_group();
  const ClusterModel ones = cluster(g.rules, g.sims, ThresholdVector::uniform(1.0));
  CHECK(ones.clusters.size() == 3);
  CHECK(ones.assignment() == std::vector<std::uint32_t>{0, 1, 2});

  auto zero_sims = g;
  zero_sims.sims.set(0, 1, 0.0);
  zero_sims.sims.set(1, 2, 0.0);
  zero_sims.sims.set(0, 2, 0.0);
  const ClusterModel zeros = cluster(zero_sims.rules, zero_sims.sims, ThresholdVector::uniform(0.0));
  CHECK(zeros.clusters.size() == 1);
  CHECK(zeros.assignment() == std::vector<std::uint32_t>{0, 0, 0});
}

TEST_CASE("an empty group has no clusters") {
  const RuleSet rules;
  const SimilarityMatrix sims({0, Direction::kHead}, {});
  CHECK(cluster(rules, sims, ThresholdVector::uniform(0.3)).clusters.empty());
}

TEST_CASE("clusters match a union-find oracle and refine as thresholds rise") {
  std::mt19937_64 rng(8);
  for (int instance = 0; instance < 100; ++instance) {
    const auto g = kgr::testing::random_group(rng, 1 + rng() % 25);
    const ThresholdVector t = kgr::testing::random_thresholds(rng);
    const ClusterModel m = cluster(g.rules, g.sims, t);
    CHECK(m.clusters == kgr::testing::union_find_clusters(g.rules, g.sims, t));

    std::vector<bool> covered(g.sims.size(), false);
    for (const auto& c : m.clusters) {
      CHECK(std::is_sorted(c.begin(), c.end()));
      for (std::uint32_t i : c) {
        CHECK_FALSE(covered[i]);
        covered[i] = true;
      }
    }
    CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));

    ThresholdVector higher = t;
    higher.values[rng() % 6] = std::min(1.0, t.values[rng() % 6] + 0.25);
    for (std::size_t i = 0; i < 6; ++i) higher.values[i] = std::max(higher.values[i], t.values[i]);
    CHECK(refines(cluster(g.rules, g.sims, higher), m));
  }
}

TEST_CASE("cluster files list every rule") {
  const auto g = chain_group();
  ThresholdVector t = ThresholdVector::uniform(1.0);
  t.values[0] = 0.5;
  std::ostringstream out;
  write_clusters(out, cluster(g.rules, g.sims, t), g.sims, *g.vocabulary);
  CHECK(out.str() == "h\ttail\t0\t0\nh\ttail\t0\t1\nh\ttail\t0\t2\n");
}
