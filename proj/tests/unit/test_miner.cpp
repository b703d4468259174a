#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "kgr/error.hpp"
#include "kgr/miner.hpp"

using namespace kgr;
using kgr::testing::entity;
using kgr::testing::relation;

namespace {

std::set<std::string> keys(const std::vector<Rule>& rules) {
  std::set<std::string> out;
  for (const Rule& r : rules) out.insert(r.structure_key());
  return out;
}

std::set<std::string> keys(std::initializer_list<const char*> texts, const Vocabulary& v) {
  std::set<std::string> out;
  for (const char* t : texts) out.insert(parse_rule(t, v).structure_key());
  return out;
}

MinerConfig small_config() {
  MinerConfig c;
  c.paths = 3000;
  c.chunk_size = 250;
  c.seed = 1;
  return c;
}

}  // namespace

TEST_CASE("walks from the anchor follow either edge direction") {
  const Dataset d = kgr::testing::g0();
  const Triple anchor{entity(d, "max"), relation(d, "speaks"), entity(d, "english")};
  std::set<std::vector<Triple>> seen;
  std::size_t cyclic = 0;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    std::mt19937_64 rng(seed);
    const auto path = sample_path_from(d.train, anchor, true, 2, rng);
    REQUIRE(path);
    CHECK(path->valid());
    CHECK(path->start() == entity(d, "max"));
    std::vector<Triple> edges;
    for (const PathEdge& e : path->edges) edges.push_back(e.triple);
    seen.insert(edges);
    if (path->cyclic()) ++cyclic;
  }
  // max -> uk, then uk -> english (closing the cycle) or uk <- john
  CHECK(seen.size() == 2);
  CHECK(cyclic > 0);
  CHECK(cyclic < 64);
}

TEST_CASE("the cyclic path generalizes to one C and two AC1 rules") {
  const Dataset d = kgr::testing::g0();
  const EntityId max = entity(d, "max"), uk = entity(d, "uk"), english = entity(d, "english");
  GroundPath path{{max, relation(d, "speaks"), english},
                  true,
                  {{{max, relation(d, "lives"), uk}, true},
                   {{uk, relation(d, "lang"), english}, true}}};
  REQUIRE(path.valid());
  REQUIRE(path.cyclic());
  const auto rules = generalize(path);
  CHECK(rules.size() == 3);
  CHECK(keys(rules) == keys({"speaks(X,Y) <= lives(X,A), lang(A,Y)",
                             "speaks(X,english) <= lives(X,A), lang(A,english)",
                             "speaks(max,Y) <= lives(max,A), lang(A,Y)"},
                            *d.vocabulary));
  CHECK(rules[0].type() == RuleType::kC);

  // the same cycle walked from the other end gives the same rules
  GroundPath back{{max, relation(d, "speaks"), english},
                  false,
                  {{{uk, relation(d, "lang"), english}, false},
                   {{max, relation(d, "lives"), uk}, false}}};
  REQUIRE(back.valid());
  CHECK(keys(generalize(back)) == keys(rules));
}

TEST_CASE("an acyclic path gives AC2 and AC1") {
  const Dataset d = kgr::testing::g0();
  const EntityId max = entity(d, "max"), uk = entity(d, "uk"), english = entity(d, "english");
  GroundPath path{{max, relation(d, "speaks"), english}, true, {{{max, relation(d, "lives"), uk}, true}}};
  REQUIRE_FALSE(path.cyclic());
  const auto rules = generalize(path);
  CHECK(keys(rules) == keys({"speaks(X,english) <= lives(X,A)",
                             "speaks(X,english) <= lives(X,uk)"},
                            *d.vocabulary));
  CHECK(rules[0].type() == RuleType::kAC2);
  CHECK(rules[1].type() == RuleType::kAC1);
}

TEST_CASE("length-one walks and dead ends") {
  const Dataset d = kgr::testing::g0();
  const Triple anchor{entity(d, "max"), relation(d, "speaks"), entity(d, "english")};
  std::mt19937_64 rng(0);
  const auto one = sample_path_from(d.train, anchor, true, 1, rng);
  REQUIRE(one);
  CHECK(one->length() == 1);
  CHECK(one->edges[0].triple == Triple{entity(d, "max"), relation(d, "lives"), entity(d, "uk")});

  // two disconnected triples: no walk can leave either anchor
  auto vocab = std::make_shared<Vocabulary>();
  std::istringstream text("a\tr\tb\nc\tr\td\n");
  auto ts = read_tsv(text, *vocab);
  const Dataset isolated = Dataset::from_triples(vocab, std::move(ts), {}, {});
  const Triple ab{*vocab->entities.find("a"), 0, *vocab->entities.find("b")};
  CHECK_FALSE(sample_path_from(isolated.train, ab, true, 1, rng));
  CHECK_FALSE(sample_path(isolated.train, 1, rng));
}

TEST_CASE("invalid arguments are contract violations") {
  const Dataset d = kgr::testing::g0();
  std::mt19937_64 rng(0);
  CHECK_THROWS_AS(sample_path(d.train, 0, rng), ContractViolation);
  CHECK_THROWS_AS(sample_path(KnowledgeGraph{}, 1, rng), ContractViolation);
  CHECK_THROWS_AS(generalize(GroundPath{}), ContractViolation);
  MinerConfig c;
  c.chunk_size = 0;
  CHECK_THROWS_AS(mine(d.train, c), ContractViolation);
}

TEST_CASE("sampled paths are always valid") {
  std::mt19937_64 rng(77);
  const Dataset d = kgr::testing::random_dataset(rng, 15, 3, 60);
  for (int i = 0; i < 500; ++i) {
    const auto path = sample_path(d.train, 1 + i % 3, rng);
    if (!path) continue;
    CHECK(path->valid());
    CHECK(path->length() == 1 + static_cast<std::size_t>(i % 3));
    for (const Rule& r : generalize(*path)) CHECK(r.relation() == path->anchor.relation);
  }
}

TEST_CASE("mining the planted graph recovers the exact rule") {
  const Dataset d = kgr::testing::planted();
  const auto rules = mine(d.train, small_config());
  REQUIRE_FALSE(rules.empty());
  const Rule target = parse_rule("speaks(X,Y) <= lives(X,A), lang(A,Y)", *d.vocabulary);
  auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) {
    return r.structure_key() == target.structure_key();
  });
  REQUIRE(it != rules.end());
  CHECK(it->confidence() == 1.0);
  CHECK(it->stats() == RuleStats{40, 40});
}

TEST_CASE("mined rules carry their recomputed confidence and respect the limits") {
  const Dataset d = kgr::testing::planted();
  MinerConfig c = small_config();
  c.min_predicted = 3;
  const auto rules = mine(d.train, c);
  std::set<std::string> seen;
  for (const Rule& r : rules) {
    CHECK(seen.insert(r.structure_key()).second);
    CHECK(r.length() <= (r.type() == RuleType::kC ? c.cyclic_max_length : c.acyclic_max_length));
    const auto conf = confidence(r, d.train);
    REQUIRE(conf);
    REQUIRE(r.stats());
    CHECK(r.stats()->predicted == conf->stats.predicted);
    CHECK(r.stats()->correct == conf->stats.correct);
    CHECK(r.confidence() == conf->value);
    CHECK(r.stats()->predicted >= c.min_predicted);
  }
  CHECK(std::is_sorted(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    if (a.relation() != b.relation()) return a.relation() < b.relation();
    return a.confidence() > b.confidence();
  }));
}

TEST_CASE("mining is deterministic and independent of the thread count") {
  const Dataset d = kgr::testing::planted();
  MinerConfig c = small_config();
  const auto a = mine(d.train, c);
  const auto b = mine(d.train, c);
  c.threads = 4;
  const auto e = mine(d.train, c);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == e.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i] == e[i]);
  }
  c.seed = 2;
  c.threads = 1;
  const auto other = mine(d.train, c);
  CHECK_FALSE(other.empty());
}
