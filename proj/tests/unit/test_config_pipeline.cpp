#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "kgr/error.hpp"
#include "kgr/pipeline.hpp"
#include "kgr/synthetic.hpp"

using namespace kgr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Config small_config(const fs::path& dir) {
  std::istringstream in(
      "workdir=out\n"
      "mine_paths=2000\n"
      "random_iterations=100\n"
      "minhash_k=64\n"
      "threads=1\n");
  return Config::parse(in, dir);
}

}  // namespace

TEST_CASE("config files override defaults and reject unknown keys") {
  std::istringstream in("# comment\n\n seed = 7 \nstrategy=grid\n");
  const Config c = Config::parse(in, "/data/set");
  CHECK(c.get_uint("seed") == 7);
  CHECK(c.get("strategy") == "grid");
  CHECK(c.get("aggregation") == "nrno");
  CHECK(c.get_double("min_confidence") == 0.0001);
  CHECK_FALSE(c.get_bool("reflexive"));
  CHECK(c.dataset_path("train") == fs::path("/data/set/train.txt"));
  CHECK(c.artifact_path("rules") == fs::path("/data/set/./rules.txt"));

  std::istringstream unknown("seeed=1\n");
  CHECK_THROWS_AS(Config::parse(unknown), ConfigError);
  std::istringstream no_eq("seed\n");
  CHECK_THROWS_AS(Config::parse(no_eq), ConfigError);

  Config bad;
  bad.set("seed", "x");
  CHECK_THROWS_AS(bad.get_uint("seed"), ConfigError);
  bad.set("reflexive", "maybe");
  CHECK_THROWS_AS(bad.get_bool("reflexive"), ConfigError);
  CHECK_THROWS_AS(bad.set("nope", "1"), ConfigError);
}

TEST_CASE("the config hash ignores the thread count") {
  Config a, b;
  b.set("threads", "4");
  CHECK(a.hash() == b.hash());
  b.set("seed", "43");
  CHECK(a.hash() != b.hash());

  const std::string header = output_header(a, "mine");
  CHECK(header.starts_with("# kgr 0.1.0\n# stage: mine\n# config-hash: "));
  CHECK(header.ends_with("# seed: 42\n"));
  CHECK(std::count(header.begin(), header.end(), '\n') == 4);
}

TEST_CASE("prediction files round-trip") {
  const Dataset d = kgr::testing::g0();
  const auto& v = *d.vocabulary;
  using kgr::testing::entity;
  const std::vector<PredictionBlock> blocks{
      {{entity(d, "max"), kgr::testing::relation(d, "speaks"), entity(d, "english")},
       {{entity(d, "max"), 0.5}, {entity(d, "john"), 0.1 + 0.2}},
       {}}};
  std::ostringstream out;
  write_predictions(out, blocks, v);
  CHECK(out.str() == "max\tspeaks\tenglish\nHeads: max\t0.5\tjohn\t0.30000000000000004\nTails:\n");

  std::istringstream in("# header\n" + out.str());
  const auto back = read_predictions(in, v);
  REQUIRE(back.size() == 1);
  CHECK(back[0].triple == blocks[0].triple);
  CHECK(back[0].heads == blocks[0].heads);
  CHECK(back[0].tails.empty());

  std::istringstream truncated("max\tspeaks\tenglish\nHeads: max\t0.5\n");
  CHECK_THROWS_AS(read_predictions(truncated, v), ParseError);
  std::istringstream unknown("max\tspeaks\tenglish\nHeads: bob\t0.5\nTails:\n");
  CHECK_THROWS_AS(read_predictions(unknown, v), ResolutionError);
  std::istringstream odd("max\tspeaks\tenglish\nHeads: max\nTails:\n");
  CHECK_THROWS_AS(read_predictions(odd, v), ParseError);
}

TEST_CASE("filter splits grow with the evaluated split") {
  const Dataset d = kgr::testing::g0();
  CHECK(filter_splits(d, Split::kTrain).size() == 1);
  CHECK(filter_splits(d, Split::kValid).size() == 2);
  CHECK(filter_splits(d, Split::kTest).size() == 3);
}

TEST_CASE("planted dataset shape") {
  const NamedSplits s = planted_dataset();
  // 10 lang, 40 lives, 40 official speaks, 40 learns, 28 learned speaks
  CHECK(s.train.size() == 158);
  CHECK(s.valid.size() == 6);
  CHECK(s.test.size() == 6);
  const Dataset d = kgr::testing::from_named(s);
  CHECK(d.vocabulary->entities.size() == 60);
  CHECK(planted_dataset().train == s.train);
  PlantedOptions other;
  other.seed = 8;
  CHECK(planted_dataset(other).test != s.test);

  // no language is held out in both valid and test
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    other.seed = seed;
    const NamedSplits x = planted_dataset(other);
    for (const auto& v : x.valid) {
      for (const auto& t : x.test) CHECK(v.tail != t.tail);
    }
  }
}

TEST_CASE("stages report the missing artifact and its producer") {
  TempDir tmp("kgr_test_pipeline_missing");
  write_named_splits(tmp.path, planted_dataset());
  Pipeline p(small_config(tmp.path));
  auto producer = [&](auto&& stage) -> std::string {
    try {
      stage();
    } catch (const MissingArtifact& e) {
      return e.producer();
    }
    return "";
  };
  CHECK(producer([&] { p.calc_sims(); }) == "mine");
  CHECK(producer([&] { p.eval(); }) == "apply");
  p.mine();
  CHECK(producer([&] { p.search(); }) == "calc-sims");
  p.calc_sims();
  CHECK(producer([&] { p.apply(); }) == "search");
}

TEST_CASE("the staged pipeline ranks the planted test triples first") {
  TempDir tmp("kgr_test_pipeline_full");
  write_named_splits(tmp.path, planted_dataset());
  Config config = small_config(tmp.path);
  Pipeline p(config);
  const RuleSet rules = p.mine();
  CHECK_FALSE(rules.empty());
  p.calc_sims();
  const ThresholdTable table = p.search();
  CHECK_FALSE(table.empty());
  const auto blocks = p.apply();
  CHECK(blocks.size() == 6);
  const EvalReport report = p.eval();
  CHECK(report.tasks == 12);
  CHECK(report.overall.at(TiePolicy::kAverage).mrr >= 0.9);

  const fs::path out = tmp.path / "out";
  for (const char* name : {"rules.txt", "thresholds.txt", "predictions.txt", "report.txt"}) {
    CHECK(read_file(out / name).starts_with("# kgr 0.1.0\n"));
  }

  // a different rule set invalidates the signature cache
  std::ofstream(out / "rules.txt") << "1\t1\t1\tspeaks(X,Y) <= learns(X,Y)\n";
  CHECK_THROWS_AS(p.search(), Error);
}
