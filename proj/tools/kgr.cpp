// kgr: mine rules, learn redundancy thresholds, rank candidates, evaluate.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgr/config.hpp"
#include "kgr/error.hpp"
#include "kgr/pipeline.hpp"
#include "kgr/synthetic.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config_path, "pipeline config (key=value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", args.overrides, "override a config entry, key=value");
  cmd->add_option("-t,--threads", args.threads, "worker threads, 0 for all cores");
}

kgr::Config load_config(const CommonArgs& args) {
  kgr::Config config = kgr::Config::load(args.config_path);
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw kgr::ConfigError("--set expects key=value, got '" + kv + "'");
    }
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (args.threads >= 0) config.set("threads", std::to_string(args.threads));
  return config;
}

void print_metrics(const kgr::EvalReport& report) {
  const kgr::Metrics& m = report.overall.at(report.policy);
  std::printf("%zu tasks  policy %s  MRR %.4f  Hits@1 %.4f  Hits@3 %.4f  Hits@10 %.4f\n",
              m.tasks, std::string(kgr::to_string(report.policy)).c_str(), m.mrr,
              m.hits1, m.hits3, m.hits10);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-based link prediction with redundancy-aware aggregation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kgr::kToolVersion));

  CommonArgs args;
  std::string strategy;
  std::string aggregation;
  std::string split;
  std::string policy;
  std::string out_dir;
  std::uint64_t synth_seed = 7;

  auto* mine = app.add_subcommand("mine", "sample paths and write the rule file");
  add_common(mine, args);

  auto* sims = app.add_subcommand("calc-sims", "compute MinHash signatures of every rule");
  add_common(sims, args);

  auto* search = app.add_subcommand("search", "learn per-relation clustering thresholds");
  add_common(search, args);
  search->add_option("--strategy", strategy, "grid or random")
      ->check(CLI::IsMember({"grid", "random"}));

  auto* apply = app.add_subcommand("apply", "rank candidates for every evaluation triple");
  add_common(apply, args);
  apply->add_option("--aggregation", aggregation, "max, noisyor, nrno or vs")
      ->check(CLI::IsMember({"max", "noisyor", "nrno", "vs"}));
  apply->add_option("--split", split, "valid or test")
      ->check(CLI::IsMember({"valid", "test"}));

  auto* eval = app.add_subcommand("eval", "score a prediction file");
  add_common(eval, args);
  eval->add_option("--policy", policy, "tie policy: top, bottom, average, ordinal, random")
      ->check(CLI::IsMember({"top", "bottom", "average", "ordinal", "random"}));

  auto* synth = app.add_subcommand("synthetic", "write the planted-rule example dataset");
  synth->add_option("-o,--out", out_dir, "output directory")->required();
  synth->add_option("--seed", synth_seed, "split seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      kgr::PlantedOptions options;
      options.seed = synth_seed;
      kgr::write_named_splits(out_dir, kgr::planted_dataset(options));
      std::printf("wrote train.txt, valid.txt, test.txt to %s\n", out_dir.c_str());
      return 0;
    }

    kgr::Config config = load_config(args);
    if (!strategy.empty()) config.set("strategy", strategy);
    if (!aggregation.empty()) config.set("aggregation", aggregation);
    if (!split.empty()) config.set("split", split);
    if (!policy.empty()) config.set("policy", policy);
    kgr::Pipeline pipeline(config);

    if (mine->parsed()) {
      const auto rules = pipeline.mine();
      std::printf("%zu rules -> %s\n", rules.size(),
                  config.artifact_path("rules").string().c_str());
    } else if (sims->parsed()) {
      const auto sigs = pipeline.calc_sims();
      std::printf("%zu signatures (k=%zu) -> %s\n", sigs.by_rule.size(), sigs.seeds.k(),
                  config.artifact_path("signatures").string().c_str());
    } else if (search->parsed()) {
      const auto table = pipeline.search();
      std::printf("%zu threshold vectors -> %s\n", table.size(),
                  config.artifact_path("thresholds").string().c_str());
    } else if (apply->parsed()) {
      const auto blocks = pipeline.apply();
      std::printf("%zu triples -> %s\n", blocks.size(),
                  config.artifact_path("predictions").string().c_str());
    } else if (eval->parsed()) {
      print_metrics(pipeline.eval());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "kgr: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
