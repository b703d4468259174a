#include "kgr/pipeline.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "kgr/clustering.hpp"
#include "kgr/error.hpp"
#include "kgr/hashing.hpp"
#include "kgr/parallel.hpp"

namespace kgr {

namespace {

void write_candidates(std::ostream& out, std::string_view label,
                      std::span<const RankedCandidate> ranked,
                      const Vocabulary& vocabulary) {
  out << label << ':';
  bool first = true;
  for (const RankedCandidate& c : ranked) {
    out << (first ? " " : "\t") << vocabulary.entities.name(c.entity) << '\t'
        << format_double(c.score);
    first = false;
  }
  out << '\n';
}

std::vector<RankedCandidate> read_candidates(std::string_view line,
                                             std::string_view label,
                                             const Vocabulary& vocabulary,
                                             std::size_t line_no) {
  const std::string prefix = std::string(label) + ":";
  if (!line.starts_with(prefix)) {
    throw ParseError("expected '" + prefix + "'", line_no);
  }
  line.remove_prefix(prefix.size());
  if (line.starts_with(' ')) line.remove_prefix(1);
  std::vector<std::string_view> fields;
  while (!line.empty()) {
    const auto tab = line.find('\t');
    fields.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  if (fields.size() % 2 != 0) {
    throw ParseError("candidate list needs entity/score pairs", line_no);
  }
  std::vector<RankedCandidate> out;
  out.reserve(fields.size() / 2);
  for (std::size_t i = 0; i < fields.size(); i += 2) {
    auto entity = vocabulary.entities.find(fields[i]);
    if (!entity) {
      throw ResolutionError("line " + std::to_string(line_no) + ": unknown entity '" +
                            std::string(fields[i]) + "'");
    }
    double score = 0.0;
    const std::string_view s = fields[i + 1];
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), score);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
      throw ParseError("invalid score '" + std::string(s) + "'", line_no);
    }
    out.push_back({*entity, score});
  }
  return out;
}

Triple read_triple(std::string_view line, const Vocabulary& vocabulary,
                   std::size_t line_no) {
  const auto first = line.find('\t');
  const auto second = first == std::string_view::npos ? first : line.find('\t', first + 1);
  if (second == std::string_view::npos || line.find('\t', second + 1) != std::string_view::npos) {
    throw ParseError("expected head<TAB>relation<TAB>tail", line_no);
  }
  auto entity = [&](std::string_view name) {
    auto id = vocabulary.entities.find(name);
    if (!id) {
      throw ResolutionError("line " + std::to_string(line_no) + ": unknown entity '" +
                            std::string(name) + "'");
    }
    return *id;
  };
  const std::string_view rel = line.substr(first + 1, second - first - 1);
  auto relation = vocabulary.relations.find(rel);
  if (!relation) {
    throw ResolutionError("line " + std::to_string(line_no) + ": unknown relation '" +
                          std::string(rel) + "'");
  }
  return {entity(line.substr(0, first)), *relation, entity(line.substr(second + 1))};
}

}  // namespace

void write_predictions(std::ostream& out, std::span<const PredictionBlock> blocks,
                       const Vocabulary& vocabulary) {
  for (const PredictionBlock& b : blocks) {
    out << vocabulary.entities.name(b.triple.head) << '\t'
        << vocabulary.relations.name(b.triple.relation) << '\t'
        << vocabulary.entities.name(b.triple.tail) << '\n';
    write_candidates(out, "Heads", b.heads, vocabulary);
    write_candidates(out, "Tails", b.tails, vocabulary);
  }
}

std::vector<PredictionBlock> read_predictions(std::istream& in,
                                              const Vocabulary& vocabulary) {
  std::vector<PredictionBlock> blocks;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() != '#') return true;
    }
    return false;
  };
  while (next_line()) {
    PredictionBlock block{read_triple(line, vocabulary, line_no), {}, {}};
    if (!next_line()) throw ParseError("missing Heads line", line_no);
    block.heads = read_candidates(line, "Heads", vocabulary, line_no);
    if (!next_line()) throw ParseError("missing Tails line", line_no);
    block.tails = read_candidates(line, "Tails", vocabulary, line_no);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::vector<const KnowledgeGraph*> filter_splits(const Dataset& data, Split split) {
  std::vector<const KnowledgeGraph*> out{&data.train};
  if (split != Split::kTrain) out.push_back(&data.valid);
  if (split == Split::kTest) out.push_back(&data.test);
  return out;
}

std::map<RelationDirection, std::vector<PredictionTask>> validation_tasks(
    const Dataset& data) {
  const auto filters = filter_splits(data, Split::kValid);
  std::map<RelationDirection, std::vector<PredictionTask>> out;
  for (PredictionTask& task : make_tasks(data.valid, filters)) {
    out[{task.relation, task.direction}].push_back(std::move(task));
  }
  return out;
}

ThresholdTable learn_thresholds(const Dataset& data, const RuleSet& rules,
                                const RuleSignatures& signatures,
                                const SearchOptions& options,
                                std::map<RelationDirection, SearchResult>* results) {
  if (signatures.by_rule.size() != rules.size()) {
    throw ContractViolation("signatures do not belong to this rule set");
  }
  const auto validation = validation_tasks(data);
  ThresholdTable table;
  for (const RelationDirection& key : rules.groups()) {
    SimilarityMatrix sims =
        build_similarity_matrix(key, rules.group(key), signatures, options.threads);
    std::span<const PredictionTask> tasks;
    if (auto it = validation.find(key); it != validation.end()) tasks = it->second;
    const SearchContext context = SearchContext::build(
        rules, std::move(sims), tasks, data.train, options.limits, options.top_k);
    SearchResult result = options.strategy == SearchStrategy::kGrid
                              ? grid_search(context, options.grid_steps, options.threads)
                              : random_search(context, options.random, options.threads);
    table[key] = {result.thresholds, result.fitness};
    if (results) (*results)[key] = std::move(result);
  }
  return table;
}

std::vector<PredictionBlock> predict(const Dataset& data, Split split,
                                     const RuleSet& rules,
                                     const ApplyOptions& options,
                                     const ThresholdTable* thresholds,
                                     const RuleSignatures* signatures) {
  if (split == Split::kTrain) {
    throw ContractViolation("predictions are made for the valid or test split");
  }
  const unsigned threads = resolve_threads(options.threads);
  const std::vector<PredictionTask> tasks =
      make_tasks(data.split(split), filter_splits(data, split));

  std::map<RelationDirection, std::vector<std::uint32_t>> cluster_of;
  std::map<RelationDirection, Aggregation> selected;
  if (options.aggregation == Aggregation::kNonRedundantNoisyOr) {
    if (!thresholds || !signatures) {
      throw ContractViolation("non-redundant noisy-or needs thresholds and signatures");
    }
    if (signatures->by_rule.size() != rules.size()) {
      throw ContractViolation("signatures do not belong to this rule set");
    }
    for (const RelationDirection& key : rules.groups()) {
      const SimilarityMatrix sims =
          build_similarity_matrix(key, rules.group(key), *signatures, threads);
      ThresholdVector t = ThresholdVector::uniform(0.0);
      if (auto it = thresholds->find(key); it != thresholds->end()) {
        t = it->second.thresholds;
      }
      cluster_of[key] = cluster(rules, sims, t).assignment();
    }
  } else if (options.aggregation == Aggregation::kValidationSelected) {
    const auto validation = validation_tasks(data);
    for (const RelationDirection& key : rules.groups()) {
      const auto members = rules.group(key);
      std::span<const PredictionTask> val;
      if (auto it = validation.find(key); it != validation.end()) val = it->second;
      const SearchContext context = SearchContext::build(
          rules, SimilarityMatrix(key, {members.begin(), members.end()}), val,
          data.train, options.limits, options.top_k);
      selected[key] = select_vs(strategy_mrr(context, Aggregation::kMaximum),
                                strategy_mrr(context, Aggregation::kNoisyOr));
    }
  }

  std::vector<std::vector<RankedCandidate>> ranked(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const PredictionTask& task = tasks[i];
    const RelationDirection key{task.relation, task.direction};
    const auto group = rules.group(key);
    if (group.empty()) return;
    const std::vector<Firing> firings =
        collect_firings(rules, group, task, data.train, options.limits);
    Aggregation strategy = options.aggregation;
    if (strategy == Aggregation::kValidationSelected) strategy = selected.at(key);
    CandidateRanking ranking;
    switch (strategy) {
      case Aggregation::kMaximum:
        ranking = rank_maximum(firings, options.top_k);
        break;
      case Aggregation::kNoisyOr:
        ranking = rank_noisy_or(firings, options.top_k);
        break;
      case Aggregation::kNonRedundantNoisyOr:
        ranking = rank_non_redundant(firings, cluster_of.at(key), options.top_k);
        break;
      case Aggregation::kValidationSelected:
        break;
    }
    ranked[i] = std::move(ranking.entries);
  });

  std::vector<PredictionBlock> blocks;
  blocks.reserve(tasks.size() / 2);
  for (std::size_t i = 0; i + 1 < tasks.size(); i += 2) {
    // make_tasks emits the tail task first, then the head task.
    PredictionBlock block;
    block.triple = tasks[i].triple();
    block.tails = std::move(ranked[i]);
    block.heads = std::move(ranked[i + 1]);
    blocks.push_back(std::move(block));
  }
  return blocks;
}

EvalReport evaluate_predictions(std::span<const PredictionBlock> blocks,
                                TiePolicy policy, std::uint64_t seed) {
  std::vector<RankedTask> tasks;
  tasks.reserve(blocks.size() * 2);
  for (const PredictionBlock& b : blocks) {
    tasks.push_back({b.triple.relation, Direction::kTail, b.triple.tail, b.tails});
    tasks.push_back({b.triple.relation, Direction::kHead, b.triple.head, b.heads});
  }
  return evaluate(tasks, policy, seed);
}

namespace {

AcyclicIndexing parse_indexing(const std::string& text) {
  if (text == "both") return AcyclicIndexing::kBothSlots;
  if (text == "variable") return AcyclicIndexing::kVariableSlotOnly;
  throw ConfigError("indexing: expected both or variable, got '" + text + "'");
}

Split parse_split(const std::string& text) {
  if (text == "valid") return Split::kValid;
  if (text == "test") return Split::kTest;
  throw ConfigError("split: expected valid or test, got '" + text + "'");
}

unsigned as_unsigned(std::uint64_t v, std::string_view key) {
  if (v > std::numeric_limits<unsigned>::max()) {
    throw ConfigError(std::string(key) + ": value too large");
  }
  return static_cast<unsigned>(v);
}

std::ofstream open_output(const std::filesystem::path& path, const Config& config,
                          std::string_view stage, bool binary = false) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary | std::ios::out : std::ios::out);
  if (!out) throw Error("cannot write " + path.string());
  out << output_header(config, stage);
  return out;
}

constexpr std::uint64_t kMinHashStream = 0x6D696E68617368;  // "minhash"

}  // namespace

Pipeline::Pipeline(Config config) : config_(std::move(config)) {}

const Dataset& Pipeline::dataset() {
  if (!dataset_) {
    dataset_ = Dataset::load(config_.dataset_path("train"),
                             config_.dataset_path("valid"),
                             config_.dataset_path("test"));
  }
  return *dataset_;
}

GroundingLimits Pipeline::limits() const {
  return {static_cast<std::size_t>(config_.get_uint("max_groundings"))};
}

unsigned Pipeline::threads() const {
  return resolve_threads(as_unsigned(config_.get_uint("threads"), "threads"));
}

RuleSet Pipeline::load_rules() {
  const auto path = config_.artifact_path("rules");
  if (!std::filesystem::exists(path)) throw MissingArtifact(path.string(), "mine");
  RuleFileOptions options;
  options.indexing = parse_indexing(config_.get("indexing"));
  return load_ruleset(path, *dataset().vocabulary, options);
}

RuleSignatures Pipeline::load_checked_signatures(const RuleSet& rules) {
  const auto path = config_.artifact_path("signatures");
  if (!std::filesystem::exists(path)) throw MissingArtifact(path.string(), "calc-sims");
  RuleSignatures sigs = load_signatures(path);
  if (sigs.rules_fingerprint != rules_fingerprint(rules) ||
      sigs.by_rule.size() != rules.size()) {
    throw Error(path.string() + " was computed for other rules (rerun `calc-sims`)");
  }
  return sigs;
}

RuleSet Pipeline::mine() {
  const Dataset& data = dataset();
  MinerConfig mc;
  mc.cyclic_max_length = config_.get_uint("max_length_cyclic");
  mc.acyclic_max_length = config_.get_uint("max_length_acyclic");
  mc.paths = config_.get_uint("mine_paths");
  mc.budget = std::chrono::duration<double>(config_.get_double("mine_seconds"));
  mc.seed = config_.get_uint("seed");
  mc.min_predicted = config_.get_uint("min_predicted");
  mc.min_confidence = config_.get_double("min_confidence");
  mc.walk.reflexive = config_.get_bool("reflexive");
  mc.limits = limits();
  mc.threads = threads();
  RuleSet rules(kgr::mine(data.train, mc), parse_indexing(config_.get("indexing")));
  auto out = open_output(config_.artifact_path("rules"), config_, "mine");
  write_ruleset(out, rules, *data.vocabulary);
  return rules;
}

RuleSignatures Pipeline::calc_sims() {
  const RuleSet rules = load_rules();
  const auto k = static_cast<std::size_t>(config_.get_uint("minhash_k"));
  if (k == 0) throw ConfigError("minhash_k must be positive");
  const MinHashSeeds seeds =
      MinHashSeeds::derive(combine_seed(config_.get_uint("seed"), kMinHashStream), k);
  RuleSignatures sigs =
      compute_signatures(rules, dataset().train, seeds, limits(), threads());
  const auto path = config_.artifact_path("signatures");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  save_signatures(path, sigs, output_header(config_, "calc-sims"));
  return sigs;
}

ThresholdTable Pipeline::search() {
  const RuleSet rules = load_rules();
  const RuleSignatures sigs = load_checked_signatures(rules);
  SearchOptions options;
  const std::string& strategy = config_.get("strategy");
  if (strategy == "grid") {
    options.strategy = SearchStrategy::kGrid;
  } else if (strategy == "random") {
    options.strategy = SearchStrategy::kRandom;
  } else {
    throw ConfigError("strategy: expected grid or random, got '" + strategy + "'");
  }
  options.grid_steps = as_unsigned(config_.get_uint("grid_steps"), "grid_steps");
  options.random.levels = as_unsigned(config_.get_uint("random_levels"), "random_levels");
  options.random.iterations = config_.get_uint("random_iterations");
  options.random.seed = config_.get_uint("seed");
  options.random.continuous = config_.get_bool("random_continuous");
  options.top_k = config_.get_uint("top_k");
  options.limits = limits();
  options.threads = threads();
  ThresholdTable table = learn_thresholds(dataset(), rules, sigs, options);
  auto out = open_output(config_.artifact_path("thresholds"), config_, "search");
  write_thresholds(out, table, *dataset().vocabulary);
  return table;
}

std::vector<PredictionBlock> Pipeline::apply() {
  ApplyOptions options;
  if (!parse_aggregation(config_.get("aggregation"), options.aggregation)) {
    throw ConfigError("aggregation: expected max, noisyor, nrno or vs, got '" +
                      config_.get("aggregation") + "'");
  }
  const Split split = parse_split(config_.get("split"));
  options.top_k = config_.get_uint("top_k");
  options.limits = limits();
  options.threads = threads();

  const RuleSet rules = load_rules();
  std::optional<ThresholdTable> thresholds;
  std::optional<RuleSignatures> sigs;
  if (options.aggregation == Aggregation::kNonRedundantNoisyOr) {
    const auto path = config_.artifact_path("thresholds");
    if (!std::filesystem::exists(path)) throw MissingArtifact(path.string(), "search");
    thresholds = load_thresholds(path, *dataset().vocabulary);
    sigs = load_checked_signatures(rules);
  }
  std::vector<PredictionBlock> blocks =
      predict(dataset(), split, rules, options, thresholds ? &*thresholds : nullptr,
              sigs ? &*sigs : nullptr);
  auto out = open_output(config_.artifact_path("predictions"), config_, "apply");
  write_predictions(out, blocks, *dataset().vocabulary);
  return blocks;
}

EvalReport Pipeline::eval() {
  TiePolicy policy;
  if (!parse_tie_policy(config_.get("policy"), policy)) {
    throw ConfigError("policy: expected top, bottom, average, ordinal or random, got '" +
                      config_.get("policy") + "'");
  }
  const auto path = config_.artifact_path("predictions");
  if (!std::filesystem::exists(path)) throw MissingArtifact(path.string(), "apply");
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  const Vocabulary& vocabulary = *dataset().vocabulary;
  const std::vector<PredictionBlock> blocks = read_predictions(in, vocabulary);
  EvalReport report = evaluate_predictions(blocks, policy, config_.get_uint("seed"));
  auto out = open_output(config_.artifact_path("report"), config_, "eval");
  write_report(out, report, vocabulary);
  return report;
}

}  // namespace kgr
