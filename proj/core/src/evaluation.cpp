#include "kgr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "kgr/hashing.hpp"
#include "kgr/rule.hpp"

namespace kgr {

std::string_view to_string(TiePolicy p) noexcept {
  switch (p) {
    case TiePolicy::kTop:
      return "top";
    case TiePolicy::kBottom:
      return "bottom";
    case TiePolicy::kAverage:
      return "average";
    case TiePolicy::kOrdinal:
      return "ordinal";
    case TiePolicy::kRandom:
      return "random";
  }
  return "?";
}

bool parse_tie_policy(std::string_view text, TiePolicy& out) noexcept {
  for (TiePolicy p : kAllTiePolicies) {
    if (text == to_string(p)) {
      out = p;
      return true;
    }
  }
  return false;
}

double rank_of(EntityId target, std::span<const RankedCandidate> ranking,
               TiePolicy policy, std::mt19937_64& rng) {
  auto it = std::find_if(ranking.begin(), ranking.end(),
                         [&](const RankedCandidate& c) { return c.entity == target; });
  if (it == ranking.end()) return kUnranked;
  const auto pos = static_cast<std::size_t>(it - ranking.begin());
  const double score = it->score;
  std::size_t lo = pos;
  while (lo > 0 && ranking[lo - 1].score == score) --lo;
  std::size_t hi = pos + 1;
  while (hi < ranking.size() && ranking[hi].score == score) ++hi;

  switch (policy) {
    case TiePolicy::kTop:
      return static_cast<double>(lo + 1);
    case TiePolicy::kBottom:
      return static_cast<double>(hi);
    case TiePolicy::kAverage:
      return static_cast<double>(lo + 1 + hi) / 2.0;
    case TiePolicy::kOrdinal:
      return static_cast<double>(pos + 1);
    case TiePolicy::kRandom: {
      std::uniform_int_distribution<std::size_t> pick(lo + 1, hi);
      return static_cast<double>(pick(rng));
    }
  }
  return kUnranked;
}

std::optional<double> mrr(std::span<const double> ranks) {
  if (ranks.empty()) return std::nullopt;
  double sum = 0.0;
  for (double r : ranks) sum += std::isinf(r) ? 0.0 : 1.0 / r;
  return sum / static_cast<double>(ranks.size());
}

std::optional<double> hits_at(std::span<const double> ranks, double k) {
  if (ranks.empty()) return std::nullopt;
  std::size_t hits = 0;
  for (double r : ranks) hits += r <= k;
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

std::vector<EntityId> build_filter(RelationId relation, Direction direction,
                                   EntityId known, EntityId target,
                                   std::span<const KnowledgeGraph* const> splits) {
  std::vector<EntityId> out;
  for (const KnowledgeGraph* g : splits) {
    if (relation >= g->num_relations() || known >= g->num_entities()) continue;
    auto answers = direction == Direction::kTail ? g->tails_of(known, relation)
                                                 : g->heads_of(known, relation);
    out.insert(out.end(), answers.begin(), answers.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), target), out.end());
  return out;
}

std::vector<PredictionTask> make_tasks(
    const KnowledgeGraph& queries,
    std::span<const KnowledgeGraph* const> filter_splits) {
  std::vector<PredictionTask> tasks;
  tasks.reserve(queries.size() * 2);
  for (const Triple& t : queries.triples()) {
    PredictionTask tail{t.relation, Direction::kTail, t.head, t.tail, {}};
    tail.filter = build_filter(t.relation, Direction::kTail, t.head, t.tail,
                               filter_splits);
    PredictionTask head{t.relation, Direction::kHead, t.tail, t.head, {}};
    head.filter = build_filter(t.relation, Direction::kHead, t.tail, t.head,
                               filter_splits);
    tasks.push_back(std::move(tail));
    tasks.push_back(std::move(head));
  }
  return tasks;
}

Metrics summarize(std::span<const double> ranks) {
  Metrics m;
  m.tasks = ranks.size();
  if (ranks.empty()) return m;
  m.mrr = *mrr(ranks);
  m.hits1 = *hits_at(ranks, 1);
  m.hits3 = *hits_at(ranks, 3);
  m.hits10 = *hits_at(ranks, 10);
  return m;
}

EvalReport evaluate(std::span<const RankedTask> tasks, TiePolicy policy,
                    std::uint64_t seed) {
  EvalReport report;
  report.policy = policy;
  report.tasks = tasks.size();

  std::map<TiePolicy, std::vector<double>> ranks;
  std::map<Direction, std::vector<double>> by_direction;
  std::map<RelationDirection, std::vector<double>> by_relation;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const RankedTask& task = tasks[i];
    std::mt19937_64 rng(combine_seed(seed, i));
    for (TiePolicy p : kAllTiePolicies) {
      const double r = rank_of(task.target, task.ranking, p, rng);
      ranks[p].push_back(r);
      if (p == policy) {
        by_direction[task.direction].push_back(r);
        by_relation[{task.relation, task.direction}].push_back(r);
      }
    }
  }
  for (TiePolicy p : kAllTiePolicies) report.overall[p] = summarize(ranks[p]);
  for (auto& [d, rs] : by_direction) report.by_direction[d] = summarize(rs);
  for (auto& [k, rs] : by_relation) report.by_relation[k] = summarize(rs);
  return report;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

void table_row(std::ostream& out, std::string_view label, const Metrics& m,
               std::size_t width) {
  std::string name(label);
  name.resize(std::max(width, name.size()), ' ');
  char count[24];
  std::snprintf(count, sizeof count, "%8zu", m.tasks);
  out << name << count << "  " << fixed(m.mrr) << "  " << fixed(m.hits1)
      << "  " << fixed(m.hits3) << "  " << fixed(m.hits10) << '\n';
}

void key_values(std::ostream& out, const std::string& prefix, const Metrics& m) {
  out << prefix << ".tasks=" << m.tasks << '\n'
      << prefix << ".mrr=" << format_double(m.mrr) << '\n'
      << prefix << ".hits@1=" << format_double(m.hits1) << '\n'
      << prefix << ".hits@3=" << format_double(m.hits3) << '\n'
      << prefix << ".hits@10=" << format_double(m.hits10) << '\n';
}

}  // namespace

void write_report(std::ostream& out, const EvalReport& report,
                  const Vocabulary& vocabulary) {
  std::size_t width = 10;
  for (const auto& [key, m] : report.by_relation) {
    width = std::max(width, vocabulary.relations.name(key.relation).size() + 6);
  }
  auto header = [&](std::string_view title) {
    std::string name(title);
    name.resize(std::max(width, name.size()), ' ');
    out << name << "   tasks  MRR     Hits@1  Hits@3  Hits@10\n";
  };

  header("policy");
  for (const auto& [p, m] : report.overall) table_row(out, to_string(p), m, width);
  out << '\n';
  header("direction");
  for (const auto& [d, m] : report.by_direction) table_row(out, to_string(d), m, width);
  out << '\n';
  header("relation");
  for (const auto& [key, m] : report.by_relation) {
    table_row(out,
              vocabulary.relations.name(key.relation) + " " +
                  std::string(to_string(key.direction)),
              m, width);
  }
  out << '\n';

  out << "tasks=" << report.tasks << '\n';
  out << "policy=" << to_string(report.policy) << '\n';
  for (const auto& [p, m] : report.overall) {
    key_values(out, "overall." + std::string(to_string(p)), m);
  }
  for (const auto& [d, m] : report.by_direction) {
    key_values(out, "direction." + std::string(to_string(d)), m);
  }
  for (const auto& [key, m] : report.by_relation) {
    key_values(out,
               "relation." + vocabulary.relations.name(key.relation) + "." +
                   std::string(to_string(key.direction)),
               m);
  }
}

}  // namespace kgr
