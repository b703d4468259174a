#include "kgr/rule.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <set>

#include "kgr/error.hpp"

namespace kgr {

std::string_view to_string(RuleType type) noexcept {
  switch (type) {
    case RuleType::kC:
      return "C";
    case RuleType::kAC1:
      return "AC1";
    case RuleType::kAC2:
      return "AC2";
  }
  return "?";
}

namespace {

struct ChainWalk {
  std::vector<ChainStep> steps;
  Term terminal = Term::variable('?');
};

// Follows the body from `start`, atom by atom in list order (or reversed).
// Every interior term must be a variable not seen before; `reserved` holds
// the head variables.
std::optional<ChainWalk> walk_chain(std::span<const Atom> body, Term start,
                                    bool reversed,
                                    const std::set<char>& reserved) {
  ChainWalk walk;
  std::set<char> seen = reserved;
  Term current = start;
  const std::size_t n = body.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& atom = reversed ? body[n - 1 - i] : body[i];
    const bool at_first = atom.first == current;
    const bool at_second = atom.second == current;
    if (at_first == at_second) return std::nullopt;
    const Term next = at_first ? atom.second : atom.first;
    walk.steps.push_back({atom.relation, at_first});
    if (i + 1 < n) {
      if (!next.is_variable() || !seen.insert(next.name()).second) {
        return std::nullopt;
      }
    } else if (next.is_variable() && seen.contains(next.name()) &&
               !reserved.contains(next.name())) {
      return std::nullopt;  // the chain may not loop back into itself
    }
    current = next;
  }
  walk.terminal = current;
  return walk;
}

char fresh_variable(std::size_t index) {
  // X and Y are reserved for head variables.
  static constexpr std::string_view kLetters = "ABCDEFGHIJKLMNOPQRSTUVWZ";
  if (index >= kLetters.size()) {
    throw ClassificationError("rule body too long to name its variables");
  }
  return kLetters[index];
}

}  // namespace

Rule::Rule(Atom head, std::vector<Atom> body)
    : head_(head), body_(std::move(body)) {
  if (body_.empty()) throw ClassificationError("rule has an empty body");
  const Term& a = head_.first;
  const Term& b = head_.second;

  if (a.is_variable() && b.is_variable()) {
    if (a == b) throw ClassificationError("head repeats one variable");
    const std::set<char> reserved{a.name(), b.name()};
    for (Direction origin : {Direction::kHead, Direction::kTail}) {
      const Term start = head_.slot(origin);
      const Term end = head_.slot(opposite(origin));
      for (bool reversed : {false, true}) {
        auto walk = walk_chain(body_, start, reversed, reserved);
        if (walk && walk->terminal == end) {
          type_ = RuleType::kC;
          origin_ = origin;
          chain_ = std::move(walk->steps);
          return;
        }
      }
    }
    throw ClassificationError(
        "body does not connect the two head variables through a chain");
  }

  if (a.is_constant() && b.is_constant()) {
    throw ClassificationError("head has no variable");
  }

  origin_ = a.is_variable() ? Direction::kHead : Direction::kTail;
  const Term start = head_.slot(origin_);
  const std::set<char> reserved{start.name()};
  for (bool reversed : {false, true}) {
    auto walk = walk_chain(body_, start, reversed, reserved);
    if (!walk) continue;
    if (walk->terminal.is_constant()) {
      type_ = RuleType::kAC1;
      terminal_ = walk->terminal.entity();
    } else if (walk->terminal != start) {
      type_ = RuleType::kAC2;
    } else {
      continue;
    }
    chain_ = std::move(walk->steps);
    return;
  }
  throw ClassificationError(
      "body is not a chain starting at the head variable");
}

void Rule::set_stats(RuleStats stats) {
  if (stats.correct > stats.predicted) {
    throw ContractViolation("correct count exceeds predicted count");
  }
  stats_ = stats;
  confidence_ = stats.predicted == 0
                    ? 0.0
                    : static_cast<double>(stats.correct) /
                          static_cast<double>(stats.predicted);
}

void Rule::set_stats(RuleStats stats, double confidence) {
  if (stats.correct > stats.predicted) {
    throw ContractViolation("correct count exceeds predicted count");
  }
  stats_ = stats;
  confidence_ = confidence;
}

std::optional<EntityId> Rule::head_constant() const noexcept {
  if (type_ == RuleType::kC) return std::nullopt;
  return head_.slot(opposite(origin_)).entity();
}

Rule Rule::canonical() const {
  std::vector<ChainStep> steps = chain_;
  Direction origin = origin_;
  if (type_ == RuleType::kC && origin == Direction::kTail) {
    std::reverse(steps.begin(), steps.end());
    for (auto& s : steps) s.forward = !s.forward;
    origin = Direction::kHead;
  }

  const Term head_var =
      Term::variable(origin == Direction::kHead ? 'X' : 'Y');
  Atom head;
  head.relation = head_.relation;
  if (type_ == RuleType::kC) {
    head.first = Term::variable('X');
    head.second = Term::variable('Y');
  } else if (origin == Direction::kHead) {
    head.first = head_var;
    head.second = head_.second;
  } else {
    head.first = head_.first;
    head.second = head_var;
  }

  std::vector<Atom> body;
  body.reserve(steps.size());
  Term current = head_var;
  std::size_t fresh = 0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    Term next = Term::variable('?');
    if (i + 1 < steps.size()) {
      next = Term::variable(fresh_variable(fresh++));
    } else if (type_ == RuleType::kC) {
      next = Term::variable('Y');
    } else if (type_ == RuleType::kAC1) {
      next = Term::constant(*terminal_);
    } else {
      next = Term::variable(fresh_variable(fresh++));
    }
    Atom atom;
    atom.relation = steps[i].relation;
    atom.first = steps[i].forward ? current : next;
    atom.second = steps[i].forward ? next : current;
    body.push_back(atom);
    current = next;
  }

  Rule out(head, std::move(body));
  out.confidence_ = confidence_;
  out.stats_ = stats_;
  return out;
}

std::string Rule::structure_key() const {
  const Rule c = canonical();
  std::string key;
  auto term = [&key](const Term& t) {
    if (t.is_variable()) {
      key += t.name();
    } else {
      key += '#';
      key += std::to_string(t.entity());
    }
  };
  auto atom = [&](const Atom& a) {
    key += std::to_string(a.relation);
    key += '(';
    term(a.first);
    key += ',';
    term(a.second);
    key += ')';
  };
  atom(c.head_);
  key += "<=";
  for (const Atom& a : c.body_) atom(a);
  return key;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_variable_token(std::string_view s) {
  return s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z';
}

using EntityResolver = std::function<EntityId(std::string_view)>;
using RelationResolver = std::function<RelationId(std::string_view)>;

Term parse_term(std::string_view token, const EntityResolver& entity) {
  token = trim(token);
  if (token.empty()) throw ParseError("empty term");
  if (is_variable_token(token)) return Term::variable(token[0]);
  return Term::constant(entity(token));
}

Atom parse_atom(std::string_view text, const EntityResolver& entity,
                const RelationResolver& relation) {
  text = trim(text);
  const std::size_t open = text.find('(');
  if (open == std::string_view::npos || open == 0 || text.back() != ')') {
    throw ParseError("malformed atom '" + std::string(text) + "'");
  }
  Atom atom;
  atom.relation = relation(trim(text.substr(0, open)));
  const std::string_view args = text.substr(open + 1, text.size() - open - 2);

  // Entity names may contain commas, so a variable on either side anchors
  // the split before falling back to a unique comma.
  std::size_t comma = std::string_view::npos;
  if (args.size() >= 2 && is_variable_token(args.substr(0, 1)) &&
      args[1] == ',') {
    comma = 1;
  } else if (args.size() >= 2 && args[args.size() - 2] == ',' &&
             is_variable_token(args.substr(args.size() - 1))) {
    comma = args.size() - 2;
  } else {
    comma = args.find(',');
    if (comma == std::string_view::npos ||
        args.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("cannot split arguments of atom '" + std::string(text) +
                       "'");
    }
  }
  atom.first = parse_term(args.substr(0, comma), entity);
  atom.second = parse_term(args.substr(comma + 1), entity);
  return atom;
}

Rule parse_with(std::string_view text, const EntityResolver& entity,
                const RelationResolver& relation) {
  text = trim(text);
  const std::size_t arrow = text.find("<=");
  if (arrow == std::string_view::npos) throw ParseError("missing '<='");
  const Atom head = parse_atom(text.substr(0, arrow), entity, relation);

  std::string_view rest = trim(text.substr(arrow + 2));
  std::vector<Atom> body;
  while (!rest.empty()) {
    const std::size_t sep = rest.find("), ");
    if (sep == std::string_view::npos) {
      body.push_back(parse_atom(rest, entity, relation));
      break;
    }
    body.push_back(parse_atom(rest.substr(0, sep + 1), entity, relation));
    rest = trim(rest.substr(sep + 3));
  }
  return Rule(head, std::move(body));
}

}  // namespace

Rule parse_rule(std::string_view text, const Vocabulary& vocabulary) {
  return parse_with(
      text,
      [&](std::string_view name) {
        auto id = vocabulary.entities.find(name);
        if (!id) throw ResolutionError("unknown entity '" + std::string(name) + "'");
        return *id;
      },
      [&](std::string_view name) {
        auto id = vocabulary.relations.find(name);
        if (!id) {
          throw ResolutionError("unknown relation '" + std::string(name) + "'");
        }
        return *id;
      });
}

Rule parse_rule_extending(std::string_view text, Vocabulary& vocabulary) {
  return parse_with(
      text, [&](std::string_view name) { return vocabulary.entities.intern(name); },
      [&](std::string_view name) { return vocabulary.relations.intern(name); });
}

std::string serialize_rule(const Rule& rule, const Vocabulary& vocabulary) {
  std::string out;
  auto term = [&](const Term& t) {
    if (t.is_variable()) {
      out += t.name();
    } else {
      out += vocabulary.entities.name(t.entity());
    }
  };
  auto atom = [&](const Atom& a) {
    out += vocabulary.relations.name(a.relation);
    out += '(';
    term(a.first);
    out += ',';
    term(a.second);
    out += ')';
  };
  atom(rule.head());
  out += " <= ";
  bool first = true;
  for (const Atom& a : rule.body()) {
    if (!first) out += ", ";
    first = false;
    atom(a);
  }
  return out;
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace kgr
