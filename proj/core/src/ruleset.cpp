#include "kgr/ruleset.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "kgr/error.hpp"

namespace kgr {

RuleSet::RuleSet(std::vector<Rule> rules, AcyclicIndexing indexing)
    : rules_(std::move(rules)), indexing_(indexing) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    for (Direction d : {Direction::kHead, Direction::kTail}) {
      if (answers(rules_[i], d, indexing_)) {
        groups_[{rules_[i].relation(), d}].push_back(
            static_cast<std::uint32_t>(i));
      }
    }
  }
}

bool RuleSet::answers(const Rule& rule, Direction direction,
                      AcyclicIndexing indexing) noexcept {
  if (rule.type() == RuleType::kC) return true;
  if (indexing == AcyclicIndexing::kBothSlots) return true;
  return rule.chain_origin() == direction;
}

std::span<const std::uint32_t> RuleSet::group(RelationId relation,
                                              Direction direction) const {
  auto it = groups_.find({relation, direction});
  if (it == groups_.end()) return {};
  return it->second;
}

std::vector<RelationDirection> RuleSet::groups() const {
  std::vector<RelationDirection> keys;
  keys.reserve(groups_.size());
  for (const auto& [key, members] : groups_) keys.push_back(key);
  return keys;
}

namespace {

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
  T value{};
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(std::string("invalid ") + what + " '" +
                         std::string(field) + "'",
                     line_no);
  }
  return value;
}

}  // namespace

RuleSet read_ruleset(std::istream& in, const Vocabulary& vocabulary,
                     const RuleFileOptions& options, RuleFileReport* report) {
  std::vector<Rule> rules;
  RuleFileReport counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;

    std::string_view rest = line;
    std::string_view fields[3];
    for (auto& field : fields) {
      const std::size_t tab = rest.find('\t');
      if (tab == std::string_view::npos) {
        throw ParseError("expected 4 tab-separated fields", line_no);
      }
      field = rest.substr(0, tab);
      rest.remove_prefix(tab + 1);
    }
    const auto predicted =
        parse_number<std::uint64_t>(fields[0], line_no, "predicted count");
    const auto correct =
        parse_number<std::uint64_t>(fields[1], line_no, "correct count");
    const auto confidence = parse_number<double>(fields[2], line_no, "confidence");
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
      throw FormatError("confidence outside [0,1]", line_no);
    }
    if (correct > predicted) {
      throw FormatError("correct count exceeds predicted count", line_no);
    }

    try {
      Rule rule = parse_rule(rest, vocabulary);
      rule.set_stats({predicted, correct}, confidence);
      rules.push_back(std::move(rule));
      ++counts.loaded;
    } catch (const ResolutionError& e) {
      if (!options.skip_unsupported) throw ParseError(e.what(), line_no);
      ++counts.skipped;
    } catch (const ClassificationError& e) {
      if (!options.skip_unsupported) throw ParseError(e.what(), line_no);
      ++counts.skipped;
    } catch (const ParseError& e) {
      if (!options.skip_unsupported) throw ParseError(e.what(), line_no);
      ++counts.skipped;
    }
  }
  if (report) *report = counts;
  return RuleSet(std::move(rules), options.indexing);
}

RuleSet load_ruleset(const std::filesystem::path& path,
                     const Vocabulary& vocabulary,
                     const RuleFileOptions& options, RuleFileReport* report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return read_ruleset(in, vocabulary, options, report);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_ruleset(std::ostream& out, const RuleSet& rules,
                   const Vocabulary& vocabulary) {
  for (const Rule& rule : rules.rules()) {
    const RuleStats stats = rule.stats().value_or(RuleStats{});
    out << stats.predicted << '\t' << stats.correct << '\t'
        << format_double(rule.confidence()) << '\t'
        << serialize_rule(rule, vocabulary) << '\n';
  }
}

void save_ruleset(const std::filesystem::path& path, const RuleSet& rules,
                  const Vocabulary& vocabulary, std::string_view header) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << header;
  write_ruleset(out, rules, vocabulary);
}

}  // namespace kgr
