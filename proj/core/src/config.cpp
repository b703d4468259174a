#include "kgr/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>

#include "kgr/error.hpp"
#include "kgr/hashing.hpp"

namespace kgr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

const std::map<std::string, std::string>& Config::defaults() {
  static const std::map<std::string, std::string> kDefaults{
      {"train", "train.txt"},
      {"valid", "valid.txt"},
      {"test", "test.txt"},
      {"workdir", "."},
      {"rules", "rules.txt"},
      {"signatures", "signatures.bin"},
      {"thresholds", "thresholds.txt"},
      {"predictions", "predictions.txt"},
      {"report", "report.txt"},
      {"seed", "42"},
      {"threads", "0"},
      {"top_k", "100"},
      {"minhash_k", "256"},
      {"max_groundings", "100000"},
      {"indexing", "both"},
      {"mine_paths", "20000"},
      {"mine_seconds", "10"},
      {"max_length_cyclic", "3"},
      {"max_length_acyclic", "1"},
      {"reflexive", "false"},
      {"min_predicted", "2"},
      {"min_confidence", "0.0001"},
      {"strategy", "random"},
      {"grid_steps", "200"},
      {"random_levels", "10"},
      {"random_iterations", "10000"},
      {"random_continuous", "false"},
      {"aggregation", "nrno"},
      {"split", "test"},
      {"policy", "average"},
  };
  return kDefaults;
}

Config::Config() : values_(defaults()) {}

Config Config::parse(std::istream& in, const std::filesystem::path& base_dir) {
  Config config;
  config.base_dir_ = base_dir;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string_view key = trim(text.substr(0, eq));
    try {
      config.set(key, std::string(trim(text.substr(eq + 1))));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse(in, path.parent_path().empty() ? "." : path.parent_path());
}

const std::string& Config::get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  return it->second;
}

void Config::set(std::string_view key, std::string value) {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  it->second = std::move(value);
}

std::uint64_t Config::get_uint(std::string_view key) const {
  const std::string& v = get(key);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" +
                      v + "'");
  }
  return out;
}

double Config::get_double(std::string_view key) const {
  const std::string& v = get(key);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + v + "'");
  }
  return out;
}

bool Config::get_bool(std::string_view key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + v + "'");
}

std::filesystem::path Config::dataset_path(std::string_view key) const {
  const std::filesystem::path p = get(key);
  return p.is_absolute() ? p : base_dir_ / p;
}

std::filesystem::path Config::artifact_path(std::string_view key) const {
  const std::filesystem::path p = get(key);
  if (p.is_absolute()) return p;
  return dataset_path("workdir") / p;
}

std::uint64_t Config::hash() const {
  std::uint64_t h = fnv1a("");
  for (const auto& [key, value] : values_) {
    if (key == "threads") continue;
    h = fnv1a(key, h);
    h = fnv1a("=", h);
    h = fnv1a(value, h);
    h = fnv1a("\n", h);
  }
  return h;
}

std::string output_header(const Config& config, std::string_view stage) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config.hash()));
  std::string out;
  out += "# kgr " + std::string(kToolVersion) + "\n";
  out += "# stage: " + std::string(stage) + "\n";
  out += "# config-hash: " + std::string(hash) + "\n";
  out += "# seed: " + config.get("seed") + "\n";
  return out;
}

}  // namespace kgr
