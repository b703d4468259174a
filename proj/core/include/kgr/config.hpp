#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace kgr {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Pipeline settings read from `key=value` lines. Blank lines and lines
// starting with '#' are ignored. Every key has a default; unknown keys are
// rejected so typos do not pass silently.
//
// Dataset paths resolve against the config file's directory; artifact
// paths (rules, signatures, ...) resolve against `workdir`.
class Config {
 public:
  Config();

  static Config parse(std::istream& in, const std::filesystem::path& base_dir = ".");
  static Config load(const std::filesystem::path& path);

  static const std::map<std::string, std::string>& defaults();

  const std::string& get(std::string_view key) const;
  void set(std::string_view key, std::string value);

  std::uint64_t get_uint(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;

  std::filesystem::path dataset_path(std::string_view key) const;
  std::filesystem::path artifact_path(std::string_view key) const;

  // FNV-1a over the effective settings, excluding `threads`, so output
  // written with any thread count carries the same hash.
  std::uint64_t hash() const;

  const std::map<std::string, std::string>& values() const noexcept {
    return values_;
  }

 private:
  std::filesystem::path base_dir_ = ".";
  std::map<std::string, std::string> values_;
};

// Comment block starting every output file.
std::string output_header(const Config& config, std::string_view stage);

}  // namespace kgr
