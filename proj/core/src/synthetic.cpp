#include "kgr/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "kgr/error.hpp"

namespace kgr {

namespace {

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
  return buf;
}

}  // namespace

NamedSplits planted_dataset(const PlantedOptions& options) {
  const std::size_t n = options.countries;
  if (n < 2 || options.persons == 0) {
    throw ContractViolation("planted dataset needs persons and at least two countries");
  }
  const std::size_t per_country = (options.persons + n - 1) / n;
  if (per_country >= n) {
    throw ContractViolation("too many persons per country for distinct learned languages");
  }

  NamedSplits out;
  std::vector<NamedTriple> learned;
  for (std::size_t c = 0; c < n; ++c) {
    out.train.push_back({numbered("country", c), "lang", numbered("language", c)});
  }
  for (std::size_t p = 0; p < options.persons; ++p) {
    const std::size_t country = p % n;
    const std::size_t slot = p / n;
    const std::size_t learns = (country + 1 + slot) % n;
    const std::string person = numbered("person", p);
    out.train.push_back({person, "lives", numbered("country", country)});
    out.train.push_back({person, "speaks", numbered("language", country)});
    out.train.push_back({person, "learns", numbered("language", learns)});
    learned.push_back({person, "speaks", numbered("language", learns)});
  }

  // Valid and test draw from disjoint halves of the languages. Otherwise a
  // held-out test fact would look like a wrong answer to a validation query
  // about the same language, since validation filters with train and valid
  // only.
  std::mt19937_64 rng(options.seed);
  std::vector<std::string> languages;
  for (std::size_t c = 0; c < n; ++c) languages.push_back(numbered("language", c));
  std::shuffle(languages.begin(), languages.end(), rng);
  const std::set<std::string> valid_languages(languages.begin(),
                                              languages.begin() + static_cast<std::ptrdiff_t>(n / 2));
  std::vector<NamedTriple> valid_pool, test_pool;
  for (NamedTriple& t : learned) {
    (valid_languages.count(t.tail) ? valid_pool : test_pool).push_back(std::move(t));
  }
  const std::size_t valid_count = options.held_out / 2;
  const std::size_t test_count = options.held_out - valid_count;
  if (valid_count > valid_pool.size() || test_count > test_pool.size()) {
    throw ContractViolation("cannot hold out that many learned facts");
  }
  std::shuffle(valid_pool.begin(), valid_pool.end(), rng);
  std::shuffle(test_pool.begin(), test_pool.end(), rng);
  const auto vc = static_cast<std::ptrdiff_t>(valid_count);
  const auto tc = static_cast<std::ptrdiff_t>(test_count);
  out.valid.assign(valid_pool.begin(), valid_pool.begin() + vc);
  out.test.assign(test_pool.begin(), test_pool.begin() + tc);
  out.train.insert(out.train.end(), valid_pool.begin() + vc, valid_pool.end());
  out.train.insert(out.train.end(), test_pool.begin() + tc, test_pool.end());

  std::sort(out.train.begin(), out.train.end());
  std::sort(out.valid.begin(), out.valid.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

void write_named_splits(const std::filesystem::path& dir, const NamedSplits& splits) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::vector<NamedTriple>& triples) {
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    for (const auto& t : triples) {
      out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
    }
  };
  write("train.txt", splits.train);
  write("valid.txt", splits.valid);
  write("test.txt", splits.test);
}

}  // namespace kgr
