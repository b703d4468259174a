#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace kgr {

struct NamedTriple {
  std::string head;
  std::string relation;
  std::string tail;
  friend auto operator<=>(const NamedTriple&, const NamedTriple&) = default;
};

struct NamedSplits {
  std::vector<NamedTriple> train;
  std::vector<NamedTriple> valid;
  std::vector<NamedTriple> test;
};

// A small people/countries/languages graph with two planted signals.
//
// Every person lives in one country and every country has one official
// language; each person speaks the official language of their country, so
// speaks(X,Y) <= lives(X,A), lang(A,Y) holds exactly on train. Each person
// also learns one other language and speaks it. `held_out` of these learned
// speaks facts are split evenly between valid and test, the rest stay in
// train, where speaks(X,Y) <= learns(X,Y) then ranks the held-out ones
// first. Valid and test facts come from disjoint halves of the languages.
//
// Defaults give 40 persons, 10 countries and 10 languages. Persons sharing
// a country learn distinct languages, which needs `countries` to exceed the
// number of persons per country.
struct PlantedOptions {
  std::size_t persons = 40;
  std::size_t countries = 10;  // also the number of languages
  std::size_t held_out = 12;
  std::uint64_t seed = 7;
};

NamedSplits planted_dataset(const PlantedOptions& options = {});

// Writes train.txt, valid.txt and test.txt into `dir`.
void write_named_splits(const std::filesystem::path& dir, const NamedSplits& splits);

}  // namespace kgr
