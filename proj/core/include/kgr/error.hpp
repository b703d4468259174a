#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. line() is 1-based, 0 when not tied to a file line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed syntax carrying values outside their allowed range.
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

// A token could not be mapped to a dictionary id.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// A rule whose structure matches none of the supported rule types.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

// An id outside the dictionary range.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke an operation precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Unknown key or unparsable value in a pipeline config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage could not find the artifact produced by an earlier stage.
class MissingArtifact : public Error {
 public:
  MissingArtifact(const std::string& path, const std::string& producer)
      : Error("missing " + path + " (run `" + producer + "` first)"),
        producer_(producer) {}
  const std::string& producer() const noexcept { return producer_; }

 private:
  std::string producer_;
};

}  // namespace kgr
