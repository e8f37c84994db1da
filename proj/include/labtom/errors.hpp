#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace labtom {

/// Base class for every error raised while reading or interpreting ELoT text.
class ElotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public ElotError {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found);

  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

class TypeError : public ElotError {
 public:
  TypeError(std::string op, std::string expected, std::string actual);

  const std::string& op() const { return op_; }
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  std::string op_, expected_, actual_;
};

/// Unknown predicate, wrong arity, unknown object or unbound variable.
class UnknownSymbolError : public ElotError {
 public:
  using ElotError::ElotError;
};

class LoweringError : public ElotError {
 public:
  using ElotError::ElotError;
};

/// Malformed scenario, statement, ratings or threshold files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidActionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No hypothesis explains the observed actions and percepts.
class DegeneratePosteriorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace labtom
