#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lplra {

// Input file could not be parsed. CLI maps this to exit code 1.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

// An algorithm declined to run (budget guard, unsupported mode, ...).
// CLI maps this to exit code 2.
class RefusalError : public std::runtime_error {
public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lplra
