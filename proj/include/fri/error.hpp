#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fri {

// Malformed input file content; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

// An indicator cannot be computed for structural reasons (e.g. the graph set
// gives every pair the same edge density). Reports record these as
// not-applicable rather than as failures.
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fri
