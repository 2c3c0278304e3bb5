#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace soue {

/// Malformed or inconsistent input data.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A row of a text file that could not be parsed.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// An identifier that points at no known record.
class ReferenceError : public InputError {
 public:
  ReferenceError(const std::string& kind, const std::string& id, const std::string& where = {})
      : InputError((where.empty() ? std::string{} : where + ": ") + "unknown " + kind + " '" + id +
                   "'"),
        id_(id) {}

  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

/// Invalid parameters supplied by the caller.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace soue
