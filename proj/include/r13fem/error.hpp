#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace r13 {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression string; `offset` is the byte position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& msg, int line = 0, std::string section = {})
      : Error(format(msg, line, section)), line_(line), section_(std::move(section)) {}
  int line() const noexcept { return line_; }
  const std::string& section() const noexcept { return section_; }

 private:
  static std::string format(const std::string& msg, int line, const std::string& section) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!section.empty()) out += "[" + section + "] ";
    return out + msg;
  }
  int line_;
  std::string section_;
};

}  // namespace r13
