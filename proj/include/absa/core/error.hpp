#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace absa {

/// Shape disagreement between operands.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside an operation's domain (empty input, non-scalar loss, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Broken internal contract, e.g. an optimizer step without gradients.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed input file. `line()` is 1-based; 0 when the error is not tied to a line.
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& reason)
      : std::runtime_error(format(path, line, reason)), line_(line), reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  static std::string format(const std::string& path, std::size_t line, const std::string& reason) {
    std::string msg = path;
    if (line > 0) msg += ": line " + std::to_string(line);
    msg += ": " + reason;
    return msg;
  }

  std::size_t line_;
  std::string reason_;
};

/// Checkpoint that cannot be loaded or does not fit the data it is used with.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace absa
