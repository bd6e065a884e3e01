#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cone {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input record; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A metric is undefined on its input (e.g. density of a singleton community).
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Archive corruption, version or shape mismatch.
class ArchiveError : public Error {
 public:
  using Error::Error;
};

void warn(const std::string& message);

}  // namespace cone
