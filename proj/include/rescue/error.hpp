#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rescue {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A single malformed input record. Ingest treats it as recoverable.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Fatal input/output failure: unreadable stream, missing file.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Fatal failure loading a data file (gazetteer, lexicon, labelled corpus).
class LoadError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rescue
