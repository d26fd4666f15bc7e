#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace causelog {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingFileError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Configuration is rejected with the offending key in the message.
class MalformedConfigError : public Error {
 public:
  MalformedConfigError(std::string key, const std::string& what)
      : Error("config [" + key + "]: " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class InvalidRegexError : public Error {
 public:
  InvalidRegexError(std::string pattern, const std::string& what)
      : Error("invalid regex '" + pattern + "': " + what),
        pattern_(std::move(pattern)) {}
  const std::string& pattern() const noexcept { return pattern_; }

 private:
  std::string pattern_;
};

class UnparseableTimestampError : public Error {
 public:
  explicit UnparseableTimestampError(std::string raw)
      : Error("unparseable timestamp: '" + raw + "'"), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

class UnknownLogTypeError : public Error {
 public:
  using Error::Error;
};

class EmptySampleError : public Error {
 public:
  using Error::Error;
};

class MissingTimeError : public Error {
 public:
  using Error::Error;
};

class CorruptGraphFileError : public Error {
 public:
  CorruptGraphFileError(std::size_t line, const std::string& what)
      : Error("graph file line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyGraphListError : public Error {
 public:
  using Error::Error;
};

class EmptyCandidatesError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

}  // namespace causelog
