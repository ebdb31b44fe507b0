#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subseg {

// Base class for all toolkit errors. Subclasses exist so callers can
// distinguish bad input data from bad arguments without parsing messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed UTF-8. byte_offset() is the offset of the first byte of the
// offending sequence within the decoded buffer or stream.
class DecodeError : public Error {
 public:
  DecodeError(const std::string& what, std::size_t byte_offset)
      : Error(what), byte_offset_(byte_offset) {}
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Candidate string does not occur in the corpus.
class AbsentCandidateError : public Error {
 public:
  using Error::Error;
};

// Candidate string is structurally unusable (empty, too short, contains
// whitespace).
class InvalidCandidateError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Exhaustive-search helpers refuse inputs past their hard length bound.
class OracleBoundError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between tensors or between parameters and vocabulary.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite value encountered. param() names the offending parameter.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::string param)
      : Error(what), param_(std::move(param)) {}
  const std::string& param() const noexcept { return param_; }

 private:
  std::string param_;
};

// Model file rejected. line() is the 1-based line number of the problem.
class ModelFormatError : public Error {
 public:
  ModelFormatError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace subseg
