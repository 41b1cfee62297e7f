#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckforms {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression or fixture text. `offset` is the byte offset into
/// the parsed text (or the line number for line-oriented fixture files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation left the domain of a subterm (division by zero, sqrt or log of
/// a negative number, overflow), or a point lies outside a chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Degree, dimension or index out of the admissible range, or operands that
/// live on different charts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An identity was requested on a chart or form that does not satisfy its
/// hypothesis.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Kernel counting could not separate retained from dropped singular values.
class IndeterminateGap : public Error {
 public:
  using Error::Error;
};

/// A result violated an internal consistency law (never a user error).
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ckforms
