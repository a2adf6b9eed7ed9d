#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lienard {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the 0-based byte position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Identifier that is neither the declared variable nor a known function.
class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& name, std::size_t offset)
      : ParseError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// Evaluation outside the definition domain (log of a negative, x/0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid model parameters or a model that fails validation.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Numerical procedure could not produce a result (no crossings, no convergence, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace lienard
