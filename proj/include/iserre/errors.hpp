#pragma once

#include <stdexcept>
#include <string>

namespace iserre {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

class SpecializationPole : public Error {
 public:
  explicit SpecializationPole(const std::string& what) : Error("pole at q=1: " + what) {}
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(const std::string& what) : Error("unbound symbol: " + what) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParityMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class DegreeCapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace iserre
