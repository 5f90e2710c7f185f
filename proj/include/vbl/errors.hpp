#ifndef VBL_ERRORS_HPP
#define VBL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vbl {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Expression parsing failed; `offset` is the byte offset of the offending token.
class SyntaxError : public Error {
public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  std::size_t offset;
};

// Evaluation outside the domain of a subexpression (division by zero,
// ln/sqrt of a non-positive argument, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
public:
  using Error::Error;
};

class NonFiniteState : public Error {
public:
  using Error::Error;
};

class NoEventBeforeZMax : public Error {
public:
  using Error::Error;
};

class InvalidInterval : public Error {
public:
  using Error::Error;
};

class NoSignChange : public Error {
public:
  using Error::Error;
};

class ModelConstructionError : public Error {
public:
  using Error::Error;
};

class NoBracketFound : public Error {
public:
  using Error::Error;
};

class NonPositiveGPrime0 : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class NoHomoclinicBracket : public Error {
public:
  using Error::Error;
};

class NoLimitCycle : public Error {
public:
  using Error::Error;
};

class OutsideConsistentSplitting : public Error {
public:
  using Error::Error;
};

class NoUnstableEigenvalueFound : public Error {
public:
  using Error::Error;
};

}  // namespace vbl

#endif
