#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace varsig {

// Base class for every error thrown by the library. `where` carries a
// machine-readable locator (field path, step index, signal value) that the
// CLI forwards into its error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string where, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), where_(std::move(where)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& where() const noexcept { return where_; }

 private:
  std::string code_;
  std::string where_;
};

// A scalar argument violated its domain (nonpositive variance, fractional
// count, mass outside [0,1], ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message, std::string where = "-")
      : Error("DOMAIN", std::move(where), message) {}
};

// A state-to-variance mapping returned a negative value.
class NegativeVariance : public Error {
 public:
  explicit NegativeVariance(const std::string& message, std::string where = "-")
      : Error("NEGATIVE_VARIANCE", std::move(where), message) {}
};

// The requested signal carries no information (infinite variance); the
// caller must skip the update instead of sampling.
class NoInformation : public Error {
 public:
  explicit NoInformation(const std::string& message, std::string where = "-")
      : Error("NO_INFORMATION", std::move(where), message) {}
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& message, std::string where = "-")
      : Error("EMPTY_INPUT", std::move(where), message) {}
};

// Nearly all posterior mass sits on floored-variance nodes: the posterior is
// either non-integrable or point-identified, and normalizing it would report
// noise as shape.
class DegeneratePosterior : public Error {
 public:
  explicit DegeneratePosterior(const std::string& message, std::string where = "-")
      : Error("DEGENERATE_POSTERIOR", std::move(where), message) {}
};

// Every regime assigns zero likelihood to the observed signal.
class ZeroEvidence : public Error {
 public:
  explicit ZeroEvidence(const std::string& message, std::string where = "-")
      : Error("ZERO_EVIDENCE", std::move(where), message) {}
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& message, std::string where = "-")
      : Error("INDEX", std::move(where), message) {}
};

// Config text is not well-formed JSON.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string where = "-")
      : Error("PARSE", std::move(where), message) {}
};

// Config is well-formed but violates the schema; `where` is the first
// offending field path, the message lists every issue found.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message, std::string where = "-")
      : Error("VALIDATION", std::move(where), message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message, std::string where = "-")
      : Error("IO", std::move(where), message) {}
};

}  // namespace varsig
