#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmvrp {

// Root of every error thrown by the library. The CLI maps subclasses to
// distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownCustomerId : public Error {
 public:
  explicit UnknownCustomerId(std::int64_t id)
      : Error("unknown customer id " + std::to_string(id)), id_(id) {}
  std::int64_t id() const { return id_; }

 private:
  std::int64_t id_;
};

class NonPositiveOptimal : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// Errors raised while reading .vrp / .sol text. `line` is 1-based, 0 when the
// problem is not tied to a particular line (e.g. a missing section).
class ParseError : public Error {
 public:
  enum class Kind {
    kMalformedHeader,
    kDimensionMismatch,
    kMissingSection,
    kUnsupportedEdgeWeightType,
    kNonZeroDepotDemand,
    kMalformedRow,
    kMalformedRouteLine,
    kNoRoutes,
  };

  ParseError(Kind kind, int line, const std::string& what);

  Kind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  Kind kind_;
  int line_;
};

const char* to_string(ParseError::Kind kind);

class PromptError : public Error {
 public:
  enum class Kind { kEmptyExampleSet, kEmptyReport, kNoSolutionTag, kUnparseableRoute };

  PromptError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class InvalidIds : public Error {
 public:
  using Error::Error;
};

class Unservable : public Error {
 public:
  using Error::Error;
};

// Network / HTTP failure after the retry budget is spent.
class TransportError : public Error {
 public:
  using Error::Error;
};

class RateLimited : public TransportError {
 public:
  RateLimited(const std::string& what, double retry_after_seconds)
      : TransportError(what), retry_after_seconds_(retry_after_seconds) {}
  double retry_after_seconds() const { return retry_after_seconds_; }

 private:
  double retry_after_seconds_;
};

class ReplayExhausted : public Error {
 public:
  using Error::Error;
};

class ReplayMismatch : public Error {
 public:
  using Error::Error;
};

class SerializationError : public Error {
 public:
  using Error::Error;
};

class CorruptTranscript : public Error {
 public:
  using Error::Error;
};

class NoSolutionAfterRetry : public Error {
 public:
  using Error::Error;
};

}  // namespace mmvrp
