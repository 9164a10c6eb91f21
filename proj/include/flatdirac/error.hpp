#pragma once

#include <stdexcept>
#include <string>

namespace flatdirac {

// Every failure the library reports derives from Error. The CLI maps the
// category onto its exit-code contract (see cli_exit_code in commands.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: order mismatch, malformed word, out-of-domain radius.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DomainError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A computed quantity violated an invariant it must satisfy analytically
// (odd trace coefficients, |F| > 1, ...). Signals a bug or too little precision.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class BranchDegeneracyError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class DegenerateSpectrumError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class AccuracyError : public ConsistencyError {
 public:
  AccuracyError(const std::string& what, double achieved)
      : ConsistencyError(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Mathematical failures: the computation was sound but did not succeed.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class NoCandidateError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class IndeterminateOrderError : public Error {
 public:
  using Error::Error;
};

class InvalidSampleError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

}  // namespace flatdirac
