#ifndef CCRCP_ERRORS_H_
#define CCRCP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ccrcp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap without meeting its tolerance.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

// Input points do not span the ambient space (MVEE needs q+1 affinely
// independent points).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class NotStronglyConnected : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

// A removal stage driven by ACC reached an infeasible problem.
class InfeasibleStage : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed pool, program, graph or snapshot.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace ccrcp

#endif  // CCRCP_ERRORS_H_
