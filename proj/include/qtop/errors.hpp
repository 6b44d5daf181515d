#pragma once

#include <stdexcept>
#include <string>

namespace qtop {

/// Failure class, used by the CLI to pick an exit code.
enum class ErrorKind {
  Validation,  // bad parameters, rejected preconditions, malformed configs
  Numerical,   // the computation itself refused or lost its certificate
  Io,          // file system problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string label, const std::string& what)
      : std::runtime_error(label + ": " + what), kind_(kind), label_(std::move(label)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& label() const { return label_; }

 private:
  ErrorKind kind_;
  std::string label_;
};

struct GaplessPointError : Error {
  explicit GaplessPointError(const std::string& what)
      : Error(ErrorKind::Numerical, "GaplessPoint", what) {}
};

struct CriticalPointError : Error {
  explicit CriticalPointError(const std::string& what)
      : Error(ErrorKind::Validation, "CriticalPoint", what) {}
};

struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& what)
      : Error(ErrorKind::Validation, "Unsupported", what) {}
};

struct UnwrapFailureError : Error {
  explicit UnwrapFailureError(const std::string& what)
      : Error(ErrorKind::Numerical, "UnwrapFailure", what) {}
};

struct NonIntegerWindingError : Error {
  explicit NonIntegerWindingError(const std::string& what)
      : Error(ErrorKind::Numerical, "NonIntegerWinding", what) {}
};

struct PlaneMismatchError : Error {
  explicit PlaneMismatchError(const std::string& what)
      : Error(ErrorKind::Validation, "PlaneMismatch", what) {}
};

struct SingularKError : Error {
  explicit SingularKError(const std::string& what)
      : Error(ErrorKind::Numerical, "SingularK", what) {}
};

struct MultiMinimumError : Error {
  explicit MultiMinimumError(const std::string& what)
      : Error(ErrorKind::Numerical, "MultiMinimum", what) {}
};

struct RootFindFailureError : Error {
  explicit RootFindFailureError(const std::string& what)
      : Error(ErrorKind::Numerical, "RootFindFailure", what) {}
};

struct ZeroShotsError : Error {
  explicit ZeroShotsError(const std::string& what)
      : Error(ErrorKind::Validation, "ZeroShots", what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::Validation, "Validation", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, "Io", what) {}
};

}  // namespace qtop
