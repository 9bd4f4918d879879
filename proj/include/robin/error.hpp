#pragma once

#include <stdexcept>
#include <string>

namespace robin {

enum class ErrorKind {
  InvalidParameter,
  InvalidPolygon,
  InvalidCut,
  MeshingFailure,
  SolverFailure,
  RejectedSpec,
  OptimizationFailure,
  NotApplicable,
  ParseError,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so the CLI can map it
// onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::InvalidPolygon: return "invalid-polygon";
    case ErrorKind::InvalidCut: return "invalid-cut";
    case ErrorKind::MeshingFailure: return "meshing-failure";
    case ErrorKind::SolverFailure: return "solver-failure";
    case ErrorKind::RejectedSpec: return "rejected-spec";
    case ErrorKind::OptimizationFailure: return "optimization-failure";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "error";
}

}  // namespace robin
