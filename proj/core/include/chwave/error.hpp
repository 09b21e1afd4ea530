#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chwave {

enum class ErrorCode {
  InvalidArgument,
  DegenerateMean,
  SingularTrajectory,
  IntegrationFailure,
  NoPeriodicSolution,
  SingularOnly,
  JacobianSingular,
  LineSearchStalled,
  NoConvergence,
  SpectrumFailure,
  BlowUp,
  Io,
};

std::string_view to_string(ErrorCode code);

// Solver failures that callers (scans, the CLI) branch on carry a code.
class SolverError : public std::runtime_error {
 public:
  SolverError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chwave
