#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rydcav {

enum class ErrorKind {
  Config,
  SingularDenominator,
  DegenerateKernel,
  BlockadeSaturation,
  QuadratureFailure,
  IllConditioned,
  ZeroDenominator,
  DegenerateSpectrum,
  TruncationTooSmall,
  NonConvergence,
  NoInteriorMaximum,
};

std::string_view to_string(ErrorKind kind);

// Process exit code for the CLI: 1 config, 2 physics domain, 3 numerical.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Carries the condition estimate of the rejected system.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double condition)
      : Error(ErrorKind::IllConditioned, what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

}  // namespace rydcav
