#include "rydcav/errors.hpp"

namespace rydcav {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::SingularDenominator: return "SingularDenominator";
    case ErrorKind::DegenerateKernel: return "DegenerateKernel";
    case ErrorKind::BlockadeSaturation: return "BlockadeSaturation";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::NoInteriorMaximum: return "NoInteriorMaximum";
  }
  return "UnknownError";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
      return 1;
    case ErrorKind::SingularDenominator:
    case ErrorKind::DegenerateKernel:
    case ErrorKind::BlockadeSaturation:
    case ErrorKind::ZeroDenominator:
    case ErrorKind::NoInteriorMaximum:
      return 2;
    case ErrorKind::QuadratureFailure:
    case ErrorKind::IllConditioned:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::TruncationTooSmall:
    case ErrorKind::NonConvergence:
      return 3;
  }
  return 3;
}

}  // namespace rydcav
