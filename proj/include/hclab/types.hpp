#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hclab {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

enum class ErrorCode {
  OutOfDomain,
  UnsupportedCurve,
  NotDivisible,
  DimMismatch,
  GridTooCoarse,
  OutOfOmega,
  EmptySamples,
  IndexOutOfRange,
  NonfiniteState,
  UnknownForm,
  NotDiagonalizable,
  LambdaInSpectrum,
  MissingComponent,
  LengthMismatch,
  ConfigInvalid,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfDomain: return "OUT_OF_DOMAIN";
    case ErrorCode::UnsupportedCurve: return "UNSUPPORTED_CURVE";
    case ErrorCode::NotDivisible: return "NOT_DIVISIBLE";
    case ErrorCode::DimMismatch: return "DIM_MISMATCH";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::OutOfOmega: return "OUT_OF_OMEGA";
    case ErrorCode::EmptySamples: return "EMPTY_SAMPLES";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::NonfiniteState: return "NONFINITE_STATE";
    case ErrorCode::UnknownForm: return "UNKNOWN_FORM";
    case ErrorCode::NotDiagonalizable: return "NOT_DIAGONALIZABLE";
    case ErrorCode::LambdaInSpectrum: return "LAMBDA_IN_SPECTRUM";
    case ErrorCode::MissingComponent: return "MISSING_COMPONENT";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
  }
  return "UNKNOWN";
}

/// All operations report failed preconditions through this exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace hclab
