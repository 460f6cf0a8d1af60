#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace plemelj {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

using ComplexFn = std::function<cplx(cplx)>;

enum class ErrorKind {
  InvalidCurve,
  DegeneratePath,
  InvalidInput,
  InvalidParameter,
  InvalidWeight,
  EmptyInterval,
  DivergentWeight,
  QuadratureFailure,
  SCNoConvergence,
  IllConditioned,
  SingularPoint,
  TheodorsenDiverged,
  CurveMapMismatch,
  CorrespondenceDegenerate,
  BranchError,
  OnCurvePoint,
  GridTooFine,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::DegeneratePath: return "DegeneratePath";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidWeight: return "InvalidWeight";
    case ErrorKind::EmptyInterval: return "EmptyInterval";
    case ErrorKind::DivergentWeight: return "DivergentWeight";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::SCNoConvergence: return "SCNoConvergence";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::TheodorsenDiverged: return "TheodorsenDiverged";
    case ErrorKind::CurveMapMismatch: return "CurveMapMismatch";
    case ErrorKind::CorrespondenceDegenerate: return "CorrespondenceDegenerate";
    case ErrorKind::BranchError: return "BranchError";
    case ErrorKind::OnCurvePoint: return "OnCurvePoint";
    case ErrorKind::GridTooFine: return "GridTooFine";
  }
  return "Unknown";
}

// Validation errors come from bad input; everything else is a numerical failure.
inline bool is_validation_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidCurve:
    case ErrorKind::DegeneratePath:
    case ErrorKind::InvalidInput:
    case ErrorKind::InvalidParameter:
    case ErrorKind::InvalidWeight:
    case ErrorKind::EmptyInterval:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Residual or achieved tolerance when the failure has one.
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what,
                              double value = std::numeric_limits<double>::quiet_NaN()) {
  throw Error(kind, what, value);
}

inline double sqr(double x) { return x * x; }
inline double abs2(cplx z) { return std::norm(z); }

inline double wrap_angle(double t) {
  t = std::fmod(t, two_pi);
  return t < 0.0 ? t + two_pi : t;
}

}  // namespace plemelj
