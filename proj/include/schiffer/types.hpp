#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace schiffer {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Tolerances shared across modules.
inline constexpr double kSingularTol = 1e-12;    // point-collision tolerance
inline constexpr double kGeometryTol = 1e-6;     // disjointness / interiority
inline constexpr double kSeriesCutoff = 1e-16;   // theta-series relative truncation

enum class ErrorCode {
  NonConvergent,
  SingularEvaluation,
  InvalidOrder,
  LengthMismatch,
  InvalidEps,
  DomainMismatch,
  DegenerateGram,
  TargetMembership,
  QuadratureOverflow,
  InversionFailure,
  NestingViolation,
  IllConditionedFit,
  RegionMismatch,
  NotExact,
  PointOnCurve,
  LimitNotSettled,
  NotInW,
  FitResidualExceeded,
  IOFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline double sqr(double x) { return x * x; }
inline double norm2(Complex z) { return std::norm(z); }

}  // namespace schiffer
