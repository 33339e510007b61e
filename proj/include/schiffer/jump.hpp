#pragma once

#include "schiffer/sigma_space.hpp"
#include "schiffer/spaces.hpp"
#include "schiffer/transmission.hpp"

namespace schiffer {

struct JumpOptions {
  double s = 0.0;          // level-curve depth; 0 means epsilon / 2
  int contour_samples = 256;
  int truncation = 16;
  double membership_tol = 1e-10;
  double limit_tol = 1e-9;
  double fit_tol = 1e-5;
};

/// Cauchy-type operator J_q(Gamma) on a fixed Dirichlet-harmonic tuple.
/// The contour integrand pairs the kernel with the trace's meromorphic
/// extension through the chart, so the value is independent of the level
/// depth once the evaluation point is separated from the curves; the
/// s / s/2 comparison certifies that.
class JumpOperator {
 public:
  JumpOperator(const SurfaceConfig& cfg, std::vector<HarmonicExpansion> h,
               const JumpOptions& opts);

  Complex value(Complex z) const;
  Complex del(Complex z) const;     // dz coefficient of del J
  Complex delbar(Complex z) const;  // dzbar coefficient of delbar J

  /// Single-curve variant J_q(Gamma_k) applied to h_k only.
  Complex value_single(int k, Complex z) const;
  Complex del_single(int k, Complex z) const;

 private:
  struct CurveData {
    LevelCurve curve;
    std::vector<Complex> trace_ext;  // trace extension at the curve's zeta
  };
  CurveData make_curve(int k, double s) const;
  Complex integrate(const CurveData& cd,
                    const std::function<Complex(Complex)>& kernel) const;
  Complex eval_kernel_route(Complex z, bool derivative, int only_k) const;

  const SurfaceConfig* cfg_;
  std::vector<HarmonicExpansion> h_;
  JumpOptions opts_;
  double s_;
  std::vector<CurveData> curves_;       // at depth s
  std::vector<CurveData> curves_half_;  // at depth s/2
};

/// J_q(Gamma)' on collar data.
class JumpPrimeOperator {
 public:
  JumpPrimeOperator(const SurfaceConfig& cfg, std::vector<CollarExpansion> u,
                    const JumpOptions& opts);
  Complex value(Complex z) const;

 private:
  const SurfaceConfig* cfg_;
  std::vector<CollarExpansion> u_;
  JumpOptions opts_;
  double s_;
  std::vector<LevelCurve> curves_, curves_half_;
  std::vector<std::vector<Complex>> ext_, ext_half_;
};

struct JumpSolution {
  std::vector<HarmonicExpansion> h_k;  // holomorphic parts on the domains
  SigmaExpansion h_sigma;              // holomorphic part on Sigma, h(q) = 0
  double residual = 0.0;               // max |H + H_sigma - H_k| on the curves
  double fit_residual = 0.0;           // re-expansion misfit
  double holomorphy_defect = 0.0;      // residual anti-analytic content
};

/// Plemelj-Sokhotski solver: h_k = J h restricted to Omega_k, h_sigma the
/// Sigma restriction, boundary identity H = -H_sigma + H_k verified.
JumpSolution jump_solve(const SurfaceConfig& cfg,
                        const std::vector<HarmonicExpansion>& h,
                        const SigmaBasis& basis, const JumpOptions& opts);

/// Round-trip surjectivity witness: assemble h = -O(Sigma, O) u_sigma + u_O,
/// solve, and return the largest coefficient distance to the target pair.
double jump_inverse_check(const SurfaceConfig& cfg,
                          const std::vector<HarmonicExpansion>& u_o,
                          const SigmaExpansion& u_sigma, const SigmaBasis& basis,
                          const JumpOptions& opts);

}  // namespace schiffer
