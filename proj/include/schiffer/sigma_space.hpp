#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "schiffer/spaces.hpp"

namespace schiffer {

/// Holomorphic function family on Sigma with poles at the domain base
/// points. Sphere: (z - c_k)^{-m}, m = 1..N. Torus: differences of
/// theta1'/theta1 translates plus higher log-theta derivatives, all
/// single-valued elliptic. Harmonic work adds conjugates and the real
/// two-pole Green's terms between consecutive centers.
class SigmaBasis {
 public:
  SigmaBasis() = default;
  SigmaBasis(const SurfaceConfig& cfg, int truncation);

  int num_holo() const { return num_holo_; }
  int num_log() const { return int(centers_.size()) - 1; }
  int truncation() const { return trunc_; }
  const std::vector<Complex>& centers() const { return centers_; }
  const SurfaceModel& surface() const { return surface_; }
  BasisSpec spec() const;

  Complex phi(int i, Complex z) const;
  int order(int i) const;  // pole order of phi_i at its center
  Complex dphi(int i, Complex z) const;  // dz coefficient of d(phi_i)
  double log_term(int r, Complex z) const;
  Complex dlog_term(int r, Complex z) const;

  /// Real harmonic dipole terms, two per domain on the torus: the real part
  /// of a theta1'/theta1 translate and its i-directional partner, each made
  /// single-valued by an Im-linear correction. They carry the handle fluxes
  /// that the holomorphic and conjugate families cannot reach. None on the
  /// sphere, where the simple poles are already single-valued.
  int num_extra() const;
  double extra_term(int r, Complex z) const;
  Complex dextra_term(int r, Complex z) const;

 private:
  SurfaceModel surface_;
  std::vector<Complex> centers_;
  int trunc_ = 0;
  int num_holo_ = 0;
};

/// Element of the harmonic Dirichlet family on Sigma.
struct SigmaExpansion {
  SigmaBasis basis;
  Vector holo;      // over phi_i
  Vector anti;      // over conj(phi_i)
  Vector logs;      // over the Green's log terms
  Vector extras;    // over the dipole terms (torus only)
  Complex constant{0.0, 0.0};

  Complex eval(Complex z) const;
  Complex del(Complex z) const;     // dz coefficient of del
  Complex delbar(Complex z) const;  // dzbar coefficient of delbar
  void anchor_at(Complex q);        // subtract the value at q
  bool is_holomorphic(double tol = 0.0) const;
};

SigmaExpansion zero_sigma_expansion(const SigmaBasis& basis);

/// One-form on Sigma expanded over {d(phi_i)} with an optional dz component
/// (single-valued primitive z; finite-norm only on the torus) and optional
/// simple-pole terms, which carry boundary periods and are therefore not
/// exact.
struct SigmaFormExpansion {
  SigmaBasis basis;
  Vector dphi_coeffs;
  Complex dz_coeff{0.0, 0.0};
  Vector pole_coeffs;  // over 1/(z - c_k) (sphere) or theta1'/theta1 translates

  Complex eval(Complex z) const;           // dz coefficient
  Complex primitive(Complex z) const;      // requires the exact part only
};

SigmaFormExpansion zero_sigma_form(const SigmaBasis& basis);

/// Dirichlet pairing (dF, dG) on Sigma by the boundary Green's identity
/// 1/2 contour_{del Sigma} F * conj(dG); spectrally exact on analytic
/// curves, no area quadrature of the unbounded region involved.
Complex sigma_dirichlet_inner(const SurfaceConfig& cfg, const SigmaExpansion& F,
                              const SigmaExpansion& G, int M);

/// Gram matrix of the exact-form family {d(phi_i)} under the same identity.
Matrix sigma_form_gram(const SurfaceConfig& cfg, const SigmaBasis& basis, int M);

/// Interior collocation grid for fitting Sigma-side data: rings around each
/// boundary curve at the given chart radii.
std::vector<Complex> sigma_fit_points(const SurfaceConfig& cfg,
                                      const std::vector<double>& radii,
                                      int per_ring);

struct SigmaFitResult {
  SigmaExpansion expansion;
  double residual = 0.0;      // max abs misfit on the validation ring
  double condition = 0.0;
};

/// Least-squares expansion of a holomorphic function on Sigma over
/// {1, phi_i}, anchored to vanish at q when requested.
SigmaFitResult fit_sigma_holomorphic(const SurfaceConfig& cfg, const SigmaBasis& basis,
                                     const std::function<Complex(Complex)>& values,
                                     bool anchor_at_q);

struct SigmaFormFitResult {
  SigmaFormExpansion expansion;
  double residual = 0.0;
  double condition = 0.0;
};

/// Least-squares expansion of an exact holomorphic one-form over {d(phi_i)}.
SigmaFormFitResult fit_sigma_form(const SurfaceConfig& cfg, const SigmaBasis& basis,
                                  const std::function<Complex(Complex)>& dz_coeff);

/// Thresholded least-squares solve with condition reporting.
Vector solve_least_squares(const Matrix& A, const Vector& b, double* condition);

}  // namespace schiffer
