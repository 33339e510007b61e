#pragma once

#include <Eigen/Dense>
#include <vector>

#include "schiffer/domain.hpp"
#include "schiffer/types.hpp"

namespace schiffer {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

enum class Chirality { Holo, AntiHolo };

struct BasisSpec {
  enum class Kind { DiskMonomial, Laurent, TorusRational };
  Kind kind = Kind::DiskMonomial;
  int truncation = 16;
};

/// One-form on a domain Omega_k in disk-pullback coordinates. A Holo
/// expansion with coefficients c is sum c_n (pullback of zeta^n dzeta);
/// AntiHolo is the conjugate family. The half-wedge pairing of pullback
/// monomials is exactly diag(pi / (n+1)) for any injective f.
struct FormExpansion {
  int domain_id = 0;
  Chirality chirality = Chirality::Holo;
  BasisSpec basis;
  Vector coeffs;

  /// Coefficient function of the pullback: p(zeta) (Holo, of dzeta) or
  /// pbar(zeta) (AntiHolo, of conj(dzeta)).
  Complex pullback_coeff(Complex zeta) const;

  double norm_sq() const;  // exact Gram value
};

FormExpansion zero_form(int domain_id, Chirality chi, int truncation);

/// Harmonic function on Omega_k: constant + sum_{n>=1} holo_n zeta^n
/// + sum_{n>=1} anti_n conj(zeta)^n, through the chart. Index 0 of both
/// vectors is kept at zero; the additive constant lives in `constant`.
struct HarmonicExpansion {
  int domain_id = 0;
  BasisSpec basis;
  Vector holo;
  Vector anti;
  Complex constant{0.0, 0.0};

  Complex eval_chart(Complex zeta) const;

  /// Meromorphic extension of the boundary trace through the chart:
  /// conj-terms become zeta^{-n}. Contour integrals of the jump kernel
  /// against this function realize the level-curve limits exactly.
  Complex trace_extension(Complex zeta) const;

  FormExpansion del() const;     // del h as a Holo form
  FormExpansion delbar() const;  // delbar h as an AntiHolo form

  double dirichlet_norm_sq() const;  // sum n pi (|holo_n|^2 + |anti_n|^2)
};

HarmonicExpansion zero_harmonic(int domain_id, int truncation);

/// Antiderivative bookkeeping: a Holo form sum c_n zeta^n dzeta integrates
/// to the function sum c_n zeta^{n+1}/(n+1); AntiHolo conjugately.
HarmonicExpansion antiderivative(const FormExpansion& form);

/// Harmonic Dirichlet data on the collar annulus e^{-eps} < |zeta| < 1:
/// two-sided Laurent part, a conjugate part, and a log|zeta| term.
struct CollarExpansion {
  int domain_id = 0;
  double eps = 0.0;
  int nmin = 0;
  int nmax = -1;
  std::vector<Complex> holo;  // zeta^n for n = nmin..nmax
  std::vector<Complex> anti;  // conj(zeta)^n
  Complex log_coeff{0.0, 0.0};

  Complex& holo_at(int n) { return holo[std::size_t(n - nmin)]; }
  Complex& anti_at(int n) { return anti[std::size_t(n - nmin)]; }
  Complex eval_chart(Complex zeta) const;

  /// Trace extension at the outer boundary (conj(zeta)^n -> zeta^{-n},
  /// log|zeta| -> 0).
  Complex trace_extension(Complex zeta) const;
};

CollarExpansion zero_collar(int domain_id, double eps, int nmin, int nmax);

/// Bounce operator: the harmonic Dirichlet function on the full domain with
/// the same outer-boundary trace.
HarmonicExpansion bounce(const CollarExpansion& u, int truncation);

/// Pairing (a, b) = 1/2 iint a wedge *conj(b) evaluated by the given area
/// rule. Cross-chirality pairs vanish identically.
Complex inner_product_forms(const FormExpansion& a, const FormExpansion& b,
                            const QuadratureRule& quad);

/// Dirichlet pairing (dh1, dh2); constants do not contribute.
Complex dirichlet_inner(const HarmonicExpansion& h1, const HarmonicExpansion& h2,
                        const QuadratureRule& quad);

/// (del h, delbar h).
std::pair<FormExpansion, FormExpansion> split_harmonic(const HarmonicExpansion& h);

/// Defect of membership in V: component j is sum_k iint beta_j wedge abar_k
/// over the compact holomorphic basis {beta_j}. Empty on the sphere.
std::vector<Complex> v_defect(const SurfaceConfig& cfg,
                              const std::vector<FormExpansion>& abar);

/// Defect of membership in W, i.e. v_defect of the delbar parts.
std::vector<Complex> w_defect(const SurfaceConfig& cfg,
                              const std::vector<HarmonicExpansion>& h);

/// Same defect through the limiting level-curve route
/// -sum_k contour(h_k beta_j); agrees with w_defect by Stokes.
std::vector<Complex> w_defect_level_curve(const SurfaceConfig& cfg,
                                          const std::vector<HarmonicExpansion>& h,
                                          int M);

/// Gram-orthogonal projection onto V.
std::vector<FormExpansion> project_V(const SurfaceConfig& cfg,
                                     std::vector<FormExpansion> abar);

/// Projection into W: project the delbar parts onto V and reintegrate.
std::vector<HarmonicExpansion> project_W(const SurfaceConfig& cfg,
                                         std::vector<HarmonicExpansion> h);

/// Coefficient value of the form at a chart point: the dz coefficient for
/// Holo expansions, the dzbar coefficient for AntiHolo ones.
Complex form_value(const FormExpansion& f, const ConformalDomain& dom, Complex zeta);

/// Integral of kernel(w) against the form's area measure over its domain,
/// using the rule's chart data: iint kernel * a dA (Holo) or
/// iint kernel * abar dA (AntiHolo).
template <typename Kernel>
Complex integrate_kernel_against_form(const QuadratureRule& rule,
                                      const ConformalDomain& dom,
                                      const FormExpansion& form, Kernel&& kernel) {
  (void)dom;
  Complex acc{0.0, 0.0};
  const std::size_t m = rule.nodes.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Complex p = form.pullback_coeff(rule.zeta[i]);
    const Complex jac = form.chirality == Chirality::Holo
                            ? rule.weights[i] / rule.fprime[i]
                            : rule.weights[i] / std::conj(rule.fprime[i]);
    acc += kernel(rule.nodes[i]) * p * jac;
  }
  return acc;
}

}  // namespace schiffer
