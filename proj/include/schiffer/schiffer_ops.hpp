#pragma once

#include <memory>

#include "schiffer/jump.hpp"
#include "schiffer/sigma_space.hpp"
#include "schiffer/spaces.hpp"

namespace schiffer {

/// Comparison operator T against a fixed anti-holomorphic tuple on O.
/// Evaluation away from the source domain is direct area quadrature of the
/// Schiffer kernel; the principal-value self term T(Omega_j, Omega_j) goes
/// through the derivative identity del J_q(Gamma_j) h = del h - T delbar h
/// with h the anti-derivative of abar_j, so only analytic contour
/// quadrature is ever performed.
class SchifferTOperator {
 public:
  SchifferTOperator(const SurfaceConfig& cfg, std::vector<FormExpansion> abar,
                    int n_r, int n_t, const JumpOptions& jump_opts = {});

  Complex at_sigma(Complex z) const;
  Complex at_domain(int j, Complex z) const;

  /// Restriction of T(Omega_k, Omega_k^*) abar_k to a point outside cl(Omega_k).
  Complex cross_term(int k, Complex z) const;

  /// Self term T(Omega_j, Omega_j) abar_j at z in Omega_j.
  Complex self_term(int j, Complex z) const;

 private:
  void require_clearance(int k, Complex z) const;

  const SurfaceConfig* cfg_;
  std::vector<FormExpansion> abar_;
  std::vector<QuadratureRule> rules_;
  int n_t_ = 64;
  std::unique_ptr<JumpOperator> antider_jump_;
};

/// S(O, R): coefficients over the compact holomorphic basis. Zero vector on
/// the sphere.
Vector apply_S_compact(const SurfaceConfig& cfg, const std::vector<FormExpansion>& alpha,
                       int n_r, int n_t);

/// Exact Bergman kernel coefficient of a disk chart, through Newton
/// inversion of the map.
Complex bergman_kernel_open_disk(const ConformalDomain& dom, Complex z, Complex w);

struct Annulus {
  double r = 0.0;  // inner radius, 0 for a disk
  double R = 1.0;

  bool contains(Complex z) const {
    const double a = std::abs(z);
    return a > r && a < R;
  }
};

/// || z^n dz ||^2 on the annulus (n >= 0 required when r == 0).
double laurent_form_norm_sq(const Annulus& a, int n);

/// Synthesized Bergman kernel from the orthonormalized Laurent family,
/// truncated at |n| <= N.
Complex bergman_kernel_open_annulus(const Annulus& a, Complex z, Complex w, int N);

struct LaurentForm {
  int nmin = 0;
  std::vector<Complex> coeffs;  // of z^n dz, n = nmin ..

  Complex eval(Complex z) const;
  int nmax() const { return nmin + int(coeffs.size()) - 1; }
};

double laurent_norm_sq(const Annulus& a, const LaurentForm& f);

/// Nested pair Sigma strictly inside Sigma'.
struct AnnulusPair {
  Annulus inner;
  Annulus outer;
};

void require_nesting(const AnnulusPair& pair);

/// S(Sigma, Sigma') alpha at z in Sigma', by area quadrature over Sigma of
/// the synthesized kernel (exact disk kernel when the pair is disks).
Complex apply_S_open(const AnnulusPair& pair, const LaurentForm& alpha, Complex z,
                     int kernel_trunc, int n_r, int n_t);

/// Expansion of S alpha over the orthonormalized Laurent family of Sigma'.
Vector apply_S_open_coeffs(const AnnulusPair& pair, const LaurentForm& alpha,
                           int kernel_trunc, int n_r, int n_t);

/// Restriction R(Sigma', Sigma): re-expansion of beta on the inner region.
/// The Laurent family restricts to itself, so coefficients carry over and
/// the reported residual is the exact-arithmetic zero.
struct RestrictionResult {
  LaurentForm form;
  double residual = 0.0;
};
RestrictionResult restriction(const AnnulusPair& pair, const LaurentForm& beta);

/// | (S alpha, beta)_{Sigma'} - (alpha, R beta)_{Sigma} | / (|alpha| |beta|).
double adjoint_check(const AnnulusPair& pair, const LaurentForm& alpha,
                     const LaurentForm& beta, int kernel_trunc, int n_r, int n_t);

struct OperatorSection {
  BasisSpec rows_basis;
  BasisSpec cols_basis;
  Matrix matrix;  // orthonormalized coordinates
  Eigen::VectorXd singular_values;
  double assembly_residual = 0.0;  // worst re-expansion misfit
};

/// T(D, D^*) on the sphere single-disk configuration, monomial bases.
OperatorSection assemble_section_T_disk_pair(const SurfaceConfig& cfg, int N, int n_r,
                                             int n_t);

/// Finite section of T(O, Sigma) restricted to V, between orthonormalized
/// truncated bases; image side re-expanded over the exact Sigma family.
OperatorSection assemble_section_T_on_V(const SurfaceConfig& cfg, int N, int n_r,
                                        int n_t, int sigma_trunc, int M);

/// Section of the left inverse composition P_A-bar O_e(Sigma, O) T(O, Sigma)
/// on V; identity up to the stated tolerances.
OperatorSection assemble_section_left_inverse(const SurfaceConfig& cfg, int N, int n_r,
                                              int n_t, int sigma_trunc, int M);

/// Section of S on a nested pair in orthonormalized Laurent coordinates.
OperatorSection assemble_section_S_nested(const AnnulusPair& pair, int N,
                                          int kernel_trunc, int n_r, int n_t);

/// Gamma_k-periods of the T image of abar (A(Sigma)_e membership check).
std::vector<Complex> t_image_periods(const SurfaceConfig& cfg,
                                     const SchifferTOperator& T, int M);

/// V-orthonormal frame for the stacked anti-holomorphic tuple space;
/// columns are coefficient vectors of the per-domain expansions.
struct VFrame {
  Matrix columns;       // (n_domains * (N+1)) x dim(V)
  int per_domain = 0;   // N + 1 coefficients per domain
  std::vector<FormExpansion> to_tuple(const SurfaceConfig& cfg, const Vector& coords,
                                      int N) const;
  Vector to_coords(const std::vector<FormExpansion>& tuple) const;
};

VFrame v_frame(const SurfaceConfig& cfg, int N);

}  // namespace schiffer
