#pragma once

#include <vector>

#include "schiffer/types.hpp"

namespace schiffer {

enum class SurfaceKind { Sphere, Torus };

struct SurfaceModel {
  SurfaceKind kind = SurfaceKind::Sphere;
  Complex tau{0.0, 1.0};  // torus modulus, Im(tau) > 0; ignored on the sphere

  int genus() const { return kind == SurfaceKind::Torus ? 1 : 0; }
  double im_tau() const { return tau.imag(); }
};

SurfaceModel make_sphere();
SurfaceModel make_torus(Complex tau);

struct GreenValue {
  double value = 0.0;
  bool is_singular = false;
};

/// Two-pole Green's function g(w; z, q): harmonic in w off {z, q}, with a
/// -log singularity at z and +log at q. The w0 normalization is dropped;
/// only derivatives are consumed downstream.
GreenValue green_function(const SurfaceModel& s, Complex w, Complex z, Complex q);

/// del_w g(w; z, q) as the coefficient of dw.
Complex green_dw(const SurfaceModel& s, Complex w, Complex z, Complex q);

/// Schiffer kernel coefficient ell(z, w) with L_R = ell dz dw. The global
/// sign is the one pinned by the sign-convention audit: on the sphere
/// ell = 1 / (2 pi i (w - z)^2).
Complex schiffer_kernel(const SurfaceModel& s, Complex z, Complex w, Complex q);

/// Area-measure kernel for T: integrating t_kernel * abar_coeff dA over the
/// domains realizes T against an anti-holomorphic form. Equals -2i * ell.
Complex t_kernel_area(const SurfaceModel& s, Complex z, Complex w);

/// Bergman kernel coefficient kappa(z, w) of the compact surface, normalized
/// so that the reproducing integral is against the real area measure:
/// alpha(z) = integral kappa(z, w) a(w) dA(w). Sphere: 0. Torus: 1 / Im(tau).
Complex bergman_kernel_compact(const SurfaceModel& s, Complex z, Complex w);

/// Mixed kernel for the conjugate-S identity: del_zbar del_w g as the
/// coefficient used when differentiating the jump integral anti-holomorphically.
/// Sphere: 0. Torus: the constant -pi / (2 Im tau).
Complex green_dzbar_dw(const SurfaceModel& s);

struct CompactFormDescriptor {
  Complex coefficient;  // constant coefficient of dz
  double norm_sq;       // under the half-wedge pairing
};

/// Basis of holomorphic one-forms on the compact surface. Sphere: empty.
/// Torus: the single form dz with norm^2 = Im(tau).
std::vector<CompactFormDescriptor> compact_holomorphic_basis(const SurfaceModel& s);

}  // namespace schiffer
