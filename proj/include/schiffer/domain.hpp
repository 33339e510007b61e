#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schiffer/surface.hpp"
#include "schiffer/types.hpp"

namespace schiffer {

/// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w);

/// Simply-connected domain given by an injective polynomial map of the
/// closed unit disk, f(zeta) = sum c_j zeta^j. The base point is f(0).
class ConformalDomain {
 public:
  ConformalDomain() = default;
  ConformalDomain(std::vector<Complex> coeffs, std::string label);

  Complex map(Complex zeta) const;
  Complex dmap(Complex zeta) const;
  Complex base_point() const { return coeffs_.empty() ? Complex{} : coeffs_[0]; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const std::string& label() const { return label_; }
  int degree() const { return int(coeffs_.size()) - 1; }

  /// Newton inversion of the disk map; valid for w in the closed image.
  Complex inverse(Complex w) const;

  /// Exact area of the image, pi * sum j |c_j|^2.
  double area() const;

 private:
  std::vector<Complex> coeffs_;
  std::string label_;
};

struct SurfaceConfig {
  SurfaceModel surface;
  std::vector<ConformalDomain> domains;
  Complex q{2.0, 0.0};
  double epsilon = 0.3;  // collar depth
};

struct ConfigViolation {
  enum class Kind {
    Injectivity,
    Disjointness,
    AnchorPlacement,
    FundamentalDomain,
    DegenerateMap,
  };
  Kind kind;
  std::string detail;
};

/// All violated configuration invariants; empty means valid.
std::vector<ConfigViolation> validate_config(const SurfaceConfig& cfg);

enum class QuadKind { Area, Contour };

struct QuadratureRule {
  QuadKind kind = QuadKind::Area;
  std::vector<Complex> nodes;    // points in surface coordinates
  std::vector<double> weights;   // area measure, Jacobian included
  std::vector<Complex> zeta;     // chart preimages of the nodes
  std::vector<Complex> fprime;   // f'(zeta) at the nodes
};

/// Tensor Gauss-Legendre x trapezoid rule on the unit disk pushed through f.
QuadratureRule area_quadrature(const ConformalDomain& dom, int n_r, int n_t);

/// Same rule on the annulus r_inner < |zeta| < r_outer pushed through f.
QuadratureRule annulus_quadrature(const ConformalDomain& dom, double r_inner,
                                  double r_outer, int n_r, int n_t);

struct LevelCurve {
  double s = 0.0;
  std::vector<Complex> samples;   // f(e^{-s} e^{i theta_j}), equispaced theta
  std::vector<Complex> tangents;  // dw/dtheta at the samples
  std::vector<Complex> zeta;      // chart points e^{-s} e^{i theta_j}
};

/// Green's-level curve {g_Omega(., p) = s} through the chart, positively
/// oriented with respect to p = f(0).
LevelCurve level_curve(const ConformalDomain& dom, double s, int M);

/// Level curve for the Green's function with pole f(a) instead of f(0),
/// realized by composing with a disk automorphism.
LevelCurve level_curve_with_base(const ConformalDomain& dom, Complex a, double s,
                                 int M);

/// Trapezoid contour integral of integrand dw over the curve.
Complex contour_integral(const LevelCurve& curve,
                         const std::vector<Complex>& integrand_samples);

/// Annular chart Omega_{k,eps} between the boundary and the level curve at
/// depth eps.
struct CollarChart {
  const ConformalDomain* dom = nullptr;
  double eps = 0.0;

  double inner_radius() const { return std::exp(-eps); }
  LevelCurve inner_boundary(int M) const;
  LevelCurve outer_boundary(int M) const;
  QuadratureRule quadrature(int n_r, int n_t) const;
};

CollarChart collar(const ConformalDomain& dom, double eps);

/// Winding number of a sampled closed curve about z.
int winding_number(const std::vector<Complex>& samples, Complex z);

/// True if z lies inside the image f(D) (winding test on the boundary).
bool point_in_domain(const ConformalDomain& dom, Complex z, int M = 512);

/// Fundamental-domain coordinates: w = a + b tau with a, b returned.
void torus_coordinates(const SurfaceModel& s, Complex w, double& a, double& b);

}  // namespace schiffer
