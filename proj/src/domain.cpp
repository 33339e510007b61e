#include "schiffer/domain.hpp"

#include <algorithm>
#include <cmath>

namespace schiffer {

void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                    std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / pp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    x[i] = t;
    x[n - 1 - i] = -t;
    w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    x[i] = mid - half * x[i];
    w[i] *= half;
  }
}

ConformalDomain::ConformalDomain(std::vector<Complex> coeffs, std::string label)
    : coeffs_(std::move(coeffs)), label_(std::move(label)) {}

Complex ConformalDomain::map(Complex zeta) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * zeta + coeffs_[j];
  return acc;
}

Complex ConformalDomain::dmap(Complex zeta) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = coeffs_.size(); j-- > 1;) {
    acc = acc * zeta + double(j) * coeffs_[j];
  }
  return acc;
}

Complex ConformalDomain::inverse(Complex w) const {
  if (coeffs_.size() < 2 || coeffs_[1] == Complex{0.0, 0.0}) {
    fail(ErrorCode::InversionFailure, "inverse: degenerate map");
  }
  Complex zeta = (w - coeffs_[0]) / coeffs_[1];
  if (std::abs(zeta) > 1.0) zeta /= std::abs(zeta);
  for (int iter = 0; iter < 50; ++iter) {
    const Complex r = map(zeta) - w;
    if (std::abs(r) < 1e-14 * (1.0 + std::abs(w))) return zeta;
    const Complex d = dmap(zeta);
    if (std::abs(d) < 1e-300) break;
    zeta -= r / d;
    if (std::abs(zeta) > 1.5) zeta *= 1.5 / std::abs(zeta);
  }
  if (std::abs(map(zeta) - w) < 1e-11 * (1.0 + std::abs(w))) return zeta;
  fail(ErrorCode::InversionFailure, "inverse: Newton did not converge for " + label_);
}

double ConformalDomain::area() const {
  double a = 0.0;
  for (std::size_t j = 1; j < coeffs_.size(); ++j) a += double(j) * std::norm(coeffs_[j]);
  return kPi * a;
}

namespace {

bool segments_intersect(Complex a, Complex b, Complex c, Complex d) {
  auto cross = [](Complex u, Complex v) {
    return u.real() * v.imag() - u.imag() * v.real();
  };
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

std::vector<Complex> boundary_samples(const ConformalDomain& dom, int M) {
  std::vector<Complex> out(M);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    out[j] = dom.map(Complex{std::cos(th), std::sin(th)});
  }
  return out;
}

bool boundary_is_simple(const std::vector<Complex>& pts) {
  const int M = int(pts.size());
  for (int i = 0; i < M; ++i) {
    const Complex a = pts[i], b = pts[(i + 1) % M];
    const double bx0 = std::min(a.real(), b.real()), bx1 = std::max(a.real(), b.real());
    const double by0 = std::min(a.imag(), b.imag()), by1 = std::max(a.imag(), b.imag());
    for (int j = i + 2; j < M; ++j) {
      if (i == 0 && j == M - 1) continue;  // adjacent through wrap
      const Complex c = pts[j], d = pts[(j + 1) % M];
      if (std::max(c.real(), d.real()) < bx0 || std::min(c.real(), d.real()) > bx1)
        continue;
      if (std::max(c.imag(), d.imag()) < by0 || std::min(c.imag(), d.imag()) > by1)
        continue;
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

double min_pairwise_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double best = 1e300;
  for (const Complex& p : a)
    for (const Complex& q : b) best = std::min(best, std::abs(p - q));
  return best;
}

}  // namespace

int winding_number(const std::vector<Complex>& samples, Complex z) {
  double total = 0.0;
  const int M = int(samples.size());
  for (int j = 0; j < M; ++j) {
    const Complex u = samples[j] - z, v = samples[(j + 1) % M] - z;
    total += std::arg(v / u);
  }
  return int(std::lround(total / (2.0 * kPi)));
}

bool point_in_domain(const ConformalDomain& dom, Complex z, int M) {
  return winding_number(boundary_samples(dom, M), z) != 0;
}

void torus_coordinates(const SurfaceModel& s, Complex w, double& a, double& b) {
  b = w.imag() / s.im_tau();
  a = w.real() - b * s.tau.real();
}

std::vector<ConfigViolation> validate_config(const SurfaceConfig& cfg) {
  std::vector<ConfigViolation> out;
  const int n = int(cfg.domains.size());
  std::vector<std::vector<Complex>> boundaries(n);

  for (int k = 0; k < n; ++k) {
    const ConformalDomain& dom = cfg.domains[k];
    if (dom.coeffs().size() < 2 || std::abs(dom.coeffs()[1]) == 0.0) {
      out.push_back({ConfigViolation::Kind::DegenerateMap,
                     dom.label() + ": c1 vanishes"});
      continue;
    }
    boundaries[k] = boundary_samples(dom, 4096);
    if (!boundary_is_simple(boundaries[k])) {
      out.push_back({ConfigViolation::Kind::Injectivity,
                     dom.label() + ": boundary curve self-intersects"});
    }
    double min_deriv = 1e300;
    for (int ir = 0; ir < 64; ++ir) {
      const double r = (ir + 0.5) / 64.0;
      for (int it = 0; it < 64; ++it) {
        const double th = 2.0 * kPi * it / 64.0;
        min_deriv = std::min(min_deriv,
                             std::abs(dom.dmap(r * Complex{std::cos(th), std::sin(th)})));
      }
    }
    if (min_deriv < 1e-12 * std::abs(dom.coeffs()[1])) {
      out.push_back({ConfigViolation::Kind::Injectivity,
                     dom.label() + ": |f'| vanishes on the disk grid"});
    }
  }

  for (int k = 0; k < n; ++k) {
    for (int j = k + 1; j < n; ++j) {
      if (boundaries[k].empty() || boundaries[j].empty()) continue;
      std::vector<Complex> ck, cj;
      for (int t = 0; t < 4096; t += 16) {
        ck.push_back(boundaries[k][t]);
        cj.push_back(boundaries[j][t]);
      }
      const double dist = min_pairwise_distance(ck, cj);
      bool crossing = false;
      for (const Complex& p : ck) {
        if (point_in_domain(cfg.domains[j], p, 256)) {
          crossing = true;
          break;
        }
      }
      if (!crossing) {
        for (const Complex& p : cj) {
          if (point_in_domain(cfg.domains[k], p, 256)) {
            crossing = true;
            break;
          }
        }
      }
      if (dist <= kGeometryTol || crossing) {
        out.push_back({ConfigViolation::Kind::Disjointness,
                       cfg.domains[k].label() + " and " + cfg.domains[j].label() +
                           " closures are not disjoint"});
      }
    }
  }

  for (int k = 0; k < n; ++k) {
    if (boundaries[k].empty()) continue;
    double dist = 1e300;
    for (int t = 0; t < 4096; t += 8)
      dist = std::min(dist, std::abs(cfg.q - boundaries[k][t]));
    if (dist <= kGeometryTol || point_in_domain(cfg.domains[k], cfg.q)) {
      out.push_back({ConfigViolation::Kind::AnchorPlacement,
                     "q is not separated from " + cfg.domains[k].label()});
    }
  }

  if (cfg.surface.kind == SurfaceKind::Torus) {
    for (int k = 0; k < n; ++k) {
      for (const Complex& p : boundaries[k]) {
        double a, b;
        torus_coordinates(cfg.surface, p, a, b);
        if (a <= kGeometryTol || a >= 1.0 - kGeometryTol || b <= kGeometryTol ||
            b >= 1.0 - kGeometryTol) {
          out.push_back({ConfigViolation::Kind::FundamentalDomain,
                         cfg.domains[k].label() +
                             " does not fit inside one fundamental domain"});
          break;
        }
      }
    }
  }
  return out;
}

QuadratureRule annulus_quadrature(const ConformalDomain& dom, double r_inner,
                                  double r_outer, int n_r, int n_t) {
  if (n_r < 2 || n_t < 4) fail(ErrorCode::InvalidOrder, "quadrature orders too small");
  QuadratureRule rule;
  rule.kind = QuadKind::Area;
  std::vector<double> xr, wr;
  gauss_legendre(n_r, r_inner, r_outer, xr, wr);
  rule.nodes.reserve(std::size_t(n_r) * n_t);
  for (int i = 0; i < n_r; ++i) {
    for (int j = 0; j < n_t; ++j) {
      const double th = 2.0 * kPi * j / n_t;
      const Complex zeta = xr[i] * Complex{std::cos(th), std::sin(th)};
      const Complex fp = dom.dmap(zeta);
      rule.zeta.push_back(zeta);
      rule.fprime.push_back(fp);
      rule.nodes.push_back(dom.map(zeta));
      rule.weights.push_back(wr[i] * xr[i] * (2.0 * kPi / n_t) * std::norm(fp));
    }
  }
  return rule;
}

QuadratureRule area_quadrature(const ConformalDomain& dom, int n_r, int n_t) {
  return annulus_quadrature(dom, 0.0, 1.0, n_r, n_t);
}

LevelCurve level_curve_with_base(const ConformalDomain& dom, Complex a, double s,
                                 int M) {
  if (s < 0.0 || M < 4) fail(ErrorCode::InvalidOrder, "level_curve: bad arguments");
  LevelCurve curve;
  curve.s = s;
  curve.samples.resize(M);
  curve.tangents.resize(M);
  curve.zeta.resize(M);
  const double rho = std::exp(-s);
  const Complex abar = std::conj(a);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    const Complex u = rho * Complex{std::cos(th), std::sin(th)};
    // Disk automorphism moving the Green's pole from 0 to a.
    const Complex denom = 1.0 + abar * u;
    const Complex zeta = (u + a) / denom;
    const Complex dzeta_du = (1.0 - std::norm(a)) / (denom * denom);
    curve.zeta[j] = zeta;
    curve.samples[j] = dom.map(zeta);
    curve.tangents[j] = dom.dmap(zeta) * dzeta_du * kI * u;
  }
  return curve;
}

LevelCurve level_curve(const ConformalDomain& dom, double s, int M) {
  return level_curve_with_base(dom, Complex{0.0, 0.0}, s, M);
}

Complex contour_integral(const LevelCurve& curve,
                         const std::vector<Complex>& integrand_samples) {
  if (integrand_samples.size() != curve.samples.size()) {
    fail(ErrorCode::LengthMismatch, "contour_integral: sample count mismatch");
  }
  Complex acc{0.0, 0.0};
  const int M = int(curve.samples.size());
  for (int j = 0; j < M; ++j) acc += integrand_samples[j] * curve.tangents[j];
  return acc * (2.0 * kPi / M);
}

LevelCurve CollarChart::inner_boundary(int M) const { return level_curve(*dom, eps, M); }

LevelCurve CollarChart::outer_boundary(int M) const { return level_curve(*dom, 0.0, M); }

QuadratureRule CollarChart::quadrature(int n_r, int n_t) const {
  return annulus_quadrature(*dom, inner_radius(), 1.0, n_r, n_t);
}

CollarChart collar(const ConformalDomain& dom, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::InvalidEps, "collar: eps must be positive");
  return CollarChart{&dom, eps};
}

}  // namespace schiffer
