#include "schiffer/sigma_space.hpp"

#include <cmath>

#include "schiffer/theta.hpp"

namespace schiffer {

SigmaBasis::SigmaBasis(const SurfaceConfig& cfg, int truncation)
    : surface_(cfg.surface), trunc_(truncation) {
  for (const auto& d : cfg.domains) centers_.push_back(d.base_point());
  const int n = int(centers_.size());
  if (surface_.kind == SurfaceKind::Sphere) {
    num_holo_ = n * trunc_;
  } else {
    num_holo_ = (n - 1) + n * (trunc_ - 1);
  }
}

BasisSpec SigmaBasis::spec() const {
  return BasisSpec{surface_.kind == SurfaceKind::Sphere ? BasisSpec::Kind::Laurent
                                                        : BasisSpec::Kind::TorusRational,
                   trunc_};
}

Complex SigmaBasis::phi(int i, Complex z) const {
  const int n = int(centers_.size());
  if (surface_.kind == SurfaceKind::Sphere) {
    const int k = i / trunc_;
    const int m = i % trunc_ + 1;
    return std::pow(z - centers_[std::size_t(k)], -m);
  }
  if (i < n - 1) {
    return log_theta1_d1(z - centers_[std::size_t(i)], surface_.tau) -
           log_theta1_d1(z - centers_[std::size_t(i + 1)], surface_.tau);
  }
  const int j = i - (n - 1);
  const int k = j / (trunc_ - 1);
  const int m = j % (trunc_ - 1) + 2;
  return log_theta1_deriv(m, z - centers_[std::size_t(k)], surface_.tau);
}

int SigmaBasis::order(int i) const {
  const int n = int(centers_.size());
  if (surface_.kind == SurfaceKind::Sphere) return i % trunc_ + 1;
  if (i < n - 1) return 1;
  return (i - (n - 1)) % (trunc_ - 1) + 2;
}

Complex SigmaBasis::dphi(int i, Complex z) const {
  const int n = int(centers_.size());
  if (surface_.kind == SurfaceKind::Sphere) {
    const int k = i / trunc_;
    const int m = i % trunc_ + 1;
    return -double(m) * std::pow(z - centers_[std::size_t(k)], -m - 1);
  }
  if (i < n - 1) {
    return log_theta1_deriv(2, z - centers_[std::size_t(i)], surface_.tau) -
           log_theta1_deriv(2, z - centers_[std::size_t(i + 1)], surface_.tau);
  }
  const int j = i - (n - 1);
  const int k = j / (trunc_ - 1);
  const int m = j % (trunc_ - 1) + 2;
  return log_theta1_deriv(m + 1, z - centers_[std::size_t(k)], surface_.tau);
}

double SigmaBasis::log_term(int r, Complex z) const {
  const GreenValue g =
      green_function(surface_, z, centers_[std::size_t(r)], centers_[std::size_t(r + 1)]);
  return g.value;
}

Complex SigmaBasis::dlog_term(int r, Complex z) const {
  return green_dw(surface_, z, centers_[std::size_t(r)], centers_[std::size_t(r + 1)]);
}

int SigmaBasis::num_extra() const {
  // Two handle-flux directions; dipoles at further centers differ from the
  // first by members of the holomorphic/conjugate span.
  return surface_.kind == SurfaceKind::Torus ? 2 : 0;
}

double SigmaBasis::extra_term(int r, Complex z) const {
  const Complex e = r % 2 == 0 ? Complex{1.0, 0.0} : kI;
  const Complex l1 = log_theta1_d1(z - centers_[0], surface_.tau);
  return (e * l1).real() - 2.0 * kPi / surface_.im_tau() * z.imag() * e.imag();
}

Complex SigmaBasis::dextra_term(int r, Complex z) const {
  const Complex e = r % 2 == 0 ? Complex{1.0, 0.0} : kI;
  const Complex l2 = log_theta1_deriv(2, z - centers_[0], surface_.tau);
  return 0.5 * e * l2 - 2.0 * kPi / surface_.im_tau() * e.imag() / (2.0 * kI);
}

Complex SigmaExpansion::eval(Complex z) const {
  Complex acc = constant;
  for (Eigen::Index i = 0; i < holo.size(); ++i) {
    if (holo[i] != Complex{0.0, 0.0}) acc += holo[i] * basis.phi(int(i), z);
  }
  for (Eigen::Index i = 0; i < anti.size(); ++i) {
    if (anti[i] != Complex{0.0, 0.0}) acc += anti[i] * std::conj(basis.phi(int(i), z));
  }
  for (Eigen::Index r = 0; r < logs.size(); ++r) {
    if (logs[r] != Complex{0.0, 0.0}) acc += logs[r] * basis.log_term(int(r), z);
  }
  for (Eigen::Index r = 0; r < extras.size(); ++r) {
    if (extras[r] != Complex{0.0, 0.0}) acc += extras[r] * basis.extra_term(int(r), z);
  }
  return acc;
}

Complex SigmaExpansion::del(Complex z) const {
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < holo.size(); ++i) {
    if (holo[i] != Complex{0.0, 0.0}) acc += holo[i] * basis.dphi(int(i), z);
  }
  for (Eigen::Index r = 0; r < logs.size(); ++r) {
    if (logs[r] != Complex{0.0, 0.0}) acc += logs[r] * basis.dlog_term(int(r), z);
  }
  for (Eigen::Index r = 0; r < extras.size(); ++r) {
    if (extras[r] != Complex{0.0, 0.0}) acc += extras[r] * basis.dextra_term(int(r), z);
  }
  return acc;
}

Complex SigmaExpansion::delbar(Complex z) const {
  Complex acc{0.0, 0.0};
  for (Eigen::Index i = 0; i < anti.size(); ++i) {
    if (anti[i] != Complex{0.0, 0.0}) acc += anti[i] * std::conj(basis.dphi(int(i), z));
  }
  for (Eigen::Index r = 0; r < logs.size(); ++r) {
    // Real harmonic term: delbar = conj(del).
    if (logs[r] != Complex{0.0, 0.0}) acc += logs[r] * std::conj(basis.dlog_term(int(r), z));
  }
  for (Eigen::Index r = 0; r < extras.size(); ++r) {
    if (extras[r] != Complex{0.0, 0.0}) {
      acc += extras[r] * std::conj(basis.dextra_term(int(r), z));
    }
  }
  return acc;
}

void SigmaExpansion::anchor_at(Complex q) { constant -= eval(q); }

bool SigmaExpansion::is_holomorphic(double tol) const {
  return anti.lpNorm<Eigen::Infinity>() <= tol &&
         logs.lpNorm<Eigen::Infinity>() <= tol &&
         (extras.size() == 0 || extras.lpNorm<Eigen::Infinity>() <= tol);
}

SigmaExpansion zero_sigma_expansion(const SigmaBasis& basis) {
  SigmaExpansion e;
  e.basis = basis;
  e.holo = Vector::Zero(basis.num_holo());
  e.anti = Vector::Zero(basis.num_holo());
  e.logs = Vector::Zero(std::max(0, basis.num_log()));
  e.extras = Vector::Zero(basis.num_extra());
  return e;
}

Complex SigmaFormExpansion::eval(Complex z) const {
  Complex acc = dz_coeff;
  for (Eigen::Index i = 0; i < dphi_coeffs.size(); ++i) {
    if (dphi_coeffs[i] != Complex{0.0, 0.0}) acc += dphi_coeffs[i] * basis.dphi(int(i), z);
  }
  for (Eigen::Index k = 0; k < pole_coeffs.size(); ++k) {
    if (pole_coeffs[k] == Complex{0.0, 0.0}) continue;
    const Complex c = basis.centers()[std::size_t(k)];
    if (basis.surface().kind == SurfaceKind::Sphere) {
      acc += pole_coeffs[k] / (z - c);
    } else {
      acc += pole_coeffs[k] * log_theta1_d1(z - c, basis.surface().tau);
    }
  }
  return acc;
}

Complex SigmaFormExpansion::primitive(Complex z) const {
  if (pole_coeffs.size() && pole_coeffs.lpNorm<Eigen::Infinity>() > 0.0) {
    fail(ErrorCode::NotExact, "primitive: simple-pole terms have no primitive");
  }
  Complex acc = dz_coeff * z;
  for (Eigen::Index i = 0; i < dphi_coeffs.size(); ++i) {
    if (dphi_coeffs[i] != Complex{0.0, 0.0}) acc += dphi_coeffs[i] * basis.phi(int(i), z);
  }
  return acc;
}

SigmaFormExpansion zero_sigma_form(const SigmaBasis& basis) {
  SigmaFormExpansion f;
  f.basis = basis;
  f.dphi_coeffs = Vector::Zero(basis.num_holo());
  f.pole_coeffs = Vector::Zero(Eigen::Index(basis.centers().size()));
  return f;
}

namespace {

// 1/2 contour_{del Sigma} F *conj(dG) with del Sigma = -sum Gamma_k (ccw).
// F is sampled by `value`, dG by its del and delbar coefficients.
Complex boundary_green_pairing(const SurfaceConfig& cfg,
                               const std::function<Complex(Complex)>& value,
                               const std::function<Complex(Complex)>& del_g,
                               const std::function<Complex(Complex)>& delbar_g, int M) {
  Complex acc{0.0, 0.0};
  for (const auto& dom : cfg.domains) {
    const LevelCurve curve = level_curve(dom, 0.0, M);
    std::vector<Complex> integrand(curve.samples.size());
    for (std::size_t j = 0; j < curve.samples.size(); ++j) {
      const Complex w = curve.samples[j];
      const Complex wp = curve.tangents[j];
      const Complex star = -kI * std::conj(delbar_g(w)) * wp +
                           kI * std::conj(del_g(w)) * std::conj(wp);
      integrand[j] = value(w) * star;
    }
    Complex total{0.0, 0.0};
    for (const Complex& t : integrand) total += t;
    acc += total * (2.0 * kPi / double(M));
  }
  return -0.5 * acc;
}

}  // namespace

Complex sigma_dirichlet_inner(const SurfaceConfig& cfg, const SigmaExpansion& F,
                              const SigmaExpansion& G, int M) {
  return boundary_green_pairing(
      cfg, [&](Complex z) { return F.eval(z); }, [&](Complex z) { return G.del(z); },
      [&](Complex z) { return G.delbar(z); }, M);
}

Matrix sigma_form_gram(const SurfaceConfig& cfg, const SigmaBasis& basis, int M) {
  const int K = basis.num_holo();
  // Cache basis values and derivatives on all boundary curves.
  const int n = int(cfg.domains.size());
  std::vector<LevelCurve> curves;
  curves.reserve(std::size_t(n));
  for (const auto& dom : cfg.domains) curves.push_back(level_curve(dom, 0.0, M));
  Matrix vals(K, n * M), ders(K, n * M);
  for (int i = 0; i < K; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < M; ++j) {
        vals(i, k * M + j) = basis.phi(i, curves[std::size_t(k)].samples[std::size_t(j)]);
        ders(i, k * M + j) = basis.dphi(i, curves[std::size_t(k)].samples[std::size_t(j)]);
      }
    }
  }
  Matrix gram(K, K);
  for (int a = 0; a < K; ++a) {
    for (int b = 0; b < K; ++b) {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < n; ++k) {
        Complex total{0.0, 0.0};
        for (int j = 0; j < M; ++j) {
          const Complex wp = curves[std::size_t(k)].tangents[std::size_t(j)];
          total += vals(a, k * M + j) * kI * std::conj(ders(b, k * M + j)) * std::conj(wp);
        }
        acc += total * (2.0 * kPi / double(M));
      }
      gram(a, b) = -0.5 * acc;
    }
  }
  // Symmetrize against quadrature roundoff.
  gram = 0.5 * (gram + gram.adjoint()).eval();
  return gram;
}

std::vector<Complex> sigma_fit_points(const SurfaceConfig& cfg,
                                      const std::vector<double>& radii, int per_ring) {
  std::vector<Complex> pts;
  for (const auto& dom : cfg.domains) {
    for (double rho : radii) {
      for (int j = 0; j < per_ring; ++j) {
        const double th = 2.0 * kPi * (j + 0.37) / per_ring;
        pts.push_back(dom.map(rho * Complex{std::cos(th), std::sin(th)}));
      }
    }
  }
  return pts;
}

Vector solve_least_squares(const Matrix& A, const Vector& b, double* condition) {
  // Equilibrate columns; the rational/elliptic families span many orders of
  // magnitude at fixed collocation radii.
  Eigen::VectorXd scale(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double s = A.col(j).cwiseAbs().maxCoeff();
    scale[j] = s > 0.0 ? 1.0 / s : 1.0;
  }
  const Matrix As = A * scale.asDiagonal();
  Eigen::BDCSVD<Matrix> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  const double smin = sv.size() ? sv[sv.size() - 1] : 0.0;
  if (condition) *condition = smin > 0.0 ? smax / smin : 1e300;
  if (smin <= 0.0 || smax / smin > 1e10) {
    fail(ErrorCode::IllConditionedFit, "least squares: condition cap 1e10 exceeded");
  }
  return scale.asDiagonal() * svd.solve(b);
}

SigmaFitResult fit_sigma_holomorphic(const SurfaceConfig& cfg, const SigmaBasis& basis,
                                     const std::function<Complex(Complex)>& values,
                                     bool anchor_at_q) {
  const std::vector<Complex> pts = sigma_fit_points(cfg, {1.3, 1.6}, 48);
  const std::vector<Complex> check = sigma_fit_points(cfg, {1.45}, 29);
  const int K = basis.num_holo();
  Matrix A(pts.size(), K + 1);
  Vector b(pts.size());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    A(Eigen::Index(r), 0) = Complex{1.0, 0.0};
    for (int i = 0; i < K; ++i) A(Eigen::Index(r), i + 1) = basis.phi(i, pts[r]);
    b[Eigen::Index(r)] = values(pts[r]);
  }
  SigmaFitResult out;
  Vector x = solve_least_squares(A, b, &out.condition);
  out.expansion = zero_sigma_expansion(basis);
  out.expansion.constant = x[0];
  out.expansion.holo = x.segment(1, K);
  for (const Complex& p : check) {
    out.residual = std::max(out.residual, std::abs(out.expansion.eval(p) - values(p)));
  }
  if (anchor_at_q) out.expansion.anchor_at(cfg.q);
  return out;
}

SigmaFormFitResult fit_sigma_form(const SurfaceConfig& cfg, const SigmaBasis& basis,
                                  const std::function<Complex(Complex)>& dz_coeff) {
  const std::vector<Complex> pts = sigma_fit_points(cfg, {1.3, 1.6}, 48);
  const std::vector<Complex> check = sigma_fit_points(cfg, {1.45}, 29);
  const int K = basis.num_holo();
  Matrix A(pts.size(), K);
  Vector b(pts.size());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    for (int i = 0; i < K; ++i) A(Eigen::Index(r), i) = basis.dphi(i, pts[r]);
    b[Eigen::Index(r)] = dz_coeff(pts[r]);
  }
  SigmaFormFitResult out;
  out.expansion = zero_sigma_form(basis);
  out.expansion.dphi_coeffs = solve_least_squares(A, b, &out.condition);
  for (const Complex& p : check) {
    out.residual = std::max(out.residual, std::abs(out.expansion.eval(p) - dz_coeff(p)));
  }
  return out;
}

}  // namespace schiffer
