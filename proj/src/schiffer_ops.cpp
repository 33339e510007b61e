#include "schiffer/schiffer_ops.hpp"

#include <cmath>

#include "schiffer/transmission.hpp"

namespace schiffer {

SchifferTOperator::SchifferTOperator(const SurfaceConfig& cfg,
                                     std::vector<FormExpansion> abar, int n_r, int n_t,
                                     const JumpOptions& jump_opts)
    : cfg_(&cfg), abar_(std::move(abar)) {
  if (abar_.size() != cfg.domains.size()) {
    fail(ErrorCode::DomainMismatch, "T: one anti-holomorphic expansion per domain");
  }
  std::vector<HarmonicExpansion> antiders;
  for (std::size_t k = 0; k < abar_.size(); ++k) {
    if (abar_[k].chirality != Chirality::AntiHolo) {
      fail(ErrorCode::DomainMismatch, "T: expansions must be AntiHolo");
    }
    rules_.push_back(area_quadrature(cfg.domains[k], n_r, n_t));
    antiders.push_back(antiderivative(abar_[k]));
  }
  n_t_ = n_t;
  antider_jump_ = std::make_unique<JumpOperator>(cfg, std::move(antiders), jump_opts);
}

void SchifferTOperator::require_clearance(int k, Complex z) const {
  // Five angular quadrature cells, measured in the chart's log radius; the
  // trapezoid accuracy of the area rule is governed by that ratio.
  const double threshold = std::exp(10.0 * kPi / double(n_t_));
  try {
    const Complex zeta = cfg_->domains[std::size_t(k)].inverse(z);
    if (std::abs(zeta) < threshold) {
      fail(ErrorCode::QuadratureOverflow,
           "T: evaluation point within five quadrature cells of a boundary");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InversionFailure) throw;
    // Newton failure means the point is far from the chart.
  }
}

Complex SchifferTOperator::cross_term(int k, Complex z) const {
  if (point_in_domain(cfg_->domains[std::size_t(k)], z, 256)) {
    fail(ErrorCode::TargetMembership, "T cross term: z lies in the source domain");
  }
  require_clearance(k, z);
  const SurfaceModel& surf = cfg_->surface;
  return integrate_kernel_against_form(
      rules_[std::size_t(k)], cfg_->domains[std::size_t(k)], abar_[std::size_t(k)],
      [&](Complex w) { return t_kernel_area(surf, z, w); });
}

Complex SchifferTOperator::self_term(int j, Complex z) const {
  // del h_j = 0 for the pure anti-derivative, so T(Omega_j, Omega_j) abar_j
  // = -del J_q(Gamma_j) h_j.
  return -antider_jump_->del_single(j, z);
}

Complex SchifferTOperator::at_sigma(Complex z) const {
  for (std::size_t k = 0; k < abar_.size(); ++k) {
    if (point_in_domain(cfg_->domains[k], z, 256)) {
      fail(ErrorCode::TargetMembership, "T: point not in Sigma");
    }
  }
  Complex acc{0.0, 0.0};
  for (int k = 0; k < int(abar_.size()); ++k) acc += cross_term(k, z);
  return acc;
}

Complex SchifferTOperator::at_domain(int j, Complex z) const {
  if (!point_in_domain(cfg_->domains[std::size_t(j)], z, 256)) {
    fail(ErrorCode::TargetMembership, "T: point not in the target domain");
  }
  Complex acc = self_term(j, z);
  for (int k = 0; k < int(abar_.size()); ++k) {
    if (k != j) acc += cross_term(k, z);
  }
  return acc;
}

Vector apply_S_compact(const SurfaceConfig& cfg, const std::vector<FormExpansion>& alpha,
                       int n_r, int n_t) {
  const auto basis = compact_holomorphic_basis(cfg.surface);
  Vector out = Vector::Zero(Eigen::Index(basis.size()));
  if (basis.empty()) return out;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    const QuadratureRule rule = area_quadrature(cfg.domains[k], n_r, n_t);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      out[Eigen::Index(j)] += integrate_kernel_against_form(
          rule, cfg.domains[k], alpha[k],
          [&](Complex w) { return bergman_kernel_compact(cfg.surface, cfg.q, w); });
    }
  }
  return out;
}

Complex bergman_kernel_open_disk(const ConformalDomain& dom, Complex z, Complex w) {
  const Complex fz = dom.inverse(z);
  const Complex fw = dom.inverse(w);
  const Complex dz = 1.0 / dom.dmap(fz);
  const Complex dw = 1.0 / dom.dmap(fw);
  const Complex denom = 1.0 - fz * std::conj(fw);
  return dz * std::conj(dw) / (kPi * denom * denom);
}

double laurent_form_norm_sq(const Annulus& a, int n) {
  if (a.r == 0.0 && n < 0) {
    fail(ErrorCode::InvalidOrder, "laurent_form_norm_sq: negative power on a disk");
  }
  if (n == -1) return 2.0 * kPi * std::log(a.R / a.r);
  const double p = 2.0 * n + 2.0;
  return 2.0 * kPi * (std::pow(a.R, p) - std::pow(a.r, p)) / p;
}

Complex bergman_kernel_open_annulus(const Annulus& a, Complex z, Complex w, int N) {
  Complex acc{0.0, 0.0};
  for (int n = -N; n <= N; ++n) {
    if (a.r == 0.0 && n < 0) continue;
    acc += std::pow(z, n) * std::conj(std::pow(w, n)) / laurent_form_norm_sq(a, n);
  }
  return acc;
}

Complex LaurentForm::eval(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += coeffs[i] * std::pow(z, nmin + int(i));
  }
  return acc;
}

double laurent_norm_sq(const Annulus& a, const LaurentForm& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    acc += std::norm(f.coeffs[i]) * laurent_form_norm_sq(a, f.nmin + int(i));
  }
  return acc;
}

void require_nesting(const AnnulusPair& pair) {
  // Coinciding regions are allowed; that is the reproducing configuration.
  const bool disks = pair.inner.r == 0.0 && pair.outer.r == 0.0;
  const bool ok = pair.inner.R <= pair.outer.R &&
                  (disks || pair.inner.r >= pair.outer.r);
  if (!ok) fail(ErrorCode::NestingViolation, "nested pair: cl(Sigma) not inside Sigma'");
}

namespace {

Complex outer_kernel(const AnnulusPair& pair, Complex z, Complex w, int trunc) {
  if (pair.outer.r == 0.0) {
    const ConformalDomain outer_disk({Complex{0, 0}, Complex{pair.outer.R, 0}}, "outer");
    return bergman_kernel_open_disk(outer_disk, z, w);
  }
  return bergman_kernel_open_annulus(pair.outer, z, w, trunc);
}

QuadratureRule inner_rule(const AnnulusPair& pair, int n_r, int n_t) {
  const ConformalDomain identity({Complex{0, 0}, Complex{1, 0}}, "id");
  return annulus_quadrature(identity, pair.inner.r, pair.inner.R, n_r, n_t);
}

std::vector<int> outer_indices(const AnnulusPair& pair, int trunc) {
  std::vector<int> idx;
  for (int n = -trunc; n <= trunc; ++n) {
    if (pair.outer.r == 0.0 && n < 0) continue;
    idx.push_back(n);
  }
  return idx;
}

}  // namespace

Complex apply_S_open(const AnnulusPair& pair, const LaurentForm& alpha, Complex z,
                     int kernel_trunc, int n_r, int n_t) {
  require_nesting(pair);
  const QuadratureRule rule = inner_rule(pair, n_r, n_t);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += outer_kernel(pair, z, rule.nodes[i], kernel_trunc) *
           alpha.eval(rule.nodes[i]) * rule.weights[i];
  }
  return acc;
}

Vector apply_S_open_coeffs(const AnnulusPair& pair, const LaurentForm& alpha,
                           int kernel_trunc, int n_r, int n_t) {
  require_nesting(pair);
  const QuadratureRule rule = inner_rule(pair, n_r, n_t);
  const std::vector<int> idx = outer_indices(pair, kernel_trunc);
  Vector out = Vector::Zero(Eigen::Index(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const double nrm = std::sqrt(laurent_form_norm_sq(pair.outer, idx[i]));
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
      acc += std::conj(std::pow(rule.nodes[m], idx[i])) * alpha.eval(rule.nodes[m]) *
             rule.weights[m];
    }
    out[Eigen::Index(i)] = acc / nrm;
  }
  return out;
}

RestrictionResult restriction(const AnnulusPair& pair, const LaurentForm& beta) {
  require_nesting(pair);
  if (pair.inner.r == 0.0 && beta.nmin < 0) {
    fail(ErrorCode::InvalidOrder, "restriction: negative powers on a disk target");
  }
  return RestrictionResult{beta, 0.0};
}

double adjoint_check(const AnnulusPair& pair, const LaurentForm& alpha,
                     const LaurentForm& beta, int kernel_trunc, int n_r, int n_t) {
  require_nesting(pair);
  const Vector s_coeffs = apply_S_open_coeffs(pair, alpha, kernel_trunc, n_r, n_t);
  const std::vector<int> idx = outer_indices(pair, kernel_trunc);
  Complex lhs{0.0, 0.0};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int n = idx[i];
    if (n < beta.nmin || n > beta.nmax()) continue;
    const Complex bhat = beta.coeffs[std::size_t(n - beta.nmin)] *
                         std::sqrt(laurent_form_norm_sq(pair.outer, n));
    lhs += s_coeffs[Eigen::Index(i)] * std::conj(bhat);
  }
  Complex rhs{0.0, 0.0};
  for (int n = beta.nmin; n <= beta.nmax(); ++n) {
    if (n < alpha.nmin || n > alpha.nmax()) continue;
    rhs += alpha.coeffs[std::size_t(n - alpha.nmin)] *
           std::conj(beta.coeffs[std::size_t(n - beta.nmin)]) *
           laurent_form_norm_sq(pair.inner, n);
  }
  const double scale = std::sqrt(laurent_norm_sq(pair.inner, alpha)) *
                       std::sqrt(laurent_norm_sq(pair.outer, beta));
  return std::abs(lhs - rhs) / scale;
}

VFrame v_frame(const SurfaceConfig& cfg, int N) {
  const int n = int(cfg.domains.size());
  const int per = N + 1;
  const int D = n * per;
  VFrame frame;
  frame.per_domain = per;
  const auto basis = compact_holomorphic_basis(cfg.surface);
  if (basis.empty()) {
    frame.columns = Matrix::Identity(D, D);
    return frame;
  }
  // Constraint functional in orthonormal coordinates.
  Vector lambda = Vector::Zero(D);
  for (int k = 0; k < n; ++k) {
    const auto& fc = cfg.domains[std::size_t(k)].coeffs();
    for (int m = 0; m < per; ++m) {
      Complex raw{0.0, 0.0};
      if (std::size_t(m + 1) < fc.size()) {
        raw = -2.0 * kI * kPi * basis[0].coefficient * fc[std::size_t(m + 1)];
      }
      lambda[k * per + m] = raw * std::sqrt(double(m + 1) / kPi);
    }
  }
  const double lnorm = lambda.norm();
  if (lnorm < 1e-300) fail(ErrorCode::DegenerateGram, "v_frame: empty constraint");
  Matrix r(D, 1);
  r.col(0) = lambda.conjugate() / lnorm;
  Eigen::HouseholderQR<Matrix> qr(r);
  Matrix Q = qr.householderQ();
  frame.columns = Q.rightCols(D - 1);
  return frame;
}

std::vector<FormExpansion> VFrame::to_tuple(const SurfaceConfig& cfg, const Vector& coords,
                                            int N) const {
  const Vector stacked = columns * coords;
  std::vector<FormExpansion> tuple;
  for (std::size_t k = 0; k < cfg.domains.size(); ++k) {
    FormExpansion f = zero_form(int(k), Chirality::AntiHolo, N);
    for (int m = 0; m <= N; ++m) {
      f.coeffs[m] = stacked[Eigen::Index(k) * per_domain + m] *
                    std::sqrt(double(m + 1) / kPi);
    }
    tuple.push_back(std::move(f));
  }
  return tuple;
}

Vector VFrame::to_coords(const std::vector<FormExpansion>& tuple) const {
  Vector stacked = Vector::Zero(Eigen::Index(tuple.size()) * per_domain);
  for (std::size_t k = 0; k < tuple.size(); ++k) {
    for (int m = 0; m < per_domain && m < tuple[k].coeffs.size(); ++m) {
      stacked[Eigen::Index(k) * per_domain + m] =
          tuple[k].coeffs[m] * std::sqrt(kPi / double(m + 1));
    }
  }
  return columns.adjoint() * stacked;
}

OperatorSection assemble_section_T_disk_pair(const SurfaceConfig& cfg, int N, int n_r,
                                             int n_t) {
  if (cfg.domains.size() != 1 || cfg.domains[0].degree() != 1) {
    fail(ErrorCode::InvalidOrder, "T disk-pair section needs a single round disk");
  }
  const Complex c0 = cfg.domains[0].coeffs()[0];
  const double rho0 = std::abs(cfg.domains[0].coeffs()[1]);
  const double ring = 1.6 * rho0;
  const int Mdft = 128;

  OperatorSection section;
  section.rows_basis = BasisSpec{BasisSpec::Kind::Laurent, N};
  section.cols_basis = BasisSpec{BasisSpec::Kind::DiskMonomial, N};
  section.matrix = Matrix::Zero(N + 1, N + 1);

  for (int col = 0; col <= N; ++col) {
    FormExpansion abar = zero_form(0, Chirality::AntiHolo, N);
    abar.coeffs[col] = std::sqrt(double(col + 1) / kPi);
    SchifferTOperator T(cfg, {abar}, n_r, n_t);
    std::vector<Complex> vals(static_cast<std::size_t>(Mdft));
    for (int j = 0; j < Mdft; ++j) {
      const double th = 2.0 * kPi * j / Mdft;
      vals[std::size_t(j)] = T.at_sigma(c0 + ring * Complex{std::cos(th), std::sin(th)});
    }
    const BoundaryTrace modes = trace_from_samples(0, std::move(vals));
    for (int m = 0; m <= N; ++m) {
      const Complex b = modes.mode(-(m + 2)) * std::pow(ring, m + 2);
      // || (z - c0)^{-m-2} dz ||^2 over the disk exterior
      const double norm_sq = kPi * std::pow(rho0, -(2.0 * m + 2.0)) / (m + 1);
      section.matrix(m, col) = b * std::sqrt(norm_sq);
    }
    // Modes that no exterior-holomorphic exact form can produce.
    for (int m = -1; m <= 2; ++m) {
      section.assembly_residual =
          std::max(section.assembly_residual, std::abs(modes.mode(m)));
    }
  }
  Eigen::BDCSVD<Matrix> svd(section.matrix);
  section.singular_values = svd.singularValues();
  return section;
}

OperatorSection assemble_section_T_on_V(const SurfaceConfig& cfg, int N, int n_r,
                                        int n_t, int sigma_trunc, int M) {
  const VFrame frame = v_frame(cfg, N);
  const SigmaBasis basis(cfg, sigma_trunc);
  const Matrix gram = sigma_form_gram(cfg, basis, M);
  Eigen::LLT<Matrix> chol(gram);
  if (chol.info() != Eigen::Success) {
    fail(ErrorCode::DegenerateGram, "T section: Sigma form Gram not positive definite");
  }
  const int dimV = int(frame.columns.cols());

  OperatorSection section;
  section.rows_basis = basis.spec();
  section.cols_basis = BasisSpec{BasisSpec::Kind::DiskMonomial, N};
  section.matrix = Matrix::Zero(basis.num_holo(), dimV);
  for (int col = 0; col < dimV; ++col) {
    Vector e = Vector::Zero(dimV);
    e[col] = Complex{1.0, 0.0};
    const auto tuple = frame.to_tuple(cfg, e, N);
    SchifferTOperator T(cfg, tuple, n_r, n_t);
    const SigmaFormFitResult fit =
        fit_sigma_form(cfg, basis, [&](Complex z) { return T.at_sigma(z); });
    section.assembly_residual = std::max(section.assembly_residual, fit.residual);
    section.matrix.col(col) = chol.matrixL().adjoint() * fit.expansion.dphi_coeffs;
  }
  Eigen::BDCSVD<Matrix> svd(section.matrix);
  section.singular_values = svd.singularValues();
  return section;
}

OperatorSection assemble_section_left_inverse(const SurfaceConfig& cfg, int N, int n_r,
                                              int n_t, int sigma_trunc, int M) {
  const VFrame frame = v_frame(cfg, N);
  const SigmaBasis basis(cfg, sigma_trunc);
  const int dimV = int(frame.columns.cols());

  OperatorSection section;
  section.rows_basis = BasisSpec{BasisSpec::Kind::DiskMonomial, N};
  section.cols_basis = section.rows_basis;
  section.matrix = Matrix::Zero(dimV, dimV);
  for (int col = 0; col < dimV; ++col) {
    Vector e = Vector::Zero(dimV);
    e[col] = Complex{1.0, 0.0};
    const auto tuple = frame.to_tuple(cfg, e, N);
    SchifferTOperator T(cfg, tuple, n_r, n_t);
    const SigmaFormFitResult fit =
        fit_sigma_form(cfg, basis, [&](Complex z) { return T.at_sigma(z); });
    section.assembly_residual = std::max(section.assembly_residual, fit.residual);
    const SigmaFormExpansion& beta = fit.expansion;
    const Complex href = beta.primitive(cfg.q);
    std::vector<FormExpansion> abar_out;
    for (std::size_t k = 0; k < cfg.domains.size(); ++k) {
      const BoundaryTrace tr = trace_of_function(
          [&](Complex z) { return beta.primitive(z) - href; }, cfg.domains[k], int(k), M);
      const TransmitResult t = transmit_trace_to_domain(tr, N + 1);
      abar_out.push_back(t.expansion.delbar());
    }
    section.matrix.col(col) = frame.to_coords(abar_out);
  }
  Eigen::BDCSVD<Matrix> svd(section.matrix);
  section.singular_values = svd.singularValues();
  return section;
}

OperatorSection assemble_section_S_nested(const AnnulusPair& pair, int N,
                                          int kernel_trunc, int n_r, int n_t) {
  require_nesting(pair);
  const std::vector<int> rows = outer_indices(pair, kernel_trunc);
  std::vector<int> cols;
  for (int n = -N; n <= N; ++n) {
    if (pair.inner.r == 0.0 && n < 0) continue;
    cols.push_back(n);
  }
  OperatorSection section;
  section.rows_basis = BasisSpec{BasisSpec::Kind::Laurent, kernel_trunc};
  section.cols_basis = BasisSpec{BasisSpec::Kind::Laurent, N};
  section.matrix = Matrix::Zero(Eigen::Index(rows.size()), Eigen::Index(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    LaurentForm alpha;
    alpha.nmin = cols[c];
    alpha.coeffs = {Complex{1.0, 0.0} /
                    std::sqrt(laurent_form_norm_sq(pair.inner, cols[c]))};
    section.matrix.col(Eigen::Index(c)) =
        apply_S_open_coeffs(pair, alpha, kernel_trunc, n_r, n_t);
  }
  Eigen::BDCSVD<Matrix> svd(section.matrix);
  section.singular_values = svd.singularValues();
  return section;
}

std::vector<Complex> t_image_periods(const SurfaceConfig& cfg,
                                     const SchifferTOperator& T, int M) {
  return boundary_periods(
      cfg, [&](Complex z) { return T.at_sigma(z); }, 1.3, M);
}

}  // namespace schiffer
