#include "schiffer/spaces.hpp"

#include <cmath>

namespace schiffer {

namespace {

Complex horner_conj(const Vector& c, Complex zbar) {
  Complex acc{0.0, 0.0};
  for (Eigen::Index j = c.size(); j-- > 0;) acc = acc * zbar + c[j];
  return acc;
}

Complex horner(const Vector& c, Complex z) { return horner_conj(c, z); }

void require_same_domain(int a, int b, const char* who) {
  if (a != b) fail(ErrorCode::DomainMismatch, std::string(who) + ": domain mismatch");
}

}  // namespace

Complex FormExpansion::pullback_coeff(Complex zeta) const {
  if (chirality == Chirality::Holo) return horner(coeffs, zeta);
  return horner(coeffs, std::conj(zeta));
}

double FormExpansion::norm_sq() const {
  double acc = 0.0;
  for (Eigen::Index n = 0; n < coeffs.size(); ++n) {
    acc += std::norm(coeffs[n]) * kPi / double(n + 1);
  }
  return acc;
}

FormExpansion zero_form(int domain_id, Chirality chi, int truncation) {
  FormExpansion f;
  f.domain_id = domain_id;
  f.chirality = chi;
  f.basis = BasisSpec{BasisSpec::Kind::DiskMonomial, truncation};
  f.coeffs = Vector::Zero(truncation + 1);
  return f;
}

Complex HarmonicExpansion::eval_chart(Complex zeta) const {
  return constant + horner(holo, zeta) + horner_conj(anti, std::conj(zeta));
}

Complex HarmonicExpansion::trace_extension(Complex zeta) const {
  Complex acc = constant + horner(holo, zeta);
  Complex zinv_pow{1.0, 0.0};
  const Complex zinv = 1.0 / zeta;
  for (Eigen::Index n = 1; n < anti.size(); ++n) {
    zinv_pow = (n == 1) ? zinv : zinv_pow * zinv;
    acc += anti[n] * zinv_pow;
  }
  return acc;
}

FormExpansion HarmonicExpansion::del() const {
  FormExpansion out = zero_form(domain_id, Chirality::Holo, int(holo.size()) - 1);
  for (Eigen::Index n = 1; n < holo.size(); ++n) out.coeffs[n - 1] = double(n) * holo[n];
  return out;
}

FormExpansion HarmonicExpansion::delbar() const {
  FormExpansion out = zero_form(domain_id, Chirality::AntiHolo, int(anti.size()) - 1);
  for (Eigen::Index n = 1; n < anti.size(); ++n) out.coeffs[n - 1] = double(n) * anti[n];
  return out;
}

double HarmonicExpansion::dirichlet_norm_sq() const {
  double acc = 0.0;
  for (Eigen::Index n = 1; n < holo.size(); ++n) acc += double(n) * kPi * std::norm(holo[n]);
  for (Eigen::Index n = 1; n < anti.size(); ++n) acc += double(n) * kPi * std::norm(anti[n]);
  return acc;
}

HarmonicExpansion zero_harmonic(int domain_id, int truncation) {
  HarmonicExpansion h;
  h.domain_id = domain_id;
  h.basis = BasisSpec{BasisSpec::Kind::DiskMonomial, truncation};
  h.holo = Vector::Zero(truncation + 1);
  h.anti = Vector::Zero(truncation + 1);
  return h;
}

HarmonicExpansion antiderivative(const FormExpansion& form) {
  HarmonicExpansion h = zero_harmonic(form.domain_id, int(form.coeffs.size()));
  for (Eigen::Index n = 0; n < form.coeffs.size(); ++n) {
    const Complex c = form.coeffs[n] / double(n + 1);
    if (form.chirality == Chirality::Holo) {
      h.holo[n + 1] = c;
    } else {
      h.anti[n + 1] = c;
    }
  }
  return h;
}

Complex CollarExpansion::eval_chart(Complex zeta) const {
  Complex acc = log_coeff * std::log(std::abs(zeta));
  Complex zp;
  for (int n = nmin; n <= nmax; ++n) {
    zp = std::pow(zeta, n);
    acc += holo[std::size_t(n - nmin)] * zp +
           anti[std::size_t(n - nmin)] * std::conj(zp);
  }
  return acc;
}

Complex CollarExpansion::trace_extension(Complex zeta) const {
  Complex acc{0.0, 0.0};
  for (int n = nmin; n <= nmax; ++n) {
    acc += holo[std::size_t(n - nmin)] * std::pow(zeta, n) +
           anti[std::size_t(n - nmin)] * std::pow(zeta, -n);
  }
  return acc;  // log|zeta| has vanishing outer trace
}

CollarExpansion zero_collar(int domain_id, double eps, int nmin, int nmax) {
  CollarExpansion u;
  u.domain_id = domain_id;
  u.eps = eps;
  u.nmin = nmin;
  u.nmax = nmax;
  u.holo.assign(std::size_t(nmax - nmin + 1), Complex{0.0, 0.0});
  u.anti.assign(std::size_t(nmax - nmin + 1), Complex{0.0, 0.0});
  return u;
}

HarmonicExpansion bounce(const CollarExpansion& u, int truncation) {
  HarmonicExpansion h = zero_harmonic(u.domain_id, truncation);
  auto add_mode = [&](int m, Complex c) {
    if (c == Complex{0.0, 0.0}) return;
    if (m == 0) {
      h.constant += c;
    } else if (m > 0) {
      if (m > truncation) fail(ErrorCode::InvalidOrder, "bounce: truncation too small");
      h.holo[m] += c;
    } else {
      if (-m > truncation) fail(ErrorCode::InvalidOrder, "bounce: truncation too small");
      h.anti[-m] += c;
    }
  };
  for (int n = u.nmin; n <= u.nmax; ++n) {
    add_mode(n, u.holo[std::size_t(n - u.nmin)]);
    add_mode(-n, u.anti[std::size_t(n - u.nmin)]);
  }
  return h;
}

Complex inner_product_forms(const FormExpansion& a, const FormExpansion& b,
                            const QuadratureRule& quad) {
  require_same_domain(a.domain_id, b.domain_id, "inner_product_forms");
  if (a.chirality != b.chirality) return Complex{0.0, 0.0};
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const double disk_weight = quad.weights[i] / std::norm(quad.fprime[i]);
    acc += a.pullback_coeff(quad.zeta[i]) * std::conj(b.pullback_coeff(quad.zeta[i])) *
           disk_weight;
  }
  return acc;
}

Complex dirichlet_inner(const HarmonicExpansion& h1, const HarmonicExpansion& h2,
                        const QuadratureRule& quad) {
  require_same_domain(h1.domain_id, h2.domain_id, "dirichlet_inner");
  return inner_product_forms(h1.del(), h2.del(), quad) +
         inner_product_forms(h1.delbar(), h2.delbar(), quad);
}

std::pair<FormExpansion, FormExpansion> split_harmonic(const HarmonicExpansion& h) {
  return {h.del(), h.delbar()};
}

Complex form_value(const FormExpansion& f, const ConformalDomain& dom, Complex zeta) {
  const Complex p = f.pullback_coeff(zeta);
  const Complex fp = dom.dmap(zeta);
  return f.chirality == Chirality::Holo ? p / fp : p / std::conj(fp);
}

namespace {

// Exact value of iint_{Omega_k} abar dA in pullback coefficients:
// pi * sum_n c_n * f_{n+1}.
Complex antiholo_area_integral(const ConformalDomain& dom, const FormExpansion& abar) {
  Complex acc{0.0, 0.0};
  const auto& fc = dom.coeffs();
  for (Eigen::Index n = 0; n < abar.coeffs.size(); ++n) {
    if (std::size_t(n + 1) < fc.size()) acc += abar.coeffs[n] * fc[std::size_t(n + 1)];
  }
  return kPi * acc;
}

}  // namespace

std::vector<Complex> v_defect(const SurfaceConfig& cfg,
                              const std::vector<FormExpansion>& abar) {
  const auto basis = compact_holomorphic_basis(cfg.surface);
  std::vector<Complex> out(basis.size(), Complex{0.0, 0.0});
  if (basis.empty()) return out;
  if (abar.size() != cfg.domains.size()) {
    fail(ErrorCode::DomainMismatch, "v_defect: need one expansion per domain");
  }
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < abar.size(); ++k) {
      if (abar[k].chirality != Chirality::AntiHolo) {
        fail(ErrorCode::DomainMismatch, "v_defect: expansions must be AntiHolo");
      }
      acc += basis[j].coefficient * antiholo_area_integral(cfg.domains[k], abar[k]);
    }
    out[j] = -2.0 * kI * acc;  // beta wedge abar = -2i * b * abar_coeff dA
  }
  return out;
}

std::vector<Complex> w_defect(const SurfaceConfig& cfg,
                              const std::vector<HarmonicExpansion>& h) {
  std::vector<FormExpansion> abar;
  abar.reserve(h.size());
  for (const auto& hk : h) abar.push_back(hk.delbar());
  return v_defect(cfg, abar);
}

std::vector<Complex> w_defect_level_curve(const SurfaceConfig& cfg,
                                          const std::vector<HarmonicExpansion>& h,
                                          int M) {
  const auto basis = compact_holomorphic_basis(cfg.surface);
  std::vector<Complex> out(basis.size(), Complex{0.0, 0.0});
  if (basis.empty()) return out;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < h.size(); ++k) {
      const LevelCurve curve = level_curve(cfg.domains[k], 0.0, M);
      std::vector<Complex> integrand(curve.samples.size());
      for (std::size_t i = 0; i < curve.samples.size(); ++i) {
        integrand[i] = h[k].trace_extension(curve.zeta[i]) * basis[j].coefficient;
      }
      acc += contour_integral(curve, integrand);
    }
    out[j] = -acc;
  }
  return out;
}

std::vector<FormExpansion> project_V(const SurfaceConfig& cfg,
                                     std::vector<FormExpansion> abar) {
  const auto basis = compact_holomorphic_basis(cfg.surface);
  if (basis.empty()) return abar;
  if (basis.size() != 1) fail(ErrorCode::DegenerateGram, "project_V: genus > 1 unsupported");

  // Riesz representer of the defect functional under the exact pullback Gram.
  std::vector<Vector> rep(abar.size());
  double rr = 0.0;
  for (std::size_t k = 0; k < abar.size(); ++k) {
    const auto& fc = cfg.domains[k].coeffs();
    rep[k] = Vector::Zero(abar[k].coeffs.size());
    for (Eigen::Index n = 0; n < rep[k].size(); ++n) {
      Complex lambda{0.0, 0.0};
      if (std::size_t(n + 1) < fc.size()) {
        lambda = -2.0 * kI * kPi * basis[0].coefficient * fc[std::size_t(n + 1)];
      }
      rep[k][n] = double(n + 1) / kPi * std::conj(lambda);
      rr += double(n + 1) / kPi * std::norm(lambda);
    }
  }
  if (rr < 1e-300) fail(ErrorCode::DegenerateGram, "project_V: vanishing constraint");
  const Complex defect = v_defect(cfg, abar)[0];
  for (std::size_t k = 0; k < abar.size(); ++k) {
    abar[k].coeffs -= rep[k] * (defect / rr);
  }
  return abar;
}

std::vector<HarmonicExpansion> project_W(const SurfaceConfig& cfg,
                                         std::vector<HarmonicExpansion> h) {
  std::vector<FormExpansion> abar;
  abar.reserve(h.size());
  for (const auto& hk : h) abar.push_back(hk.delbar());
  abar = project_V(cfg, std::move(abar));
  for (std::size_t k = 0; k < h.size(); ++k) {
    for (Eigen::Index n = 0; n < abar[k].coeffs.size() && n + 1 < h[k].anti.size(); ++n) {
      h[k].anti[n + 1] = abar[k].coeffs[n] / double(n + 1);
    }
  }
  return h;
}

}  // namespace schiffer
