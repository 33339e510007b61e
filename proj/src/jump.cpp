#include "schiffer/jump.hpp"

#include <cmath>

namespace schiffer {

namespace {

constexpr double kInnerRatio = 0.9;  // chart-radius separation from a contour

struct CurveGeometry {
  bool in_domain = false;
  double chart_radius = 0.0;
};

CurveGeometry locate(const ConformalDomain& dom, Complex z) {
  CurveGeometry g;
  try {
    const Complex zeta = dom.inverse(z);
    g.chart_radius = std::abs(zeta);
    g.in_domain = g.chart_radius < 1.0;
  } catch (const Error&) {
    g.chart_radius = 1e300;  // far away
  }
  return g;
}

}  // namespace

JumpOperator::JumpOperator(const SurfaceConfig& cfg, std::vector<HarmonicExpansion> h,
                           const JumpOptions& opts)
    : cfg_(&cfg), h_(std::move(h)), opts_(opts) {
  if (h_.size() != cfg.domains.size()) {
    fail(ErrorCode::DomainMismatch, "JumpOperator: one expansion per domain");
  }
  s_ = opts_.s > 0.0 ? opts_.s : cfg.epsilon / 2.0;
  for (int k = 0; k < int(cfg.domains.size()); ++k) {
    curves_.push_back(make_curve(k, s_));
    curves_half_.push_back(make_curve(k, s_ / 2.0));
  }
}

JumpOperator::CurveData JumpOperator::make_curve(int k, double s) const {
  CurveData cd;
  cd.curve = level_curve(cfg_->domains[std::size_t(k)], s, opts_.contour_samples);
  cd.trace_ext.resize(cd.curve.samples.size());
  for (std::size_t j = 0; j < cd.curve.samples.size(); ++j) {
    cd.trace_ext[j] = h_[std::size_t(k)].trace_extension(cd.curve.zeta[j]);
  }
  return cd;
}

Complex JumpOperator::integrate(const CurveData& cd,
                                const std::function<Complex(Complex)>& kernel) const {
  const std::size_t M = cd.curve.samples.size();
  Complex acc{0.0, 0.0};
  for (std::size_t j = 0; j < M; ++j) {
    acc += kernel(cd.curve.samples[j]) * cd.trace_ext[j] * cd.curve.tangents[j];
  }
  return acc * (2.0 * kPi / double(M));
}

Complex JumpOperator::eval_kernel_route(Complex z, bool derivative, int only_k) const {
  const SurfaceModel& surf = cfg_->surface;
  const Complex q = cfg_->q;
  auto kernel = [&](Complex w) -> Complex {
    if (derivative) return schiffer_kernel(surf, z, w, q);
    return -green_dw(surf, w, z, q) / (kPi * kI);
  };

  Complex v{0.0, 0.0}, v_half{0.0, 0.0};
  for (int k = 0; k < int(cfg_->domains.size()); ++k) {
    if (only_k >= 0 && k != only_k) continue;
    const CurveGeometry g = locate(cfg_->domains[std::size_t(k)], z);
    const double rho = std::exp(-s_);
    const bool separated = g.chart_radius < rho * kInnerRatio ||
                           g.chart_radius > std::sqrt(rho) / kInnerRatio;
    if (separated) {
      v += integrate(curves_[std::size_t(k)], kernel);
      v_half += integrate(curves_half_[std::size_t(k)], kernel);
      continue;
    }
    if (!g.in_domain) {
      fail(ErrorCode::PointOnCurve, "J: evaluation point too close to a boundary curve");
    }
    // Shallower curves keeping the evaluation point strictly inside.
    const double rho_req = g.chart_radius / kInnerRatio + 1e-12;
    if (rho_req >= 0.999) {
      fail(ErrorCode::PointOnCurve, "J: evaluation point too close to the boundary");
    }
    const double s_local = -std::log(rho_req);
    v += integrate(make_curve(k, s_local), kernel);
    v_half += integrate(make_curve(k, s_local / 2.0), kernel);
  }
  if (std::abs(v - v_half) > opts_.limit_tol * (1.0 + std::abs(v))) {
    fail(ErrorCode::LimitNotSettled, "J: level-curve limit not settled");
  }
  return v_half;
}

Complex JumpOperator::value(Complex z) const { return eval_kernel_route(z, false, -1); }

Complex JumpOperator::del(Complex z) const { return eval_kernel_route(z, true, -1); }

Complex JumpOperator::value_single(int k, Complex z) const {
  return eval_kernel_route(z, false, k);
}

Complex JumpOperator::del_single(int k, Complex z) const {
  return eval_kernel_route(z, true, k);
}

Complex JumpOperator::delbar(Complex z) const {
  (void)z;
  const Complex c = green_dzbar_dw(cfg_->surface);
  if (c == Complex{0.0, 0.0}) return Complex{0.0, 0.0};
  Complex acc{0.0, 0.0};
  for (std::size_t k = 0; k < curves_.size(); ++k) {
    acc += integrate(curves_half_[k], [](Complex) { return Complex{1.0, 0.0}; });
  }
  return -c / (kPi * kI) * acc;
}

JumpPrimeOperator::JumpPrimeOperator(const SurfaceConfig& cfg,
                                     std::vector<CollarExpansion> u,
                                     const JumpOptions& opts)
    : cfg_(&cfg), u_(std::move(u)), opts_(opts) {
  if (u_.size() != cfg.domains.size()) {
    fail(ErrorCode::RegionMismatch, "JumpPrimeOperator: one collar datum per domain");
  }
  s_ = opts_.s > 0.0 ? opts_.s : cfg.epsilon / 2.0;
  for (std::size_t k = 0; k < u_.size(); ++k) {
    if (s_ >= u_[k].eps) {
      fail(ErrorCode::InvalidEps, "J': level depth must stay inside the collar");
    }
    curves_.push_back(level_curve(cfg.domains[k], s_, opts_.contour_samples));
    curves_half_.push_back(level_curve(cfg.domains[k], s_ / 2.0, opts_.contour_samples));
    std::vector<Complex> e, eh;
    for (const Complex& zeta : curves_.back().zeta) {
      e.push_back(u_[k].trace_extension(zeta));
    }
    for (const Complex& zeta : curves_half_.back().zeta) {
      eh.push_back(u_[k].trace_extension(zeta));
    }
    ext_.push_back(std::move(e));
    ext_half_.push_back(std::move(eh));
  }
}

Complex JumpPrimeOperator::value(Complex z) const {
  auto kernel = [&](Complex w) {
    return -green_dw(cfg_->surface, w, z, cfg_->q) / (kPi * kI);
  };
  auto sum_over = [&](const std::vector<LevelCurve>& curves,
                      const std::vector<std::vector<Complex>>& exts) {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < curves.size(); ++k) {
      const LevelCurve& c = curves[k];
      Complex total{0.0, 0.0};
      for (std::size_t j = 0; j < c.samples.size(); ++j) {
        total += kernel(c.samples[j]) * exts[k][j] * c.tangents[j];
      }
      acc += total * (2.0 * kPi / double(c.samples.size()));
    }
    return acc;
  };
  const Complex v = sum_over(curves_, ext_);
  const Complex vh = sum_over(curves_half_, ext_half_);
  if (std::abs(v - vh) > opts_.limit_tol * (1.0 + std::abs(v))) {
    fail(ErrorCode::LimitNotSettled, "J': level-curve limit not settled");
  }
  return vh;
}

JumpSolution jump_solve(const SurfaceConfig& cfg,
                        const std::vector<HarmonicExpansion>& h,
                        const SigmaBasis& basis, const JumpOptions& opts) {
  const auto defect = w_defect(cfg, h);
  for (const Complex& d : defect) {
    if (std::abs(d) > opts.membership_tol) {
      fail(ErrorCode::NotInW, "jump_solve: data is not in W");
    }
  }
  const JumpOperator jump(cfg, h, opts);
  JumpSolution sol;

  // Domain restrictions by Fourier extraction on an interior ring.
  const int n = int(cfg.domains.size());
  const int Mfft = 256;
  const double r0 = 0.7;
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> vals(static_cast<std::size_t>(Mfft));
    for (int j = 0; j < Mfft; ++j) {
      const double th = 2.0 * kPi * j / Mfft;
      vals[std::size_t(j)] =
          jump.value(cfg.domains[std::size_t(k)].map(r0 * Complex{std::cos(th), std::sin(th)}));
    }
    const BoundaryTrace modes = trace_from_samples(k, std::move(vals));
    HarmonicExpansion hk = zero_harmonic(k, opts.truncation);
    hk.constant = modes.mode(0);
    for (int m = 1; m <= opts.truncation; ++m) {
      hk.holo[m] = modes.mode(m) / std::pow(r0, m);
    }
    for (int m = 1; m <= Mfft / 4; ++m) {
      sol.holomorphy_defect = std::max(sol.holomorphy_defect, std::abs(modes.mode(-m)));
    }
    // Validate the re-expansion on a second ring.
    for (int j = 0; j < 17; ++j) {
      const double th = 2.0 * kPi * (j + 0.21) / 17;
      const Complex zeta = 0.5 * Complex{std::cos(th), std::sin(th)};
      const Complex direct = jump.value(cfg.domains[std::size_t(k)].map(zeta));
      sol.fit_residual = std::max(sol.fit_residual, std::abs(direct - hk.eval_chart(zeta)));
    }
    sol.h_k.push_back(std::move(hk));
  }

  // Sigma restriction by least squares over the holomorphic Sigma family.
  SigmaFitResult fit = fit_sigma_holomorphic(
      cfg, basis, [&](Complex z) { return jump.value(z); }, /*anchor_at_q=*/true);
  sol.h_sigma = std::move(fit.expansion);
  sol.fit_residual = std::max(sol.fit_residual, fit.residual);
  if (sol.fit_residual > opts.fit_tol) {
    fail(ErrorCode::FitResidualExceeded, "jump_solve: re-expansion residual too large");
  }

  // Boundary identity H = -H_sigma + H_k on every curve.
  const int Mb = opts.contour_samples;
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < Mb; ++j) {
      const double th = 2.0 * kPi * j / Mb;
      const Complex zeta{std::cos(th), std::sin(th)};
      const Complex H = h[std::size_t(k)].eval_chart(zeta);
      const Complex Hs = sol.h_sigma.eval(cfg.domains[std::size_t(k)].map(zeta));
      const Complex Hk = sol.h_k[std::size_t(k)].eval_chart(zeta);
      sol.residual = std::max(sol.residual, std::abs(H + Hs - Hk));
    }
  }
  return sol;
}

double jump_inverse_check(const SurfaceConfig& cfg,
                          const std::vector<HarmonicExpansion>& u_o,
                          const SigmaExpansion& u_sigma, const SigmaBasis& basis,
                          const JumpOptions& opts) {
  const int n = int(cfg.domains.size());
  std::vector<HarmonicExpansion> h;
  for (int k = 0; k < n; ++k) {
    const TransmitResult t =
        transmit_to_domain(cfg, k, u_sigma, opts.truncation, 4 * opts.contour_samples);
    HarmonicExpansion hk = u_o[std::size_t(k)];
    hk.constant -= t.expansion.constant;
    hk.holo -= t.expansion.holo;
    hk.anti -= t.expansion.anti;
    h.push_back(std::move(hk));
  }
  const JumpSolution sol = jump_solve(cfg, h, basis, opts);
  double dist = 0.0;
  for (int k = 0; k < n; ++k) {
    dist = std::max(dist, (sol.h_k[std::size_t(k)].holo - u_o[std::size_t(k)].holo)
                              .lpNorm<Eigen::Infinity>());
    dist = std::max(dist,
                    std::abs(sol.h_k[std::size_t(k)].constant - u_o[std::size_t(k)].constant));
  }
  dist = std::max(dist, (sol.h_sigma.holo - u_sigma.holo).lpNorm<Eigen::Infinity>());
  dist = std::max(dist, std::abs(sol.h_sigma.constant - u_sigma.constant));
  return dist;
}

}  // namespace schiffer
