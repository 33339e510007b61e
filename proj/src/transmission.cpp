#include "schiffer/transmission.hpp"

#include <cmath>

namespace schiffer {

Complex BoundaryTrace::mode(int m) const {
  const int M = modes();
  int idx = ((m % M) + M) % M;
  return fourier[std::size_t(idx)];
}

double BoundaryTrace::decay_rate() const {
  // Geometric fit of |mode(m)| against |m| over the resolved range.
  const int M = modes();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int m = 1; m <= M / 4; ++m) {
    const double a = std::max(std::abs(mode(m)), std::abs(mode(-m)));
    if (a < 1e-15) continue;
    const double x = m, y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return 0.0;
  return -(count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double BoundaryTrace::mean_square() const {
  double acc = 0.0;
  for (const Complex& v : samples) acc += std::norm(v);
  return acc / double(samples.size());
}

BoundaryTrace trace_from_samples(int domain_index, std::vector<Complex> samples) {
  BoundaryTrace tr;
  tr.domain_index = domain_index;
  tr.samples = std::move(samples);
  const int M = int(tr.samples.size());
  tr.fourier.assign(std::size_t(M), Complex{0.0, 0.0});
  for (int m = 0; m < M; ++m) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < M; ++j) {
      const double th = -2.0 * kPi * m * j / M;
      acc += tr.samples[std::size_t(j)] * Complex{std::cos(th), std::sin(th)};
    }
    tr.fourier[std::size_t(m)] = acc / double(M);
  }
  return tr;
}

BoundaryTrace trace_of_function(const std::function<Complex(Complex)>& f,
                                const ConformalDomain& dom, int domain_index, int M) {
  std::vector<Complex> samples(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    samples[std::size_t(j)] = f(dom.map(Complex{std::cos(th), std::sin(th)}));
  }
  return trace_from_samples(domain_index, std::move(samples));
}

BoundaryTrace trace(const HarmonicExpansion& h, const ConformalDomain& dom, int M) {
  (void)dom;
  std::vector<Complex> samples(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    samples[std::size_t(j)] = h.eval_chart(Complex{std::cos(th), std::sin(th)});
  }
  return trace_from_samples(h.domain_id, std::move(samples));
}

BoundaryTrace trace_sigma(const SigmaExpansion& h, const ConformalDomain& dom, int M) {
  return trace_of_function([&](Complex z) { return h.eval(z); }, dom, -1, M);
}

TransmitResult transmit_trace_to_domain(const BoundaryTrace& tr, int truncation) {
  TransmitResult out;
  out.expansion = zero_harmonic(tr.domain_index, truncation);
  const int M = tr.modes();
  out.expansion.constant = tr.mode(0);
  for (int m = 1; m <= truncation && m < M / 2; ++m) {
    out.expansion.holo[m] = tr.mode(m);
    out.expansion.anti[m] = tr.mode(-m);
  }
  double tail = 0.0;
  for (int m = truncation + 1; m <= M / 2; ++m) {
    tail += std::norm(tr.mode(m)) + std::norm(tr.mode(-m));
  }
  out.residual = std::sqrt(tail);
  return out;
}

TransmitResult transmit_to_domain(const SurfaceConfig& cfg, int j,
                                  const SigmaExpansion& h, int truncation, int M) {
  const BoundaryTrace tr = trace_of_function([&](Complex z) { return h.eval(z); },
                                             cfg.domains[std::size_t(j)], j, M);
  return transmit_trace_to_domain(tr, truncation);
}

TransmitSigmaResult transmit_to_sigma(const SurfaceConfig& cfg,
                                      const std::vector<HarmonicExpansion>& h,
                                      const SigmaBasis& basis, int M) {
  if (h.size() != cfg.domains.size()) {
    fail(ErrorCode::RegionMismatch, "transmit_to_sigma: one expansion per domain");
  }
  const int n = int(cfg.domains.size());
  const int K = basis.num_holo();
  const int L = basis.num_log();
  const int E = basis.num_extra();
  const int cols = 1 + 2 * K + L + E;
  const int rows_per_curve = std::max(4 * cols / std::max(n, 1), 32);
  Matrix A(n * rows_per_curve, cols);
  Vector b(n * rows_per_curve);
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < rows_per_curve; ++r) {
      const double th = 2.0 * kPi * r / rows_per_curve;
      const Complex zeta{std::cos(th), std::sin(th)};
      const Complex w = cfg.domains[std::size_t(k)].map(zeta);
      const Eigen::Index row = k * rows_per_curve + r;
      A(row, 0) = Complex{1.0, 0.0};
      for (int i = 0; i < K; ++i) {
        const Complex p = basis.phi(i, w);
        A(row, 1 + i) = p;
        A(row, 1 + K + i) = std::conj(p);
      }
      for (int l = 0; l < L; ++l) A(row, 1 + 2 * K + l) = basis.log_term(l, w);
      for (int e = 0; e < E; ++e) {
        A(row, 1 + 2 * K + L + e) = basis.extra_term(e, w);
      }
      b[row] = h[std::size_t(k)].eval_chart(zeta);
    }
  }
  TransmitSigmaResult out;
  const Vector x = solve_least_squares(A, b, &out.condition);
  out.expansion = zero_sigma_expansion(basis);
  out.expansion.constant = x[0];
  out.expansion.holo = x.segment(1, K);
  out.expansion.anti = x.segment(1 + K, K);
  out.expansion.logs = x.segment(1 + 2 * K, L);
  out.expansion.extras = x.segment(1 + 2 * K + L, E);
  // Trace residual on an interleaved validation grid.
  for (int k = 0; k < n; ++k) {
    for (int r = 0; r < M; ++r) {
      const double th = 2.0 * kPi * (r + 0.5) / M;
      const Complex zeta{std::cos(th), std::sin(th)};
      const Complex w = cfg.domains[std::size_t(k)].map(zeta);
      out.residual = std::max(out.residual, std::abs(out.expansion.eval(w) -
                                                     h[std::size_t(k)].eval_chart(zeta)));
    }
  }
  return out;
}

std::vector<Complex> boundary_periods(const SurfaceConfig& cfg,
                                      const std::function<Complex(Complex)>& dz_coeff,
                                      double chart_radius, int M) {
  std::vector<Complex> periods;
  for (const auto& dom : cfg.domains) {
    std::vector<Complex> integrand(static_cast<std::size_t>(M));
    LevelCurve ring;
    ring.s = 0.0;
    ring.samples.resize(std::size_t(M));
    ring.tangents.resize(std::size_t(M));
    ring.zeta.resize(std::size_t(M));
    for (int j = 0; j < M; ++j) {
      const double th = 2.0 * kPi * j / M;
      const Complex zeta = chart_radius * Complex{std::cos(th), std::sin(th)};
      ring.zeta[std::size_t(j)] = zeta;
      ring.samples[std::size_t(j)] = dom.map(zeta);
      ring.tangents[std::size_t(j)] = dom.dmap(zeta) * kI * zeta;
      integrand[std::size_t(j)] = dz_coeff(ring.samples[std::size_t(j)]);
    }
    periods.push_back(contour_integral(ring, integrand));
  }
  return periods;
}

ExactFormTransmitResult transmit_exact_forms(const SurfaceConfig& cfg,
                                             const SigmaFormExpansion& beta, int j,
                                             int truncation, int M) {
  const auto periods = boundary_periods(
      cfg, [&](Complex z) { return beta.eval(z); }, 1.3, M);
  for (const Complex& p : periods) {
    if (std::abs(p) > 1e-8) {
      fail(ErrorCode::NotExact, "transmit_exact_forms: nonzero boundary period");
    }
  }
  const Complex href = beta.primitive(cfg.q);
  const BoundaryTrace tr = trace_of_function(
      [&](Complex z) { return beta.primitive(z) - href; }, cfg.domains[std::size_t(j)],
      j, M);
  const TransmitResult t = transmit_trace_to_domain(tr, truncation);
  ExactFormTransmitResult out;
  auto parts = split_harmonic(t.expansion);
  out.holo_part = std::move(parts.first);
  out.anti_part = std::move(parts.second);
  out.residual = t.residual;
  return out;
}

}  // namespace schiffer
