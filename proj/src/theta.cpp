#include "schiffer/theta.hpp"

#include <cmath>
#include <vector>

namespace schiffer {

namespace {

void check_tau(Complex tau) {
  if (!(tau.imag() > 0.0)) {
    fail(ErrorCode::NonConvergent, "theta1: Im(tau) must be positive");
  }
}

// Coefficients of d^k/dx^k cot(x) as a polynomial in cot(x), built from
// cot' = -(1 + cot^2).
std::vector<double> cot_derivative_poly(int k) {
  std::vector<double> p{0.0, 1.0};  // p(X) = X
  for (int step = 0; step < k; ++step) {
    std::vector<double> dp(p.size() > 1 ? p.size() - 1 : 1, 0.0);
    for (std::size_t j = 1; j < p.size(); ++j) dp[j - 1] = p[j] * double(j);
    std::vector<double> next(dp.size() + 2, 0.0);
    for (std::size_t j = 0; j < dp.size(); ++j) {
      next[j] -= dp[j];
      next[j + 2] -= dp[j];
    }
    p = std::move(next);
  }
  return p;
}

Complex eval_poly(const std::vector<double>& p, Complex x) {
  Complex acc{0.0, 0.0};
  for (std::size_t j = p.size(); j-- > 0;) acc = acc * x + p[j];
  return acc;
}

Complex trig_cycle(int phase, Complex x) {
  switch (((phase % 4) + 4) % 4) {
    case 0: return std::sin(x);
    case 1: return std::cos(x);
    case 2: return -std::sin(x);
    default: return -std::cos(x);
  }
}

}  // namespace

Complex theta1(Complex u, Complex tau, int deriv_order) {
  check_tau(tau);
  if (deriv_order < 0 || deriv_order > 3) {
    fail(ErrorCode::InvalidOrder, "theta1: deriv_order must be in 0..3");
  }
  Complex sum{0.0, 0.0};
  double running_max = 0.0;
  const int max_terms = 2000;
  for (int n = 0; n < max_terms; ++n) {
    const double half = n + 0.5;
    const Complex qpow = std::exp(kI * kPi * tau * (half * half));
    const double freq = (2 * n + 1) * kPi;
    Complex term = 2.0 * qpow * std::pow(freq, deriv_order) *
                   trig_cycle(deriv_order, freq * u);
    if (n % 2 == 1) term = -term;
    sum += term;
    const double mag = std::abs(term);
    running_max = std::max(running_max, mag);
    if (n >= 4 && mag <= kSeriesCutoff * running_max) return sum;
  }
  fail(ErrorCode::NonConvergent, "theta1: series did not converge");
}

Complex log_theta1_d1(Complex u, Complex tau) {
  return log_theta1_deriv(1, u, tau);
}

Complex log_theta1_deriv(int m, Complex u, Complex tau) {
  check_tau(tau);
  if (m < 1) fail(ErrorCode::InvalidOrder, "log_theta1_deriv: m must be >= 1");

  // Shift u by integers; the expansion below is 1-periodic.
  u -= std::floor(u.real() + 0.5);

  // d^{m-1}/du^{m-1} [pi cot(pi u)]
  const std::vector<double> poly = cot_derivative_poly(m - 1);
  const Complex cot_pu = std::cos(kPi * u) / std::sin(kPi * u);
  Complex value = std::pow(kPi, m) * eval_poly(poly, cot_pu);

  // d^{m-1}/du^{m-1} [4 pi sum q^{2n}/(1-q^{2n}) sin(2 pi n u)]
  const Complex q2 = std::exp(2.0 * kI * kPi * tau);
  Complex q2n{1.0, 0.0};
  double running_max = std::abs(value);
  const int max_terms = 4000;
  for (int n = 1; n < max_terms; ++n) {
    q2n *= q2;
    const double freq = 2.0 * kPi * n;
    const Complex term = 4.0 * kPi * q2n / (1.0 - q2n) *
                         std::pow(freq, m - 1) * trig_cycle(m - 1, freq * u);
    value += term;
    const double mag = std::abs(term);
    running_max = std::max(running_max, mag);
    if (n >= 4 && mag < kSeriesCutoff * running_max) return value;
  }
  fail(ErrorCode::NonConvergent, "log_theta1_deriv: series did not converge");
}

}  // namespace schiffer
