#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "schiffer/domain.hpp"
#include "schiffer/surface.hpp"
#include "schiffer/theta.hpp"

using namespace schiffer;

namespace {

// Wirtinger derivative oracles built on central differences.
Complex wirt_dz(const std::function<Complex(Complex)>& f, Complex z, double h = 1e-4) {
  const Complex fx = (f(z + h) - f(z - h)) / (2 * h);
  const Complex fy = (f(z + kI * h) - f(z - kI * h)) / (2 * h);
  return 0.5 * (fx - kI * fy);
}

Complex wirt_dzbar(const std::function<Complex(Complex)>& f, Complex z,
                   double h = 1e-4) {
  const Complex fx = (f(z + h) - f(z - h)) / (2 * h);
  const Complex fy = (f(z + kI * h) - f(z - kI * h)) / (2 * h);
  return 0.5 * (fx + kI * fy);
}

}  // namespace

TEST_CASE("theta1 oddness and translation") {
  const Complex tau{0.0, 1.0};
  CHECK(std::abs(theta1(Complex{0, 0}, tau, 0)) < 1e-15);
  CHECK(std::abs(theta1(Complex{0.3, 0}, tau, 0) + theta1(Complex{-0.3, 0}, tau, 0)) <
        1e-15);
  const Complex u{0.2, 0.1};
  CHECK(std::abs(theta1(u + 1.0, tau, 0) + theta1(u, tau, 0)) < 1e-13);
  // Quasi-periodicity in the tau direction.
  const Complex factor = -std::exp(-kI * kPi * tau - 2.0 * kI * kPi * u);
  CHECK(std::abs(theta1(u + tau, tau, 0) - factor * theta1(u, tau, 0)) < 1e-13);
}

TEST_CASE("theta1 derivatives against finite differences") {
  const Complex tau{0.1, 1.2};
  const Complex u{0.31, 0.17};
  for (int d = 1; d <= 3; ++d) {
    const Complex fd =
        wirt_dz([&](Complex v) { return theta1(v, tau, d - 1); }, u, 1e-5);
    CHECK(std::abs(theta1(u, tau, d) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
  CHECK_THROWS_AS(theta1(u, Complex{0.3, -1.0}, 0), Error);
  CHECK_THROWS_AS(theta1(u, tau, 5), Error);
}

TEST_CASE("log-derivative of theta1 matches the direct quotient") {
  const Complex tau{0.0, 1.0};
  for (const Complex u : {Complex{0.23, 0.11}, Complex{0.61, -0.32}, Complex{0.4, 0.7}}) {
    const Complex direct = theta1(u, tau, 1) / theta1(u, tau, 0);
    CHECK(std::abs(log_theta1_d1(u, tau) - direct) < 1e-11 * std::abs(direct));
    const Complex lt2 = theta1(u, tau, 2) / theta1(u, tau, 0) - direct * direct;
    CHECK(std::abs(log_theta1_deriv(2, u, tau) - lt2) < 1e-10 * std::abs(lt2));
    for (int m = 2; m <= 8; ++m) {
      const Complex fd =
          wirt_dz([&](Complex v) { return log_theta1_deriv(m, v, tau); }, u, 1e-5);
      CHECK(std::abs(log_theta1_deriv(m + 1, u, tau) - fd) <
            1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("sphere Green's function values and singularity structure") {
  const SurfaceModel s = make_sphere();
  CHECK(green_function(s, Complex{2, 0}, Complex{1, 0}, Complex{3, 0}).value ==
        doctest::Approx(0.0).epsilon(1e-14));

  const Complex z{0.3, 0.2}, q{2.0, 1.0};
  for (int dir = 0; dir < 8; ++dir) {
    const double th = 2.0 * kPi * dir / 8;
    const Complex w = z + 1e-7 * Complex{std::cos(th), std::sin(th)};
    const double reg = green_function(s, w, z, q).value + std::log(std::abs(w - z));
    CHECK(std::abs(reg - std::log(std::abs(w - q))) < 1e-6);
    const Complex wq = q + 1e-7 * Complex{std::cos(th), std::sin(th)};
    const double reg_q = green_function(s, wq, z, q).value - std::log(std::abs(wq - q));
    CHECK(std::abs(reg_q + std::log(std::abs(wq - z))) < 1e-6);
  }
  CHECK(green_function(s, z, z, q).is_singular);
}

TEST_CASE("torus Green's function is doubly periodic and harmonic") {
  const SurfaceModel s = make_torus(Complex{0.0, 1.0});
  const Complex w{0.31, 0.27}, z{0.1, 0.1}, q{0.6, 0.4};
  const double base = green_function(s, w, z, q).value;
  CHECK(std::abs(green_function(s, w + 1.0, z, q).value - base) < 1e-10);
  CHECK(std::abs(green_function(s, w + s.tau, z, q).value - base) < 1e-10);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.08, 0.92);
  for (int trial = 0; trial < 50; ++trial) {
    const Complex ww{u(rng), u(rng)};
    const Complex zz{u(rng), u(rng)};
    const Complex qq{u(rng), u(rng)};
    if (std::abs(ww - zz) < 0.1 || std::abs(ww - qq) < 0.1 || std::abs(zz - qq) < 0.1) {
      continue;
    }
    const double g0 = green_function(s, ww, zz, qq).value;
    for (int m = -1; m <= 1; ++m) {
      for (int n = -1; n <= 1; ++n) {
        const Complex shift = double(m) + double(n) * s.tau;
        CHECK(std::abs(green_function(s, ww + shift, zz, qq).value - g0) < 1e-10);
      }
    }
  }

  // Five-point Laplacian decays like h^2.
  auto laplacian = [&](const SurfaceModel& surf, Complex w0, Complex z0, Complex q0,
                       double h) {
    const double c = green_function(surf, w0, z0, q0).value;
    const double sum = green_function(surf, w0 + h, z0, q0).value +
                       green_function(surf, w0 - h, z0, q0).value +
                       green_function(surf, w0 + kI * h, z0, q0).value +
                       green_function(surf, w0 - kI * h, z0, q0).value;
    return std::abs(sum - 4.0 * c) / (h * h);
  };
  CHECK(laplacian(s, Complex{0.42, 0.55}, Complex{0.1, 0.1}, Complex{0.8, 0.8}, 1e-3) <
        1e-4);
  const SurfaceModel sp = make_sphere();
  CHECK(laplacian(sp, Complex{0.5, 0.4}, Complex{-0.8, 0.1}, Complex{2.0, 1.0}, 1e-3) <
        1e-4);

  // The torus singularities carry the same signs as the sphere ones.
  const Complex z0{0.35, 0.45}, q0{0.7, 0.2};
  for (int dir = 0; dir < 8; ++dir) {
    const double th = 2.0 * kPi * dir / 8;
    const Complex w0 = z0 + 1e-6 * Complex{std::cos(th), std::sin(th)};
    const double reg = green_function(s, w0, z0, q0).value + std::log(std::abs(w0 - z0));
    CHECK(std::abs(reg) < 5.0);
    const Complex w1 = q0 + 1e-6 * Complex{std::cos(th), std::sin(th)};
    const double reg_q =
        green_function(s, w1, z0, q0).value - std::log(std::abs(w1 - q0));
    CHECK(std::abs(reg_q) < 5.0);
  }
}

TEST_CASE("green_dw matches finite differences") {
  for (const SurfaceModel s : {make_sphere(), make_torus(Complex{0.0, 1.0})}) {
    const bool torus = s.kind == SurfaceKind::Torus;
    const Complex w = torus ? Complex{0.31, 0.52} : Complex{0.4, -0.3};
    const Complex z = torus ? Complex{0.12, 0.2} : Complex{1.5, 0.5};
    const Complex q = torus ? Complex{0.75, 0.8} : Complex{2.5, -0.5};
    const Complex fd = wirt_dz(
        [&](Complex v) { return Complex{green_function(s, v, z, q).value, 0.0}; }, w);
    CHECK(std::abs(green_dw(s, w, z, q) - fd) < 1e-6);
  }
}

TEST_CASE("Schiffer kernel: modulus, symmetry, q-independence") {
  const SurfaceModel s = make_sphere();
  const Complex z{2.0, 0.0}, w{0.3, 0.0};
  const Complex ell = schiffer_kernel(s, z, w, Complex{3, 0});
  CHECK(std::abs(ell) == doctest::Approx(1.0 / (2.0 * kPi * 2.89)).epsilon(1e-9));
  CHECK(std::abs(schiffer_kernel(s, z, w, Complex{5, 1}) - ell) < 1e-12);
  CHECK(std::abs(schiffer_kernel(s, w, z, Complex{3, 0}) - ell) < 1e-12);

  // Finite-difference oracle; the modulus is convention independent.
  const Complex q{3.0, 0.0};
  const Complex ddg = wirt_dz(
      [&](Complex zz) {
        return wirt_dz(
            [&](Complex ww) {
              return Complex{green_function(s, ww, zz, q).value, 0.0};
            },
            w);
      },
      z);
  CHECK(std::abs(ell) == doctest::Approx(std::abs(ddg / kPi)).epsilon(1e-6));

  const SurfaceModel t = make_torus(Complex{0.0, 1.0});
  const Complex zt{0.2, 0.3}, wt{0.7, 0.6};
  const Complex ell_t = schiffer_kernel(t, zt, wt, Complex{0, 0});
  CHECK(std::abs(schiffer_kernel(t, wt, zt, Complex{0, 0}) - ell_t) < 1e-11);
  CHECK_THROWS_AS(schiffer_kernel(s, z, z, q), Error);
}

TEST_CASE("compact Bergman kernel") {
  const SurfaceModel s = make_sphere();
  CHECK(std::abs(bergman_kernel_compact(s, Complex{1, 1}, Complex{0.2, 0})) == 0.0);

  // Sphere: finite differences of g confirm a vanishing kernel.
  const Complex z{0.4, 0.1}, w{1.6, 0.8}, q{3.0, 0.5};
  const Complex ddg_bar = wirt_dz(
      [&](Complex zz) {
        return wirt_dzbar(
            [&](Complex ww) {
              return Complex{green_function(s, ww, zz, q).value, 0.0};
            },
            w);
      },
      z);
  CHECK(std::abs(ddg_bar) < 1e-8);

  const SurfaceModel t = make_torus(Complex{0.0, 1.0});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const Complex base = bergman_kernel_compact(t, Complex{0.5, 0.5}, Complex{0.2, 0.2});
  for (int trial = 0; trial < 100; ++trial) {
    const Complex kz{u(rng), u(rng)}, kw{u(rng), u(rng)};
    CHECK(std::abs(bergman_kernel_compact(t, kz, kw) - base) < 1e-12);
  }

  // Reproducing normalization on tau = 2i: integrating the kernel against
  // dz over the fundamental domain returns dz; || dz ||^2 = 2.
  const SurfaceModel t2 = make_torus(Complex{0.0, 2.0});
  std::vector<double> xa, wa;
  gauss_legendre(24, 0.0, 1.0, xa, wa);
  Complex acc{0.0, 0.0};
  double area = 0.0;
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j) {
      const Complex w2 = xa[i] + xa[j] * t2.tau;
      const double weight = wa[i] * wa[j] * t2.im_tau();
      acc += weight * bergman_kernel_compact(t2, Complex{0.3, 0.9}, w2);
      area += weight;
    }
  }
  CHECK(std::abs(acc - 1.0) < 1e-8);
  CHECK(area == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("compact holomorphic basis") {
  CHECK(compact_holomorphic_basis(make_sphere()).empty());
  const SurfaceModel t = make_torus(Complex{0.0, 1.0});
  const auto basis = compact_holomorphic_basis(t);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0].norm_sq == doctest::Approx(1.0));

  // Area quadrature of the fundamental domain gives || dz ||^2 = Im tau.
  std::vector<double> xa, wa;
  gauss_legendre(16, 0.0, 1.0, xa, wa);
  double norm = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) norm += wa[i] * wa[j] * t.im_tau();
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
}
