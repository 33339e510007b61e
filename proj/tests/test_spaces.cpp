#include <doctest.h>

#include <cmath>
#include <random>

#include "schiffer/sigma_space.hpp"
#include "schiffer/spaces.hpp"

using namespace schiffer;

namespace {

SurfaceConfig torus_disk_config(double rho, Complex center) {
  SurfaceConfig cfg;
  cfg.surface = make_torus(Complex{0.0, 1.0});
  cfg.domains.emplace_back(std::vector<Complex>{center, Complex{rho, 0}}, "omega1");
  cfg.q = Complex{0.8, 0.85};
  return cfg;
}

Complex random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double re = u(rng);
  const double im = u(rng);
  return Complex{re, im};
}

}  // namespace

TEST_CASE("form inner products on the disk") {
  const ConformalDomain disk({{0, 0}, {1, 0}}, "disk");
  const QuadratureRule quad = area_quadrature(disk, 24, 48);
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      FormExpansion a = zero_form(0, Chirality::Holo, 6);
      FormExpansion b = zero_form(0, Chirality::Holo, 6);
      a.coeffs[n] = 1.0;
      b.coeffs[m] = 1.0;
      const Complex ip = inner_product_forms(a, b, quad);
      const double expect = n == m ? kPi / (n + 1) : 0.0;
      CHECK(std::abs(ip - expect) < 1e-12);
    }
  }
  FormExpansion dz = zero_form(0, Chirality::Holo, 2);
  FormExpansion dzbar = zero_form(0, Chirality::AntiHolo, 2);
  dz.coeffs[0] = 1.0;
  dzbar.coeffs[0] = 1.0;
  const QuadratureRule quad2 = area_quadrature(disk, 8, 16);
  CHECK(inner_product_forms(dz, dzbar, quad2) == Complex{0.0, 0.0});
  CHECK(dz.norm_sq() == doctest::Approx(kPi));
}

TEST_CASE("Dirichlet inner products and the seminorm") {
  const ConformalDomain disk({{0, 0}, {1, 0}}, "disk");
  const QuadratureRule quad = area_quadrature(disk, 24, 48);

  HarmonicExpansion h = zero_harmonic(0, 8);
  h.holo[1] = 1.0;  // h = z
  CHECK(std::abs(dirichlet_inner(h, h, quad) - kPi) < 1e-12);

  for (int n = 0; n <= 5; ++n) {
    HarmonicExpansion g = zero_harmonic(0, 8);
    g.anti[n + 1] = 1.0 / (n + 1);  // conj(z)^{n+1} / (n+1)
    CHECK(std::abs(dirichlet_inner(g, g, quad) - kPi / (n + 1)) < 1e-10);
  }

  std::mt19937_64 rng(3);
  HarmonicExpansion r = zero_harmonic(0, 8);
  for (int n = 1; n <= 8; ++n) {
    r.holo[n] = random_box(rng) * std::pow(0.6, n);
    r.anti[n] = random_box(rng) * std::pow(0.6, n);
  }
  const double with_const = [&] {
    HarmonicExpansion shifted = r;
    shifted.constant += Complex{5.0, 0.0};
    return dirichlet_inner(shifted, shifted, quad).real();
  }();
  CHECK(with_const == doctest::Approx(dirichlet_inner(r, r, quad).real()));
}

TEST_CASE("split_harmonic and the Pythagoras identity") {
  HarmonicExpansion h = zero_harmonic(0, 4);
  h.holo[1] = 1.0;  // z
  h.anti[2] = 1.0;  // conj(z)^2
  const auto parts = split_harmonic(h);
  CHECK(parts.first.coeffs[0] == Complex{1.0, 0.0});
  CHECK(parts.second.coeffs[1] == Complex{2.0, 0.0});

  HarmonicExpansion c = zero_harmonic(0, 4);
  c.constant = Complex{2.0, -1.0};
  const auto zero_parts = split_harmonic(c);
  CHECK(zero_parts.first.coeffs.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(zero_parts.second.coeffs.lpNorm<Eigen::Infinity>() == 0.0);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    HarmonicExpansion r = zero_harmonic(0, 10);
    for (int n = 1; n <= 10; ++n) {
      r.holo[n] = random_box(rng) * std::pow(0.7, n);
      r.anti[n] = random_box(rng) * std::pow(0.7, n);
    }
    const auto p = split_harmonic(r);
    CHECK(p.first.norm_sq() + p.second.norm_sq() ==
          doctest::Approx(r.dirichlet_norm_sq()).epsilon(1e-10));
  }
}

TEST_CASE("V defect on sphere and torus") {
  SurfaceConfig sphere;
  sphere.surface = make_sphere();
  sphere.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "omega1");
  sphere.q = Complex{3, 0};
  FormExpansion any = zero_form(0, Chirality::AntiHolo, 4);
  any.coeffs[0] = 1.0;
  CHECK(v_defect(sphere, {any}).empty());

  const double rho = 0.15;
  const Complex center{0.4, 0.45};
  SurfaceConfig torus = torus_disk_config(rho, center);

  FormExpansion dwbar = zero_form(0, Chirality::AntiHolo, 4);
  dwbar.coeffs[0] = rho;  // pullback of dwbar through f = c + rho zeta
  const auto d1 = v_defect(torus, {dwbar});
  REQUIRE(d1.size() == 1);
  CHECK(std::abs(d1[0]) == doctest::Approx(2.0 * kPi * rho * rho).epsilon(1e-12));

  // Quadrature oracle for the same pairing: -2i * integral of abar dA.
  const QuadratureRule rule = area_quadrature(torus.domains[0], 24, 48);
  Complex quad_val = integrate_kernel_against_form(
      rule, torus.domains[0], dwbar, [](Complex) { return Complex{1.0, 0.0}; });
  quad_val *= -2.0 * kI;
  CHECK(std::abs(d1[0] - quad_val) < 1e-12);

  FormExpansion centered = zero_form(0, Chirality::AntiHolo, 4);
  centered.coeffs[1] = rho * rho;  // (conj(w) - conj(c)) dwbar
  CHECK(std::abs(v_defect(torus, {centered})[0]) < 1e-10);
}

TEST_CASE("W defect routes agree (Stokes)") {
  SurfaceConfig torus = torus_disk_config(0.15, Complex{0.4, 0.45});

  HarmonicExpansion h = zero_harmonic(0, 6);
  h.anti[1] = 0.15;  // trace of conj(w) - conj(c), up to the constant
  const auto d1 = w_defect(torus, {h});
  REQUIRE(d1.size() == 1);
  CHECK(std::abs(d1[0]) == doctest::Approx(2.0 * kPi * sqr(0.15)).epsilon(1e-12));

  HarmonicExpansion g = zero_harmonic(0, 6);
  g.anti[2] = sqr(0.15);  // conj((w - c)^2) through the chart
  CHECK(std::abs(w_defect(torus, {g})[0]) < 1e-10);

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    HarmonicExpansion r = zero_harmonic(0, 8);
    for (int n = 1; n <= 8; ++n) {
      r.holo[n] = random_box(rng) * std::pow(0.6, n);
      r.anti[n] = random_box(rng) * std::pow(0.6, n);
    }
    const auto exact = w_defect(torus, {r});
    const auto curve = w_defect_level_curve(torus, {r}, 256);
    CHECK(std::abs(exact[0] - curve[0]) < 1e-8);
  }
}

TEST_CASE("projection onto V") {
  SurfaceConfig sphere;
  sphere.surface = make_sphere();
  sphere.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "omega1");
  sphere.q = Complex{3, 0};
  FormExpansion a = zero_form(0, Chirality::AntiHolo, 4);
  a.coeffs[0] = Complex{1.0, 2.0};
  const auto same = project_V(sphere, {a});
  CHECK((same[0].coeffs - a.coeffs).lpNorm<Eigen::Infinity>() == 0.0);

  SurfaceConfig torus = torus_disk_config(0.15, Complex{0.4, 0.45});
  FormExpansion b = zero_form(0, Chirality::AntiHolo, 4);
  b.coeffs[0] = 1.0;
  b.coeffs[2] = Complex{0.3, -0.4};
  auto proj = project_V(torus, {b});
  CHECK(std::abs(v_defect(torus, proj)[0]) < 1e-12);
  auto twice = project_V(torus, proj);
  CHECK((twice[0].coeffs - proj[0].coeffs).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("Sigma Dirichlet pairing via the boundary Green identity") {
  SurfaceConfig cfg;
  cfg.surface = make_sphere();
  cfg.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "omega1");
  cfg.q = Complex{3, 0};
  const SigmaBasis basis(cfg, 6);

  // || d (z^-1) ||^2 over the disk exterior is pi; || d(z^-2) ||^2 is 2 pi.
  SigmaExpansion f = zero_sigma_expansion(basis);
  f.holo[0] = 1.0;
  CHECK(std::abs(sigma_dirichlet_inner(cfg, f, f, 256) - kPi) < 1e-12);

  SigmaExpansion g = zero_sigma_expansion(basis);
  g.holo[1] = 1.0;
  CHECK(std::abs(sigma_dirichlet_inner(cfg, g, g, 256) - 2.0 * kPi) < 1e-11);
  CHECK(std::abs(sigma_dirichlet_inner(cfg, f, g, 256)) < 1e-12);

  // Anti-holomorphic members carry the same norms; constants none.
  SigmaExpansion fb = zero_sigma_expansion(basis);
  fb.anti[0] = 1.0;
  CHECK(std::abs(sigma_dirichlet_inner(cfg, fb, fb, 256) - kPi) < 1e-12);
  SigmaExpansion c = zero_sigma_expansion(basis);
  c.constant = Complex{4.0, 1.0};
  CHECK(std::abs(sigma_dirichlet_inner(cfg, c, c, 256)) < 1e-12);

  // Gram of the exact-form family is Hermitian positive definite.
  const Matrix gram = sigma_form_gram(cfg, basis, 256);
  Eigen::LLT<Matrix> llt(gram);
  CHECK(llt.info() == Eigen::Success);
}

TEST_CASE("Sigma holomorphic fit recovers rational data") {
  SurfaceConfig cfg;
  cfg.surface = make_sphere();
  cfg.domains.emplace_back(std::vector<Complex>{{-1.5, 0}, {0.6, 0}, {0.05, 0}}, "a");
  cfg.domains.emplace_back(std::vector<Complex>{{1.5, 0}, {0.6, 0}}, "b");
  cfg.q = Complex{0.0, 0.0};
  const SigmaBasis basis(cfg, 8);
  auto target = [](Complex z) {
    return 0.7 / (z + 1.5) - Complex{0.2, 0.4} / ((z - 1.5) * (z - 1.5));
  };
  const SigmaFitResult fit = fit_sigma_holomorphic(cfg, basis, target, false);
  CHECK(fit.residual < 1e-11);
  CHECK(fit.condition < 1e8);
  CHECK(std::abs(fit.expansion.eval(Complex{0.2, 2.0}) - target(Complex{0.2, 2.0})) <
        1e-10);
}
