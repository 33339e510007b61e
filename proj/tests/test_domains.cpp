#include <doctest.h>

#include <cmath>

#include "schiffer/domain.hpp"

using namespace schiffer;

namespace {

SurfaceConfig unit_disk_config() {
  SurfaceConfig cfg;
  cfg.surface = make_sphere();
  cfg.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "omega1");
  cfg.q = Complex{3.0, 0.0};
  return cfg;
}

}  // namespace

TEST_CASE("gauss_legendre integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, 0.0, 1.0, x, w);
  for (int k = 0; k <= 15; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) acc += w[i] * std::pow(x[i], k);
    CHECK(acc == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("validate_config accepts the unit disk and rejects bad setups") {
  CHECK(validate_config(unit_disk_config()).empty());

  SurfaceConfig overlap;
  overlap.surface = make_sphere();
  overlap.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "a");
  overlap.domains.emplace_back(std::vector<Complex>{{1, 0}, {1, 0}}, "b");
  overlap.q = Complex{5.0, 0.0};
  bool saw_disjointness = false;
  for (const auto& v : validate_config(overlap)) {
    saw_disjointness |= v.kind == ConfigViolation::Kind::Disjointness;
  }
  CHECK(saw_disjointness);

  SurfaceConfig pinched;
  pinched.surface = make_sphere();
  pinched.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}, {1, 0}}, "folded");
  pinched.q = Complex{5.0, 0.0};
  bool saw_injectivity = false;
  for (const auto& v : validate_config(pinched)) {
    saw_injectivity |= v.kind == ConfigViolation::Kind::Injectivity;
  }
  CHECK(saw_injectivity);

  SurfaceConfig anchored = unit_disk_config();
  anchored.q = Complex{0.2, 0.1};
  bool saw_anchor = false;
  for (const auto& v : validate_config(anchored)) {
    saw_anchor |= v.kind == ConfigViolation::Kind::AnchorPlacement;
  }
  CHECK(saw_anchor);

  SurfaceConfig wrapped;
  wrapped.surface = make_torus(Complex{0.0, 1.0});
  wrapped.domains.emplace_back(std::vector<Complex>{{0.05, 0.5}, {0.2, 0}}, "edge");
  wrapped.q = Complex{0.6, 0.6};
  bool saw_fundamental = false;
  for (const auto& v : validate_config(wrapped)) {
    saw_fundamental |= v.kind == ConfigViolation::Kind::FundamentalDomain;
  }
  CHECK(saw_fundamental);
}

TEST_CASE("area quadrature: weights, moments, convergence") {
  const ConformalDomain disk({{0, 0}, {1, 0}}, "disk");
  const QuadratureRule rule = area_quadrature(disk, 16, 32);
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(kPi).epsilon(1e-12));

  const ConformalDomain bumped({{0, 0}, {1, 0}, {0.1, 0}}, "bumped");
  const QuadratureRule rule2 = area_quadrature(bumped, 16, 32);
  double total2 = 0.0;
  for (double w : rule2.weights) total2 += w;
  CHECK(total2 == doctest::Approx(kPi * 1.02).epsilon(1e-10));
  CHECK(total2 == doctest::Approx(bumped.area()).epsilon(1e-12));

  Complex moment{0.0, 0.0};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    moment += rule.nodes[i] * std::conj(rule.nodes[i]) * rule.weights[i];
  }
  CHECK(std::abs(moment - kPi / 2.0) < 1e-12);

  // Geometric convergence for an analytic integrand down to the floor.
  auto integrate = [&](int n_r, int n_t) {
    const QuadratureRule r = area_quadrature(disk, n_r, n_t);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      acc += 1.0 / (r.nodes[i] - Complex{2.0, 0.5}) * r.weights[i];
    }
    return acc;
  };
  const Complex ref = integrate(48, 96);
  const double err_coarse = std::abs(integrate(6, 12) - ref);
  const double err_mid = std::abs(integrate(12, 24) - ref);
  const double err_fine = std::abs(integrate(24, 48) - ref);
  CHECK(err_mid < err_coarse);
  CHECK(err_fine < 1e-12);
}

TEST_CASE("level curves and contour integrals") {
  const ConformalDomain disk({{0, 0}, {1, 0}}, "disk");
  const LevelCurve c4 = level_curve(disk, 0.0, 4);
  CHECK(std::abs(c4.samples[0] - Complex{1, 0}) < 1e-15);
  CHECK(std::abs(c4.samples[1] - Complex{0, 1}) < 1e-15);
  CHECK(std::abs(c4.samples[2] - Complex{-1, 0}) < 1e-15);
  CHECK(std::abs(c4.samples[3] - Complex{0, -1}) < 1e-15);

  const LevelCurve half = level_curve(disk, std::log(2.0), 64);
  for (const Complex& w : half.samples) CHECK(std::abs(w) == doctest::Approx(0.5));

  // Green's level property through a nontrivial chart.
  const ConformalDomain big({{0, 0}, {2, 0}, {0.2, 0}}, "big");
  const LevelCurve lc = level_curve(big, 0.1, 32);
  for (const Complex& w : lc.samples) {
    CHECK(-std::log(std::abs(big.inverse(w))) == doctest::Approx(0.1).epsilon(1e-10));
  }

  // Residues.
  const LevelCurve unit = level_curve(disk, 0.0, 128);
  std::vector<Complex> inv(unit.samples.size()), sq(unit.samples.size());
  for (std::size_t i = 0; i < unit.samples.size(); ++i) {
    inv[i] = 1.0 / unit.samples[i];
    sq[i] = unit.samples[i] * unit.samples[i];
  }
  CHECK(std::abs(contour_integral(unit, inv) - 2.0 * kPi * kI) < 1e-13);
  CHECK(std::abs(contour_integral(unit, sq)) < 1e-13);

  const ConformalDomain cubic({{0, 0}, {1, 0}, {0, 0}, {0.3, 0}}, "cubic");
  const LevelCurve cc = level_curve(cubic, 0.0, 256);
  std::vector<Complex> pole(cc.samples.size());
  for (std::size_t i = 0; i < cc.samples.size(); ++i) {
    pole[i] = 1.0 / (cc.samples[i] - cubic.base_point());
  }
  CHECK(std::abs(contour_integral(cc, pole) - 2.0 * kPi * kI) < 1e-10);

  // Exact differentials integrate to zero.
  std::vector<Complex> dF(cc.samples.size());
  for (std::size_t i = 0; i < cc.samples.size(); ++i) {
    dF[i] = 3.0 * cc.samples[i] * cc.samples[i];  // d(w^3)
  }
  CHECK(std::abs(contour_integral(cc, dF)) < 1e-10);

  CHECK_THROWS_AS(contour_integral(unit, pole), Error);
}

TEST_CASE("level curves nest") {
  const ConformalDomain dom({{0.3, 0.1}, {1.2, 0}, {0.15, 0.05}}, "dom");
  const LevelCurve outer = level_curve(dom, 0.05, 256);
  const LevelCurve inner = level_curve(dom, 0.4, 64);
  for (const Complex& w : inner.samples) {
    CHECK(winding_number(outer.samples, w) == 1);
  }
}

TEST_CASE("collar chart") {
  const ConformalDomain disk({{0, 0}, {1, 0}}, "disk");
  const CollarChart ch = collar(disk, std::log(2.0));
  CHECK(ch.inner_radius() == doctest::Approx(0.5));
  const LevelCurve inner = ch.inner_boundary(32);
  const LevelCurve direct = level_curve(disk, std::log(2.0), 32);
  for (std::size_t i = 0; i < inner.samples.size(); ++i) {
    CHECK(std::abs(inner.samples[i] - direct.samples[i]) < 1e-15);
  }
  const QuadratureRule rule = ch.quadrature(16, 32);
  double area = 0.0;
  for (double w : rule.weights) area += w;
  CHECK(area == doctest::Approx(kPi * 0.75).epsilon(1e-12));
  CHECK_THROWS_AS(collar(disk, 0.0), Error);
}

TEST_CASE("Newton inversion of the disk map") {
  const ConformalDomain dom({{0.5, 0.2}, {1.5, 0.1}, {0.1, 0}, {0.05, 0.02}}, "dom");
  for (const Complex zeta : {Complex{0.3, 0.4}, Complex{-0.7, 0.1}, Complex{0.0, 0.9}}) {
    CHECK(std::abs(dom.inverse(dom.map(zeta)) - zeta) < 1e-12);
  }
}
