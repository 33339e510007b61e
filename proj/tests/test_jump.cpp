#include <doctest.h>

#include <cmath>
#include <random>

#include "schiffer/jump.hpp"

using namespace schiffer;

namespace {

SurfaceConfig unit_disk_config() {
  SurfaceConfig cfg;
  cfg.surface = make_sphere();
  cfg.domains.emplace_back(std::vector<Complex>{{0, 0}, {1, 0}}, "omega1");
  cfg.q = Complex{2.0, 0.0};
  return cfg;
}

SurfaceConfig torus_config() {
  SurfaceConfig cfg;
  cfg.surface = make_torus(Complex{0.0, 1.0});
  cfg.domains.emplace_back(std::vector<Complex>{{0.25, 0.25}, {0.12, 0}}, "omega1");
  cfg.domains.emplace_back(std::vector<Complex>{{0.7, 0.6}, {0.12, 0}}, "omega2");
  cfg.q = Complex{0.5, 0.85};
  return cfg;
}

}  // namespace

TEST_CASE("J reproduces holomorphic data inside and kills it outside") {
  const SurfaceConfig cfg = unit_disk_config();
  JumpOptions opts;
  for (int n = 0; n <= 5; ++n) {
    std::vector<HarmonicExpansion> h{zero_harmonic(0, 8)};
    if (n == 0) {
      h[0].constant = 1.0;
    } else {
      h[0].holo[n] = 1.0;
    }
    const JumpOperator J(cfg, h, opts);
    for (const Complex z : {Complex{0.3, 0.2}, Complex{-0.4, 0.1}}) {
      CHECK(std::abs(J.value(z) - std::pow(z, n)) < 1e-10);
    }
    for (const Complex z : {Complex{1.7, 0.4}, Complex{-2.2, 0.3}}) {
      CHECK(std::abs(J.value(z)) < 1e-10);
    }
  }
}

TEST_CASE("J of the conjugate coordinate: residue closed forms") {
  const SurfaceConfig cfg = unit_disk_config();
  JumpOptions opts;
  std::vector<HarmonicExpansion> h{zero_harmonic(0, 4)};
  h[0].anti[1] = 1.0;  // h = conj(w), trace 1/w
  const JumpOperator J(cfg, h, opts);
  const Complex q = cfg.q;
  for (const Complex z : {Complex{1.9, 0.8}, Complex{-1.4, 0.9}, Complex{0.4, -1.6}}) {
    CHECK(std::abs(J.value(z) - (-1.0 / z + 1.0 / q)) < 1e-10);
  }
  for (const Complex z : {Complex{0.2, 0.1}, Complex{-0.5, 0.3}}) {
    CHECK(std::abs(J.value(z) - 1.0 / q) < 1e-10);
  }
  // The kernel vanishes identically at z = q.
  CHECK(std::abs(J.value(q)) < 1e-12);

  // del J outside: d/dz (-1/z) = 1/z^2.
  const Complex z{1.9, 0.8};
  CHECK(std::abs(J.del(z) - 1.0 / (z * z)) < 1e-10);
}

TEST_CASE("J' matches J after bouncing") {
  const SurfaceConfig cfg = unit_disk_config();
  JumpOptions opts;
  CollarExpansion u = zero_collar(0, cfg.epsilon, -2, 2);
  u.holo_at(2) = Complex{1.0, 0.5};
  u.holo_at(-1) = Complex{0.4, -0.3};
  u.log_coeff = Complex{0.8, 0.1};
  const JumpPrimeOperator Jp(cfg, {u}, opts);

  const HarmonicExpansion g = bounce(u, 8);
  const JumpOperator J(cfg, {g}, opts);
  for (const Complex z : {Complex{1.6, 0.5}, Complex{0.3, 0.15}, Complex{-2.0, 1.0}}) {
    CHECK(std::abs(Jp.value(z) - J.value(z)) < 1e-10);
  }
}

TEST_CASE("jump_solve closed form on the unit disk") {
  const SurfaceConfig cfg = unit_disk_config();
  const SigmaBasis basis(cfg, 10);
  JumpOptions opts;
  std::vector<HarmonicExpansion> h{zero_harmonic(0, 8)};
  h[0].anti[1] = 1.0;  // H = trace of conj(z)
  const JumpSolution sol = jump_solve(cfg, h, basis, opts);

  CHECK(std::abs(sol.h_k[0].constant - 0.5) < 1e-9);
  CHECK(sol.h_k[0].holo.lpNorm<Eigen::Infinity>() < 1e-9);
  // h_sigma = -1/z + 1/2.
  CHECK(std::abs(sol.h_sigma.holo[0] + 1.0) < 1e-9);
  CHECK(std::abs(sol.h_sigma.constant - 0.5) < 1e-9);
  for (Eigen::Index i = 1; i < sol.h_sigma.holo.size(); ++i) {
    CHECK(std::abs(sol.h_sigma.holo[i]) < 1e-9);
  }
  CHECK(sol.residual < 1e-9);
  CHECK(sol.holomorphy_defect < 1e-10);
  CHECK(std::abs(sol.h_sigma.eval(cfg.q)) < 1e-12);
}

TEST_CASE("jump_solve for purely holomorphic data is the identity") {
  const SurfaceConfig cfg = unit_disk_config();
  const SigmaBasis basis(cfg, 10);
  JumpOptions opts;
  std::vector<HarmonicExpansion> h{zero_harmonic(0, 8)};
  h[0].holo[3] = 1.0;
  h[0].constant = Complex{0.2, -0.1};
  const JumpSolution sol = jump_solve(cfg, h, basis, opts);
  CHECK(std::abs(sol.h_k[0].holo[3] - 1.0) < 1e-10);
  CHECK(std::abs(sol.h_k[0].constant - h[0].constant) < 1e-10);
  CHECK(sol.h_sigma.holo.lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(std::abs(sol.h_sigma.constant) < 1e-10);
}

TEST_CASE("jump inverse check recovers target pairs") {
  const SurfaceConfig cfg = unit_disk_config();
  const SigmaBasis basis(cfg, 10);
  JumpOptions opts;

  std::vector<HarmonicExpansion> u_o{zero_harmonic(0, opts.truncation)};
  u_o[0].holo[2] = 1.0;
  SigmaExpansion zero_s = zero_sigma_expansion(basis);
  CHECK(jump_inverse_check(cfg, u_o, zero_s, basis, opts) < 1e-10);

  // (0, -(1/z - 1/q)) recovers the conjugate-coordinate example.
  std::vector<HarmonicExpansion> zeros{zero_harmonic(0, opts.truncation)};
  SigmaExpansion u_s = zero_sigma_expansion(basis);
  u_s.holo[0] = -1.0;
  u_s.anchor_at(cfg.q);
  CHECK(jump_inverse_check(cfg, zeros, u_s, basis, opts) < 1e-8);

  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<HarmonicExpansion> rnd{zero_harmonic(0, opts.truncation)};
  for (int n = 1; n <= 12; ++n) {
    rnd[0].holo[n] = Complex{dist(rng), dist(rng)} * std::pow(0.5, n);
  }
  SigmaExpansion rs = zero_sigma_expansion(basis);
  for (Eigen::Index i = 0; i < rs.holo.size(); ++i) {
    rs.holo[i] = Complex{dist(rng), dist(rng)} * std::pow(0.5, int(i) + 1);
  }
  rs.anchor_at(cfg.q);
  CHECK(jump_inverse_check(cfg, rnd, rs, basis, opts) < 1e-6);
}

TEST_CASE("membership gate and refusal paths") {
  const SurfaceConfig cfg = torus_config();
  const SigmaBasis basis(cfg, 10);
  JumpOptions opts;

  std::vector<HarmonicExpansion> h{zero_harmonic(0, 6), zero_harmonic(1, 6)};
  h[0].anti[1] = 1.0;  // nonzero mean: not in W
  CHECK_THROWS_AS(jump_solve(cfg, h, basis, opts), Error);

  const SurfaceConfig disk = unit_disk_config();
  std::vector<HarmonicExpansion> g{zero_harmonic(0, 4)};
  g[0].holo[1] = 1.0;
  const JumpOperator J(disk, g, opts);
  CHECK_THROWS_AS(J.value(Complex{0.999, 0.0}), Error);  // too close to the curve
}

TEST_CASE("torus jump solve and the ignored holomorphic perturbation") {
  const SurfaceConfig cfg = torus_config();
  const SigmaBasis basis(cfg, 10);
  JumpOptions opts;
  opts.truncation = 8;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-1, 1);
  std::vector<HarmonicExpansion> h;
  for (int k = 0; k < 2; ++k) {
    HarmonicExpansion hk = zero_harmonic(k, 8);
    for (int n = 1; n <= 8; ++n) {
      hk.holo[n] = Complex{dist(rng), dist(rng)} * std::pow(0.5, n);
      hk.anti[n] = Complex{dist(rng), dist(rng)} * std::pow(0.5, n);
    }
    h.push_back(std::move(hk));
  }
  h = project_W(cfg, std::move(h));
  const JumpSolution sol = jump_solve(cfg, h, basis, opts);
  CHECK(sol.residual < 1e-6);

  auto h2 = h;
  h2[0].holo[2] += Complex{0.3, 0.4};
  h2[1].constant += Complex{-0.1, 0.2};
  const JumpSolution sol2 = jump_solve(cfg, h2, basis, opts);
  CHECK((sol.h_sigma.holo - sol2.h_sigma.holo).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK(std::abs(sol.h_sigma.constant - sol2.h_sigma.constant) < 1e-8);
}
