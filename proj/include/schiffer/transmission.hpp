#pragma once

#include <functional>

#include "schiffer/sigma_space.hpp"
#include "schiffer/spaces.hpp"

namespace schiffer {

/// Boundary values on Gamma_k through the chart angle, with Fourier data.
/// On analytic curves the CNT boundary values of finite expansions are the
/// plain continuous traces.
struct BoundaryTrace {
  int domain_index = 0;
  std::vector<Complex> samples;  // values at theta_j = 2 pi j / M
  std::vector<Complex> fourier;  // modes -M/2+1 .. M/2, see mode()

  int modes() const { return int(samples.size()); }
  Complex mode(int m) const;
  double decay_rate() const;  // fitted geometric decay of |mode|
  double mean_square() const;
};

BoundaryTrace trace_from_samples(int domain_index, std::vector<Complex> samples);

/// Trace of an Omega_k expansion on its own boundary.
BoundaryTrace trace(const HarmonicExpansion& h, const ConformalDomain& dom, int M);

/// Trace of Sigma-side data on Gamma_k.
BoundaryTrace trace_sigma(const SigmaExpansion& h, const ConformalDomain& dom, int M);

BoundaryTrace trace_of_function(const std::function<Complex(Complex)>& f,
                                const ConformalDomain& dom, int domain_index, int M);

struct TransmitResult {
  HarmonicExpansion expansion;
  double residual = 0.0;  // trace mismatch after truncation / fitting
};

/// Transmission from Sigma into Omega_j: the harmonic Dirichlet function on
/// Omega_j with the same boundary values, via Fourier modes of the trace.
TransmitResult transmit_to_domain(const SurfaceConfig& cfg, int j,
                                  const SigmaExpansion& h, int truncation, int M);

/// Same, for boundary data given directly as samples on Gamma_j.
TransmitResult transmit_trace_to_domain(const BoundaryTrace& tr, int truncation);

struct TransmitSigmaResult {
  SigmaExpansion expansion;
  double residual = 0.0;
  double condition = 0.0;
};

/// Transmission from O into Sigma: joint least-squares Dirichlet solve over
/// the harmonic Sigma family (rational/elliptic terms, log terms, constant)
/// collocated on every boundary curve, 4x oversampled.
TransmitSigmaResult transmit_to_sigma(const SurfaceConfig& cfg,
                                      const std::vector<HarmonicExpansion>& h,
                                      const SigmaBasis& basis, int M);

/// Exact-form transmission d O(Sigma, Omega_j) d^{-1}: integrate, transmit,
/// differentiate. Requires vanishing periods around every Gamma_k.
struct ExactFormTransmitResult {
  FormExpansion holo_part;   // on Omega_j
  FormExpansion anti_part;   // on Omega_j
  double residual = 0.0;
};

ExactFormTransmitResult transmit_exact_forms(const SurfaceConfig& cfg,
                                             const SigmaFormExpansion& beta, int j,
                                             int truncation, int M);

/// Periods of a dz-coefficient function around every boundary curve.
std::vector<Complex> boundary_periods(const SurfaceConfig& cfg,
                                      const std::function<Complex(Complex)>& dz_coeff,
                                      double chart_radius, int M);

}  // namespace schiffer
