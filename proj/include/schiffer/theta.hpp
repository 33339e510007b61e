#pragma once

#include "schiffer/types.hpp"

namespace schiffer {

/// Jacobi theta function theta1(u|tau) or its u-derivative of order 0..3,
/// from the sine series with nome q = exp(i pi tau).
Complex theta1(Complex u, Complex tau, int deriv_order);

/// (log theta1)'(u) = theta1'/theta1. Evaluated through the cotangent
/// expansion, which stays accurate away from the lattice points.
Complex log_theta1_d1(Complex u, Complex tau);

/// m-th derivative of log theta1 for m >= 1 (so (log theta1)'' is m = 2).
Complex log_theta1_deriv(int m, Complex u, Complex tau);

}  // namespace schiffer
