#pragma once

#include "coboson/numeric.hpp"
#include "coboson/profile.hpp"

namespace coboson {

/// Exact double factorial m!! with the usual convention (-1)!! = 0!! = 1.
BigInt double_factorial(int m);

/// log(m!!) evaluated through lgamma, for arguments far beyond what any
/// integer type holds.
double log_double_factorial(int m);

/// Closed-form exchange weight of n hydrogen-like cobosons in 3D:
///   lambda_n = 16 (8n-5)!!/(8n-2)!! * (64 pi (a_B/L)^3)^(n-1).
/// Small n uses the exact integer ratio; large n switches to log space so the
/// double factorials cannot overflow. Underflows gracefully to zero.
double hydrogenic_lambda(int n, double a_over_L);

/// Controls for the radial momentum integral behind
/// hydrogenic_lambda_quadrature.
struct QuadratureSpec {
  double rel_tol = 1e-10;    // requested relative accuracy
  double cutoff = 1e3;       // integrate k*a_B over [0, cutoff]
  int max_intervals = 4096;  // adaptive subdivision budget (15 nodes each)
};

/// Same lambda_n, but via adaptive Gauss-Kronrod integration of the radial
/// momentum density  x^2 / (1+x^2)^(4n)  instead of the closed form.
/// Throws QuadratureError when the error estimate misses the tolerance.
double hydrogenic_lambda_quadrature(int n, double a_over_L,
                                    const QuadratureSpec& quad = {});

}  // namespace coboson
