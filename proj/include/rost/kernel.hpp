#pragma once

// Gaussian primitives shared by every module: standard normal pdf/cdf/quantile,
// the Brownian transition density, and the expected-local-time kernel with its
// closed-form partial derivatives.

namespace rost {

inline constexpr double INV_SQRT_2PI = 0.39894228040143267794;
inline constexpr double SQRT_2PI = 2.50662827463100050242;

double norm_pdf(double z);
double norm_cdf(double z);

// Quantile of the standard normal. Tail-series initial guess refined by three
// Newton steps on the cdf; exact to double precision for p in (1e-300, 1-1e-16).
double norm_cdf_inv(double p);

// Transition density of Brownian motion over elapsed time tau, displacement dx.
// Returns 0 for tau <= 0 (the degenerate case never carries density mass here).
double heat_kernel(double tau, double dx);

// Four-argument form p(t, x, u, y): density of ending at y at time u having
// started at x at time t.
double heat_kernel(double t, double x, double u, double y);

// E_x[L^y_u]: expected local time at level y accumulated by time u by a
// Brownian motion started at x. Equals the time integral of the transition
// density, with closed form
//   d*(2*Phi(d/s) - 1) + 2*s*phi(d/s) - |d|,  d = x - y, s = sqrt(u).
// Has a genuine cusp in d at d = 0 (one-sided slopes -/+1).
double expected_local_time(double x, double y, double u);

// d/dx of expected_local_time: (2*Phi(d/s) - 1) - sign(d). At the cusp d = 0
// the symmetric value 0 is returned.
double expected_local_time_dx(double x, double y, double u);

// d/du of expected_local_time: the transition density itself.
double expected_local_time_du(double x, double y, double u);

} // namespace rost
