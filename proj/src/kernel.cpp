#include "rost/kernel.hpp"

#include <cmath>

namespace rost {

double norm_pdf(double z) { return INV_SQRT_2PI * std::exp(-0.5 * z * z); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

double norm_cdf_inv(double p) {
  // Rational tail approximation in t = sqrt(-2 log p_tail), then Newton on the
  // cdf. Three steps take the ~3e-3 seed error below double roundoff.
  bool upper = p > 0.5;
  double q = upper ? 1.0 - p : p;
  double t = std::sqrt(-2.0 * std::log(q));
  double z = t - (2.30753 + 0.27061 * t) / (1.0 + t * (0.99229 + 0.04481 * t));
  if (!upper) z = -z;
  for (int i = 0; i < 3; ++i) {
    double err = norm_cdf(z) - p;
    z -= err / norm_pdf(z);
  }
  return z;
}

double heat_kernel(double tau, double dx) {
  if (tau <= 0.0) return 0.0;
  return std::exp(-dx * dx / (2.0 * tau)) / (SQRT_2PI * std::sqrt(tau));
}

double heat_kernel(double t, double x, double u, double y) {
  return heat_kernel(u - t, x - y);
}

double expected_local_time(double x, double y, double u) {
  if (u <= 0.0) return 0.0;
  double d = x - y;
  double s = std::sqrt(u);
  double r = d / s;
  return d * (2.0 * norm_cdf(r) - 1.0) + 2.0 * s * norm_pdf(r) - std::fabs(d);
}

double expected_local_time_dx(double x, double y, double u) {
  if (u <= 0.0) return 0.0;
  double d = x - y;
  double sgn = (d > 0.0) - (d < 0.0);
  return (2.0 * norm_cdf(d / std::sqrt(u)) - 1.0) - sgn;
}

double expected_local_time_du(double x, double y, double u) {
  return heat_kernel(u, x - y);
}

} // namespace rost
