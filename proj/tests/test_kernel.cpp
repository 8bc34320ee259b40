#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rost/kernel.hpp"

using namespace rost;

namespace {

// Adaptive Simpson, plain recursive halving.
double simpson(double (*f)(double, double), double d, double a, double b,
               double fa, double fm, double fb, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm, d), frm = f(rm, d);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth > 40 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, d, a, m, fa, flm, fm, 0.5 * tol, depth + 1) +
         simpson(f, d, m, b, fm, frm, fb, 0.5 * tol, depth + 1);
}

// Integrand of int_0^u p(r, d) dr after r = rho^2, which removes the 1/sqrt(r)
// singularity at the origin.
double elt_integrand(double rho, double d) {
  return 2.0 * rho * heat_kernel(rho * rho, d);
}

double elt_by_quadrature(double d, double u) {
  double b = std::sqrt(u);
  double fa = elt_integrand(0.0, d);
  double fm = elt_integrand(0.5 * b, d);
  double fb = elt_integrand(b, d);
  return simpson(elt_integrand, d, 0.0, b, fa, fm, fb, 1e-13, 0);
}

} // namespace

TEST_CASE("normal pdf/cdf basics") {
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(norm_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
  CHECK(norm_cdf(-8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  // symmetry
  for (double z : {0.3, 1.7, 4.2}) {
    CHECK(norm_cdf(z) + norm_cdf(-z) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("normal quantile round trip") {
  for (double p : {1e-12, 1e-9, 1e-6, 1e-3, 0.025, 0.1, 0.3, 0.5, 0.7, 0.9,
                   0.975, 1.0 - 1e-6, 1.0 - 1e-9, 1.0 - 1e-12}) {
    double z = norm_cdf_inv(p);
    double back = norm_cdf(z);
    CHECK(std::fabs(back - p) <= 1e-13 * std::min(p, 1.0 - p) + 1e-16);
  }
  CHECK(norm_cdf_inv(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(norm_cdf_inv(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(norm_cdf_inv(0.158655253931457) ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("heat kernel values and degenerate time") {
  // p over unit time across unit displacement is the unit normal density at 1
  CHECK(heat_kernel(1.0, -1.0) ==
        doctest::Approx(0.24197072451914337).epsilon(1e-15));
  CHECK(heat_kernel(0.0, 0.5) == 0.0);
  CHECK(heat_kernel(-1.0, 0.0) == 0.0);
  // scaling p(tau, d) = phi(d/sqrt(tau))/sqrt(tau)
  CHECK(heat_kernel(0.25, 0.5) ==
        doctest::Approx(norm_pdf(1.0) / 0.5).epsilon(1e-15));
  CHECK(heat_kernel(0.0, 0.0, 1.0, 1.0) ==
        doctest::Approx(0.24197072451914337).epsilon(1e-15));
}

TEST_CASE("expected local time at the origin over unit time") {
  // E_0[L^0_1] = sqrt(2/pi)
  CHECK(std::fabs(expected_local_time(0.0, 0.0, 1.0) - 0.7978845608028654) <
        1e-12);
  CHECK(expected_local_time(2.0, 2.0, 4.0) ==
        doctest::Approx(2.0 * 0.7978845608028654).epsilon(1e-14));
}

TEST_CASE("expected local time equals time-integrated kernel") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> tim(0.01, 5.0);
  for (int i = 0; i < 100; ++i) {
    double x = pos(rng), y = pos(rng), u = tim(rng);
    double ref = elt_by_quadrature(x - y, u);
    CHECK(std::fabs(expected_local_time(x, y, u) - ref) < 1e-9);
  }
}

TEST_CASE("expected local time derivatives") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> tim(0.05, 3.0);
  for (int i = 0; i < 50; ++i) {
    double x = pos(rng), y = pos(rng), u = tim(rng);
    if (std::fabs(x - y) < 1e-2) continue; // cusp handled below
    double eps = 1e-6;
    double fd_x = (expected_local_time(x + eps, y, u) -
                   expected_local_time(x - eps, y, u)) /
                  (2.0 * eps);
    CHECK(std::fabs(expected_local_time_dx(x, y, u) - fd_x) < 1e-7);
    double fd_u = (expected_local_time(x, y, u + eps) -
                   expected_local_time(x, y, u - eps)) /
                  (2.0 * eps);
    CHECK(std::fabs(expected_local_time_du(x, y, u) - fd_u) < 1e-7);
  }
  // cusp: symmetric value at d = 0, one-sided slopes approach -/+ 1
  CHECK(expected_local_time_dx(1.0, 1.0, 0.7) == 0.0);
  CHECK(expected_local_time_dx(1.0 + 1e-12, 1.0, 0.7) ==
        doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("expected local time shape") {
  // even in displacement, decreasing in |d|, increasing in u
  CHECK(expected_local_time(0.7, 0.2, 1.3) ==
        doctest::Approx(expected_local_time(0.2, 0.7, 1.3)).epsilon(1e-15));
  double prev = expected_local_time(0.0, 0.0, 1.0);
  for (double d : {0.2, 0.5, 1.0, 2.0}) {
    double v = expected_local_time(d, 0.0, 1.0);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(expected_local_time(0.3, 0.0, 2.0) >
        expected_local_time(0.3, 0.0, 1.0));
  CHECK(expected_local_time(0.3, 0.0, 0.0) == 0.0);
}
