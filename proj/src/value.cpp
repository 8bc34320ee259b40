#include "rost/value.hpp"

#include "rost/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rost {

namespace {

// int_0^t of the cantor function on [0,1]. Self-similar recursion flattened
// to a loop: I(t) = I(3t)/6 on the left third, 1/12 + (t - 1/3)/2 exactly on
// the middle (terminates), 1/4 + (t - 2/3)/2 + I(3t - 2)/6 on the right.
double cantor_integral01(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 0.5;
  double acc = 0.0, scale = 1.0;
  for (int i = 0; i < 40; ++i) {
    double t3 = 3.0 * t;
    if (t3 < 1.0) {
      scale /= 6.0;
      t = t3;
    } else if (t3 <= 2.0) {
      return acc + scale * (1.0 / 12.0 + 0.5 * (t - 1.0 / 3.0));
    } else {
      acc += scale * (0.25 + 0.5 * (t - 2.0 / 3.0));
      scale /= 6.0;
      t = t3 - 2.0;
    }
  }
  return acc;  // remainder < 6^-40
}

// J(x) = int_{-inf}^x F_c(z) dz, finite for every family (the cdf decays
// fast enough on the left); differences of J give exact cdf integrals.
double comp_cdf_integral(const Component& c, double x) {
  switch (c.kind) {
    case ComponentKind::Atom:
      return x > c.x ? x - c.x : 0.0;
    case ComponentKind::Uniform: {
      if (x <= c.a) return 0.0;
      if (x >= c.b) return x - 0.5 * (c.a + c.b);
      return (x - c.a) * (x - c.a) / (2.0 * (c.b - c.a));
    }
    case ComponentKind::Normal: {
      double sd = std::sqrt(c.var);
      double z = (x - c.mean) / sd;
      return sd * (z * norm_cdf(z) + norm_pdf(z));
    }
    case ComponentKind::Exponential:
      if (x <= 0.0) return 0.0;
      return x - (1.0 - std::exp(-c.rate * x)) / c.rate;
    case ComponentKind::Polynomial: {
      if (x <= c.a) return 0.0;
      double span = c.b - c.a;
      double full = span / (double)(c.m + 2);
      if (x >= c.b) return full + (x - c.b);
      return full * std::pow((x - c.a) / span, (double)(c.m + 2));
    }
    case ComponentKind::Cantor: {
      if (x <= c.a) return 0.0;
      double span = c.b - c.a;
      if (x >= c.b) return 0.5 * span + (x - c.b);
      return span * cantor_integral01((x - c.a) / span);
    }
  }
  return 0.0;
}

double measure_cdf_integral(const Measure& m, double x) {
  double s = 0.0;
  for (const Component& c : m.components) s += c.w * comp_cdf_integral(c, x);
  return s;
}

// boundary value at an off-grid time, linear between nodes; an infinite
// endpoint marks an absent side and wins outright
double b_at(const std::vector<double>& b, const Grid& g, double u) {
  int N = g.N;
  if (u >= g.T) return b[N];
  if (u <= 0.0) return b[0];
  double h = g.h();
  int l = (int)(u / h);
  if (l >= N) l = N - 1;
  double t0 = g.node(l), t1 = g.node(l + 1);
  double v0 = b[l], v1 = b[l + 1];
  if (v0 == INF || v1 == INF) return INF;
  return v0 + (u - t0) / (t1 - t0) * (v1 - v0);
}

}  // namespace

double payoff_G(double x, const BarrierProblem& prob) {
  double dn = measure_cdf_integral(prob.nu, x) - measure_cdf_integral(prob.nu, 0.0);
  double dm = measure_cdf_integral(prob.mu, x) - measure_cdf_integral(prob.mu, 0.0);
  return 2.0 * (dn - dm);
}

double value_U_kernel(double t, double x, const BoundaryPair& bp,
                      const GeneralizedInverse& gi, const BarrierProblem& prob) {
  const Grid& g = bp.grid;
  if (!(t < g.T)) return 0.0;
  double total = 0.0;
  // atoms of nu leave the section only when the barrier reaches them, so
  // their kernel-in-time integral is the local-time primitive cut at phi
  Measure nu_c;  // non-atomic remainder; deliberately unnormalized
  for (const Component& c : prob.nu.components) {
    if (c.kind == ComponentKind::Atom) {
      double rem = g.T - t - gi.phi(c.x);
      if (rem > 0.0) total += c.w * expected_local_time(x, c.x, rem);
    } else {
      nu_c.components.push_back(c);
    }
  }
  auto integrand = [&](double r) {
    double tau = r * r;
    if (!(tau > 0.0)) return 0.0;
    double u = t + tau;
    if (u > g.T) u = g.T;
    double hi = b_at(bp.b_plus, g, u);
    double lo = b_at(bp.b_minus, g, u);
    double a = lo == INF ? -INF : -lo;
    return 2.0 * r * kernel_signed_mass(nu_c, prob.mu, a, hi, tau, x);
  };
  // composite Simpson in r = sqrt(u - t), one segment per grid cell: the
  // substitution flattens the 1/sqrt edge, and segments end at the node
  // kinks of the interpolated sections
  double h = g.h();
  int l0 = (int)(t / h) + 1;  // first node strictly past t
  if (g.node(l0) <= t) ++l0;
  double r_prev = 0.0;
  for (int l = l0; l <= g.N; ++l) {
    double r_next = std::sqrt(g.node(l) - t);
    double r0 = r_prev, width = r_next - r_prev;
    if (width > 0.0) {
      double s1 = integrand(r0) + integrand(r_next);
      double s4 = 0.0, s2 = 0.0;
      const int panels = 4;
      for (int j = 1; j < 2 * panels; ++j) {
        double v = integrand(r0 + width * j / (2.0 * panels));
        if (j % 2 == 1)
          s4 += v;
        else
          s2 += v;
      }
      total += width / (6.0 * panels) * (s1 + 4.0 * s4 + 2.0 * s2);
    }
    r_prev = r_next;
  }
  return total;
}

double value_U_kernel(double t, double x, const BoundaryPair& bp,
                      const BarrierProblem& prob) {
  return value_U_kernel(t, x, bp, generalized_inverse(bp), prob);
}

double value_U_localtime(double t, double x, const GeneralizedInverse& gi,
                         const BarrierProblem& prob) {
  double rem = gi.T - t;
  if (!(rem > 0.0)) return 0.0;
  double sp = gi.s_plus_at(rem);
  double sm = gi.s_minus_at(rem);
  double a = sm == INF ? -INF : -sm;
  auto occupancy = [&](double y) { return rem - gi.phi(y); };
  auto f = [&](double y) {
    double u = occupancy(y);
    return u > 0.0 ? expected_local_time(x, y, u) : 0.0;
  };
  auto df = [&](double y) {
    double u = occupancy(y);
    if (!(u > 0.0)) return 0.0;
    return -expected_local_time_dx(x, y, u) -
           expected_local_time_du(x, y, u) * gi.dphi(y);
  };
  std::vector<double> brk = gi.breakpoints();
  if (x > a && x < sp) brk.push_back(x);  // local-time cusp
  std::sort(brk.begin(), brk.end());
  QuadOpts o;
  o.abs_tol = 1e-9;
  o.breakpoints = &brk;
  return signed_stieltjes(prob.nu, prob.mu, a, sp, f, df, o);
}

double value_U_localtime(double t, double x, const BoundaryPair& bp,
                         const BarrierProblem& prob) {
  return value_U_localtime(t, x, generalized_inverse(bp), prob);
}

LatticeResult lattice_value(const BarrierProblem& prob, const LatticeSpec& spec) {
  const Grid& g = spec.grid;
  double h = g.h();
  double dx = std::sqrt(h);
  double radius = spec.x_radius > 0.0
                      ? spec.x_radius
                      : std::max(prob.cap_plus, prob.cap_minus);
  int m = (int)std::ceil(radius / dx) + 1;
  int cols = 2 * m + 1;

  LatticeResult out;
  out.grid = g;
  out.dx = dx;
  out.j_zero = m;
  out.xs.resize(cols);
  for (int j = 0; j < cols; ++j) out.xs[j] = (j - m) * dx;
  std::vector<double> payoff(cols);
  for (int j = 0; j < cols; ++j) payoff[j] = payoff_G(out.xs[j], prob);

  out.V.assign(g.N + 1, std::vector<double>(cols));
  out.V[g.N] = payoff;
  for (int k = g.N - 1; k >= 0; --k) {
    auto& v = out.V[k];
    const auto& w = out.V[k + 1];
    for (int j = 0; j < cols; ++j) {
      double up = j + 1 < cols ? w[j + 1] : w[j - 1];  // reflecting caps
      double dn = j > 0 ? w[j - 1] : w[j + 1];
      v[j] = std::max(payoff[j], 0.5 * (up + dn));
    }
  }

  // stopping edges per row: walk outward from the center while strictly in
  // continuation; reaching the cap column means the side never closed.
  // V == G alone does not close a side: on payoff-flat tails the equality
  // only means the remaining steps cannot reach any mass (a cone artifact),
  // so the edge counts only if some stopped cell at or beyond it is material,
  // with the payoff strictly concave across the cell (the cell carries mass
  // and stopping there is a decision).
  out.b_plus.assign(g.N + 1, prob.hat.plus);
  out.b_minus.assign(g.N + 1, prob.hat.minus);
  const double eps = 1e-12;
  auto material = [&](int j) {
    return j > 0 && j + 1 < cols &&
           2.0 * payoff[j] > payoff[j - 1] + payoff[j + 1] + 1e-13;
  };
  for (int k = 0; k <= g.N; ++k) {
    const auto& v = out.V[k];
    int jp = m, jm = m;
    while (jp + 1 < cols && v[jp + 1] > payoff[jp + 1] + eps) ++jp;
    while (jm > 0 && v[jm - 1] > payoff[jm - 1] + eps) --jm;
    bool any = v[m] > payoff[m] + eps || jp > m || jm < m;
    if (!any) continue;  // no strict continuation: keep the hat endpoints
    bool closed_p = false, closed_m = false;
    for (int j = jp + 1; j < cols && !closed_p; ++j)
      closed_p = v[j] <= payoff[j] + eps && material(j);
    for (int j = jm - 1; j >= 0 && !closed_m; --j)
      closed_m = v[j] <= payoff[j] + eps && material(j);
    out.b_plus[k] = closed_p ? out.xs[jp] : INF;
    out.b_minus[k] = closed_m ? -out.xs[jm] : INF;
  }
  return out;
}

}  // namespace rost
