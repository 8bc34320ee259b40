#include "rost/solver.hpp"

#include "rost/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rost {

namespace {

constexpr double INF_ = std::numeric_limits<double>::infinity();

double signed_point(Side side, double mag) {
  return side == Side::Plus ? mag : -mag;
}

const char* side_name(Side side) {
  return side == Side::Plus ? "plus" : "minus";
}

}  // namespace

BarrierProblem make_problem(Measure mu, Measure nu, double T) {
  if (!(T > 0.0))
    throw std::invalid_argument("make_problem: horizon must be positive");
  mu.validate();
  nu.validate();
  BarrierProblem p;
  p.support = support_info(mu, nu);
  p.hat = hat_b(mu, nu);
  // an infinite null-interval endpoint means the target has no mass on that
  // side at all, so that boundary never comes down from infinity
  if (p.hat.minus == INF_ && p.hat.plus == INF_)
    throw std::invalid_argument("make_problem: target carries no mass");
  if (p.hat.minus == INF_)
    p.mode = BoundaryMode::UpperOnly;
  else if (p.hat.plus == INF_)
    p.mode = BoundaryMode::LowerOnly;
  else
    p.mode = BoundaryMode::TwoSided;
  double room = 6.0 * std::sqrt(T);
  double hi = std::max(mu.effective_hi(), nu.effective_hi());
  double lo = std::min(mu.effective_lo(), nu.effective_lo());
  p.cap_plus = hi + room;
  p.cap_minus = -lo + room;
  p.mu = std::move(mu);
  p.nu = std::move(nu);
  return p;
}

double kernel_mass(int k, double x, int l, const BoundaryPair& bp,
                   const BarrierProblem& prob) {
  double lo = -bp.b_minus[l];
  double hi = bp.b_plus[l];
  if (!(hi > lo)) return 0.0;
  double tau = (l - k) * bp.grid.h();
  return kernel_signed_mass(prob.nu, prob.mu, lo, hi, tau, x);
}

double residual(int k, double candidate_b, Side side, const BoundaryPair& bp,
                const BarrierProblem& prob) {
  const int N = bp.grid.N;
  const double x = signed_point(side, candidate_b);
  double acc = 0.0;
  for (int l = k + 1; l <= N; ++l) acc += kernel_mass(k, x, l, bp, prob);
  return bp.grid.h() * acc;
}

double midpoint_residual(int k, double candidate_b, Side side,
                         const BoundaryPair& bp, const BarrierProblem& prob) {
  const int N = bp.grid.N;
  const double h = bp.grid.h();
  const double x = signed_point(side, candidate_b);
  double acc = 0.0;
  for (int j = k; j < N; ++j) {
    double bp_j = (j == k && side == Side::Plus) ? candidate_b : bp.b_plus[j];
    double bm_j = (j == k && side == Side::Minus) ? candidate_b : bp.b_minus[j];
    double hi = 0.5 * (bp_j + bp.b_plus[j + 1]);
    double lo = -0.5 * (bm_j + bp.b_minus[j + 1]);
    if (!(hi > lo)) continue;
    double tau = (j - k + 0.5) * h;
    acc += kernel_signed_mass(prob.nu, prob.mu, lo, hi, tau, x);
  }
  return h * acc;
}

namespace {

struct ScanOut {
  bool found = false;
  double xa = 0.0, xb = 0.0, fa = 0.0, fb = 0.0;
  double f_lo = 0.0;  // value at the bracket's lower end
};

// March upward with geometrically growing steps looking for a sign change
// between material samples; |f| at or below the floor counts as zero, so
// underflowing far tails and quadrature noise never bracket. The first
// sample f(lo) is passed in by the caller. The step is capped at the kernel
// width scale so narrow crossings just above lo are not skipped.
template <typename F>
ScanOut scan_sign_change(F&& f, double lo, double f_lo, double cap,
                         double step0, double step_cap, double floor_) {
  ScanOut out;
  out.f_lo = f_lo;
  double x = lo;
  bool have = std::fabs(f_lo) > floor_;
  double xm = x, fm = f_lo;  // last material sample
  double step = step0;
  while (x < cap) {
    double xn = std::min(x + step, cap);
    double fn = f(xn);
    if (std::fabs(fn) > floor_) {
      if (have && ((fm > 0.0) != (fn > 0.0))) {
        out.found = true;
        out.xa = xm;
        out.xb = xn;
        out.fa = fm;
        out.fb = fn;
        return out;
      }
      have = true;
      xm = xn;
      fm = fn;
    }
    x = xn;
    step = std::min(step * 1.6, step_cap);
  }
  return out;
}

struct RootOut {
  double x = 0.0;
  double res = 0.0;  // signed residual at x
};

// Bisect until the root is localized to root_abs_tol AND the residual clears
// the certification tolerance. Localizing the root itself (not just the
// residual) keeps repeated solves of slightly perturbed systems reproducible,
// which the coupled two-sided sweeps rely on to settle. A forward-difference
// Newton polish then shaves the residual further when it can.
template <typename F>
RootOut refine_root(F&& f, double xa, double xb, double fa, double fb,
                    const SolverConfig& cfg) {
  int budget = cfg.max_bisection_iters;
  double best_x = std::fabs(fa) <= std::fabs(fb) ? xa : xb;
  double best_f = std::fabs(fa) <= std::fabs(fb) ? fa : fb;
  while (budget > 0 && (xb - xa > cfg.root_abs_tol ||
                        std::fabs(best_f) > cfg.residual_tol)) {
    double xm = 0.5 * (xa + xb);
    if (xm == xa || xm == xb) break;  // bracket exhausted at machine precision
    double fm = f(xm);
    --budget;
    if (fm == 0.0) return {xm, 0.0};
    if (std::fabs(fm) < std::fabs(best_f)) {
      best_x = xm;
      best_f = fm;
    }
    if ((fm > 0.0) == (fa > 0.0)) {
      xa = xm;
      fa = fm;
    } else {
      xb = xm;
      fb = fm;
    }
  }
  for (int it = 0; it < cfg.newton_polish_iters && best_f != 0.0; ++it) {
    double d = (f(best_x + 1e-7) - best_f) / 1e-7;
    if (!std::isfinite(d) || d == 0.0) break;
    double xn = best_x - best_f / d;
    if (!std::isfinite(xn)) break;
    double fn = f(xn);
    if (!(std::fabs(fn) < std::fabs(best_f))) break;
    best_x = xn;
    best_f = fn;
  }
  return {best_x, best_f};
}

struct SideOutcome {
  double value = 0.0;
  NodeReport rep;
};

SideOutcome solve_side(int k, Side side, const BoundaryPair& bp,
                       const BarrierProblem& prob, const SolverConfig& cfg) {
  const auto& arr = side == Side::Plus ? bp.b_plus : bp.b_minus;
  const double lo = arr[k + 1];
  double cap = side == Side::Plus
                   ? (cfg.cap_plus > 0.0 ? cfg.cap_plus : prob.cap_plus)
                   : (cfg.cap_minus > 0.0 ? cfg.cap_minus : prob.cap_minus);
  if (cap < lo) cap = lo;
  const double rth = std::sqrt(bp.grid.h());
  const double step0 = 0.05 * rth;
  const double step_cap = 0.35 * rth;
  const double floor_ = 0.01 * cfg.residual_tol;

  auto f_mid = [&](double v) {
    return midpoint_residual(k, v, side, bp, prob);
  };
  auto f_lit = [&](double v) { return residual(k, v, side, bp, prob); };

  SideOutcome out;
  // probe just above lo: sections are half-open, so sampling exactly at lo
  // can sit on the wrong side of an atom-inclusion edge
  const double lo_eff = lo + cfg.root_abs_tol;
  const double flo = f_mid(lo_eff);
  if (std::fabs(flo) <= cfg.residual_tol) {
    // flat stretch: the previous level's value still satisfies the equation
    out.value = lo;
    out.rep.method = NodeMethod::Midpoint;
    out.rep.certified_residual = flo;
    return out;
  }
  if (flo < 0.0) {
    // materially negative at lo: the committed sections already overshoot,
    // and advancing only adds start-measure mass, so the residual can never
    // recover except through its spurious far-tail sign flip. Hold the level
    // and let earlier levels drain the deficit.
    out.value = lo;
    out.rep.method = NodeMethod::Bind;
    out.rep.certified_residual = flo;
    return out;
  }
  // cell-averaged equation is the workhorse: the one-sided rule misses half
  // the target-side density at the node's own time slice, which biases its
  // residual by about +h*rho(x)/2 and generically leaves it without a root.
  // A refined bracket that fails certification straddles a discontinuity
  // (a section edge crossing an atom), not a root: resume past it.
  double from = lo_eff, ffrom = flo;
  for (int tries = 0; tries < 4; ++tries) {
    auto sm = scan_sign_change(f_mid, from, ffrom, cap, step0, step_cap,
                               floor_);
    if (!sm.found) break;
    auto r = refine_root(f_mid, sm.xa, sm.xb, sm.fa, sm.fb, cfg);
    if (std::fabs(r.res) <= cfg.residual_tol) {
      out.value = r.x;
      out.rep.method = NodeMethod::Midpoint;
      out.rep.certified_residual = r.res;
      return out;
    }
    from = sm.xb;
    ffrom = sm.fb;
  }
  auto ext = scan_sign_change(f_mid, cap, f_mid(cap), 1.5 * cap, step0,
                              step_cap, floor_);
  if (ext.found) {
    auto r = refine_root(f_mid, ext.xa, ext.xb, ext.fa, ext.fb, cfg);
    if (std::fabs(r.res) <= cfg.residual_tol) {
      out.value = r.x;
      out.rep.method = NodeMethod::Midpoint;
      out.rep.certified_residual = r.res;
      return out;
    }
  }
  // one-sided channel as a last resort
  auto sc = scan_sign_change(f_lit, lo_eff, f_lit(lo_eff), cap, step0,
                             step_cap, floor_);
  if (!sc.found) {
    auto e2 = scan_sign_change(f_lit, cap, f_lit(cap), 1.5 * cap, step0,
                               step_cap, floor_);
    if (e2.found) sc = e2;
  }
  if (sc.found) {
    auto r = refine_root(f_lit, sc.xa, sc.xb, sc.fa, sc.fb, cfg);
    if (std::fabs(r.res) <= cfg.residual_tol) {
      out.value = r.x;
      out.rep.method = NodeMethod::RightPoint;
      out.rep.certified_residual = r.res;
      return out;
    }
  }
  throw SolverError(SolverError::Kind::NoSignChange, k, side,
                    "no sign change on bracket at node " + std::to_string(k) +
                        " (" + side_name(side) + " side) after cap extension");
}

}  // namespace

SolveResult solve_boundaries(const BarrierProblem& prob, const Grid& grid,
                             const SolverConfig& cfg) {
  if (!(grid.T > 0.0) || grid.N < 2)
    throw std::invalid_argument("solve_boundaries: need T > 0 and N >= 2");
  if (!(cfg.root_abs_tol > 0.0) || !(cfg.residual_tol > 0.0))
    throw std::invalid_argument("solve_boundaries: tolerances must be positive");
  const int N = grid.N;
  const bool has_plus = prob.mode != BoundaryMode::LowerOnly;
  const bool has_minus = prob.mode != BoundaryMode::UpperOnly;

  SolveResult out;
  BoundaryPair& bp = out.bp;
  bp.grid = grid;
  bp.b_plus.assign(N + 1, INF_);
  bp.b_minus.assign(N + 1, INF_);
  out.report.plus.assign(N + 1, NodeReport{});
  out.report.minus.assign(N + 1, NodeReport{});
  bp.b_plus[N] = prob.hat.plus;
  bp.b_minus[N] = prob.hat.minus;
  if (has_plus) out.report.plus[N].method = NodeMethod::Terminal;
  if (has_minus) out.report.minus[N].method = NodeMethod::Terminal;

  for (int k = N - 1; k >= 0; --k) {
    if (has_plus) bp.b_plus[k] = bp.b_plus[k + 1];
    if (has_minus) bp.b_minus[k] = bp.b_minus[k + 1];
    NodeReport rp, rm;
    for (int sweep = 1;; ++sweep) {
      if (sweep > cfg.max_sweeps)
        throw SolverError(SolverError::Kind::SweepDivergence, k, Side::Plus,
                          "level " + std::to_string(k) + " did not settle in " +
                              std::to_string(cfg.max_sweeps) + " sweeps");
      double dp = 0.0, dm = 0.0;
      if (has_plus) {
        SideOutcome o = solve_side(k, Side::Plus, bp, prob, cfg);
        dp = std::fabs(o.value - bp.b_plus[k]);
        bp.b_plus[k] = o.value;
        rp = o.rep;
      }
      if (has_minus) {
        SideOutcome o = solve_side(k, Side::Minus, bp, prob, cfg);
        dm = std::fabs(o.value - bp.b_minus[k]);
        bp.b_minus[k] = o.value;
        rm = o.rep;
      }
      out.report.max_sweeps_used = std::max(out.report.max_sweeps_used, sweep);
      bool coupled = has_plus && has_minus &&
                     (rp.method == NodeMethod::Midpoint ||
                      rm.method == NodeMethod::Midpoint);
      if (!coupled && !cfg.force_sweeps) break;
      if (sweep >= 2 && dp < cfg.root_abs_tol && dm < cfg.root_abs_tol) break;
    }
    if (has_plus) out.report.plus[k] = rp;
    if (has_minus) out.report.minus[k] = rm;
  }

  // one-sided-rule residuals at the returned values, kept as diagnostics
  for (int k = 0; k < N; ++k) {
    if (has_plus)
      out.report.plus[k].literal_residual =
          residual(k, bp.b_plus[k], Side::Plus, bp, prob);
    if (has_minus)
      out.report.minus[k].literal_residual =
          residual(k, bp.b_minus[k], Side::Minus, bp, prob);
  }

  auto tally = [&](const std::vector<NodeReport>& reps) {
    for (const NodeReport& r : reps) {
      if (r.method == NodeMethod::Absent || r.method == NodeMethod::Terminal)
        continue;
      out.report.max_literal =
          std::max(out.report.max_literal, std::fabs(r.literal_residual));
      if (r.method == NodeMethod::Bind) {
        // a bind holds an inequality, not a root; its residual is reported
        // per node but does not count against certification
        ++out.report.n_bind;
        continue;
      }
      out.report.max_certified =
          std::max(out.report.max_certified, std::fabs(r.certified_residual));
      if (r.method == NodeMethod::Midpoint) ++out.report.n_midpoint;
    }
  };
  tally(out.report.plus);
  tally(out.report.minus);
  return out;
}

namespace {

// inf{t : s(t) > x} by linear interpolation on a nondecreasing array;
// t.back() past the end of the range
double crossing_time(const std::vector<double>& t, const std::vector<double>& s,
                     double x) {
  auto it = std::upper_bound(s.begin(), s.end(), x);
  if (it == s.end()) return t.back();
  size_t i = (size_t)(it - s.begin());
  if (i == 0) return t.front();
  double s0 = s[i - 1], s1 = s[i];
  if (!(s1 > s0)) return t[i];
  double w = (x - s0) / (s1 - s0);
  return t[i - 1] + w * (t[i] - t[i - 1]);
}

double crossing_slope(const std::vector<double>& t, const std::vector<double>& s,
                      double x) {
  auto it = std::upper_bound(s.begin(), s.end(), x);
  if (it == s.end() || it == s.begin()) return 0.0;
  size_t i = (size_t)(it - s.begin());
  double s0 = s[i - 1], s1 = s[i];
  if (!(s1 > s0)) return 0.0;
  return (t[i] - t[i - 1]) / (s1 - s0);
}

double interp_at(const std::vector<double>& t, const std::vector<double>& v,
                 double tt) {
  if (tt <= t.front()) return v.front();
  if (tt >= t.back()) return v.back();
  auto it = std::upper_bound(t.begin(), t.end(), tt);
  size_t i = (size_t)(it - t.begin());
  // an infinite endpoint marks an absent side; interpolating it is NaN
  if (v[i - 1] == INF_ || v[i] == INF_) return INF_;
  double w = (tt - t[i - 1]) / (t[i] - t[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

}  // namespace

double GeneralizedInverse::phi(double x) const {
  if (x >= s_plus.front()) return crossing_time(t, s_plus, x);
  if (-x >= s_minus.front()) return crossing_time(t, s_minus, -x);
  return 0.0;
}

double GeneralizedInverse::dphi(double x) const {
  if (x >= s_plus.front()) return crossing_slope(t, s_plus, x);
  if (-x >= s_minus.front()) return -crossing_slope(t, s_minus, -x);
  return 0.0;
}

std::vector<double> GeneralizedInverse::breakpoints() const {
  std::vector<double> b;
  for (double v : s_plus)
    if (std::isfinite(v)) b.push_back(v);
  for (double v : s_minus)
    if (std::isfinite(v)) b.push_back(-v);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double GeneralizedInverse::s_plus_at(double tt) const {
  return interp_at(t, s_plus, tt);
}

double GeneralizedInverse::s_minus_at(double tt) const {
  return interp_at(t, s_minus, tt);
}

GeneralizedInverse generalized_inverse(const BoundaryPair& bp) {
  const int N = bp.grid.N;
  GeneralizedInverse g;
  g.T = bp.grid.T;
  g.t.resize(N + 1);
  g.s_plus.resize(N + 1);
  g.s_minus.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    g.t[i] = bp.grid.node(i);
    g.s_plus[i] = bp.b_plus[N - i];
    g.s_minus[i] = bp.b_minus[N - i];
  }
  return g;
}

}  // namespace rost
