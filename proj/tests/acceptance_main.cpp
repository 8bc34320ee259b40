// End-to-end acceptance checks for the boundary solver, its oracles, and the
// command-line pipeline. Each check prints one PASS/FAIL line plus the
// measured quantities it judged; the process exits nonzero if any check
// fails. Checks 1, 3 and 4 encode stricter demands than the implemented
// scheme measurably meets and are expected to fail; their lines say what was
// measured and why. Tolerances below are frozen; do not retune them to make
// a run green.

#include "rost/io.hpp"
#include "rost/kernel.hpp"
#include "rost/solver.hpp"
#include "rost/value.hpp"
#include "rost/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace rost;
namespace fs = std::filesystem;

namespace {

int n_pass = 0;
int n_fail = 0;

void report(int id, const char* label, bool ok, const std::string& detail) {
  std::printf("[%s] check %2d: %s\n            %s\n", ok ? "PASS" : "FAIL", id,
              label, detail.c_str());
  std::fflush(stdout);
  ++(ok ? n_pass : n_fail);
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Measure delta0() { return Measure{{Component::atom(0.0, 1.0)}}; }
Measure uniform02() { return Measure{{Component::uniform(0.0, 2.0, 1.0)}}; }
Measure gap_measure() {
  return Measure{{Component::uniform(0.0, 0.4, 0.5),
                  Component::uniform(0.6, 2.2, 0.5)}};
}
Measure normal11() { return Measure{{Component::normal(1.0, 1.0, 1.0)}}; }
Measure cantor_mix() {
  return Measure{{Component::cantor(1.0, 2.0, 30, 0.5),
                  Component::uniform(-2.0, -1.0, 0.5)}};
}

// forward-time strict increase of one side; stored arrays run backward
bool strictly_increasing(const std::vector<double>& b) {
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    if (!(b[k] > b[k + 1])) return false;
  return true;
}

bool nondecreasing(const std::vector<double>& b) {
  for (std::size_t k = 0; k + 1 < b.size(); ++k)
    if (b[k] < b[k + 1]) return false;
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return in.good() ? ss.str() : std::string("<missing " + p.string() + ">");
}

// ---------------------------------------------------------------------------

void check_1_and_2() {
  auto t0 = std::chrono::steady_clock::now();
  BarrierProblem p = make_problem(uniform02(), delta0(), 1.0);
  SolveResult r = solve_boundaries(p, Grid{1.0, 200});
  double dt = seconds_since(t0);

  // check 1: every solved node's plain right-endpoint residual below 1e-9
  double worst = 0.0;
  for (const auto& nr : r.report.plus)
    if (nr.method != NodeMethod::Absent)
      worst = std::max(worst, std::fabs(nr.literal_residual));
  for (const auto& nr : r.report.minus)
    if (nr.method != NodeMethod::Absent)
      worst = std::max(worst, std::fabs(nr.literal_residual));
  bool resid_ok = worst < 1e-9;
  bool time_ok = dt < 60.0;
  report(1, "uniform target, N=200: right-endpoint residual < 1e-9 at every node, solve < 60 s",
         resid_ok && time_ok,
         fmt("max |right-endpoint residual| = %.3g (demand 1e-9), solve time %.2f s (limit 60); "
             "the right-endpoint rule drops half the target density at the node's own time "
             "slice, so its residual at the solved boundary is O(h) by construction; the "
             "cell-averaged equation the solver actually certifies has max residual %.3g",
             worst, dt, r.report.max_certified));

  // check 2: single-boundary geometry
  bool mono = strictly_increasing(r.bp.b_plus);
  bool start0 = r.bp.b_plus.back() == 0.0;
  bool minus_absent = true;
  for (double v : r.bp.b_minus) minus_absent = minus_absent && v == INF;
  double sT = r.bp.b_plus.front();
  bool range_ok = sT > 0.0 && sT <= 2.0;
  report(2, "uniform target: s_plus strictly increasing from 0, s_minus absent, s_plus(T) in (0,2]",
         mono && start0 && minus_absent && range_ok,
         fmt("strict increase %s, s_plus(0) = %g, lower side absent %s, s_plus(T) = %.6f",
             mono ? "yes" : "NO", r.bp.b_plus.back(), minus_absent ? "yes" : "NO", sT));
}

void check_3() {
  BarrierProblem p = make_problem(gap_measure(), delta0(), 1.0);
  struct GapStats {
    double frac;   // of all nodes, value strictly inside (0.42, 0.58)
    double width;  // time the curve spends anywhere inside the hole (0.4, 0.6)
  };
  auto stats = [&](int N) {
    SolveResult r = solve_boundaries(p, Grid{1.0, N});
    int cnt = 0, hole = 0;
    for (double v : r.bp.b_plus) {
      cnt += (v > 0.42 && v < 0.58) ? 1 : 0;
      hole += (v > 0.40 && v < 0.60) ? 1 : 0;
    }
    return GapStats{double(cnt) / double(N + 1), hole * r.bp.grid.h()};
  };
  GapStats coarse = stats(500);   // h = 2e-3
  GapStats fine = stats(5000);    // h = 2e-4
  bool ok = coarse.frac > 0.0 && coarse.frac >= 2.0 * fine.frac;
  report(3, "gap target: fraction of nodes inside (0.42, 0.58) sharpens at least 2x from h=2e-3 to h=2e-4",
         ok,
         fmt("fraction %.5f at h=2e-3 vs %.5f at h=2e-4 (ratio %.2f, demand >= 2). The hole "
             "(0.4, 0.6) stays occupied for %.4f time units at h=2e-3 vs %.4f at h=2e-4: the "
             "cell-averaged equation certifies a root inside the massless window (the "
             "right-endpoint form has no root there at all) and crosses it at finite speed, "
             "so the crossing layer thins only like a small power of h and the demanded 2x "
             "drop between these two grids is out of reach",
             coarse.frac, fine.frac, fine.frac > 0.0 ? coarse.frac / fine.frac : INF,
             coarse.width, fine.width));
}

void check_4() {
  BarrierProblem p = make_problem(normal11(), delta0(), 0.05);
  SolveResult r = solve_boundaries(p, Grid{0.05, 50});
  bool mono_p = strictly_increasing(r.bp.b_plus);
  bool mono_m = strictly_increasing(r.bp.b_minus);
  bool start0 = r.bp.b_plus.back() == 0.0 && r.bp.b_minus.back() == 0.0;
  int violations = 0;
  const int N = r.bp.grid.N;
  for (int k = 0; k < N; ++k)  // t > 0 means k < N
    violations += r.bp.b_plus[k] > r.bp.b_minus[k] ? 0 : 1;
  bool order_ok = violations == 0;
  report(4, "normal(1,1) target: two strictly increasing boundaries from 0 with s_plus > s_minus pointwise",
         mono_p && mono_m && start0 && order_ok,
         fmt("strict increase +%s -%s, start at 0 %s; ordering s_plus > s_minus fails at %d of %d "
             "interior nodes: measured s_plus(T) = %.6f < s_minus(T) = %.6f. The lower boundary "
             "must travel farther through the thin left tail to carve out its mass, so the thin "
             "side runs ahead and the demanded ordering is inverted for this target",
             mono_p ? "yes" : "NO", mono_m ? "yes" : "NO", start0 ? "yes" : "NO",
             violations, N, r.bp.b_plus.front(), r.bp.b_minus.front()));
}

void check_5() {
  BarrierProblem p = make_problem(uniform02(), delta0(), 1.0);
  SolveResult r = solve_boundaries(p, Grid{1.0, 200});
  LatticeResult lat = lattice_value(p, LatticeSpec{r.bp.grid});
  const Grid& g = r.bp.grid;
  double sup = 0.0;
  for (int k = 0; k <= g.N; ++k) {
    double t = g.T - g.node(k);
    if (t < 0.1 || t > 0.9) continue;
    for (auto [a, b] : {std::pair{r.bp.b_plus[k], lat.b_plus[k]},
                        std::pair{r.bp.b_minus[k], lat.b_minus[k]}}) {
      if (a == INF && b == INF) continue;
      sup = std::max(sup, (a == INF || b == INF) ? INF : std::fabs(a - b));
    }
  }
  double tol = std::max(0.05, 3.0 * std::sqrt(g.h()));
  report(5, "lattice oracle agrees with the integral-equation boundary on t in [0.1, 0.9]",
         sup <= tol, fmt("sup distance %.4f, tolerance %.4f", sup, tol));
}

void check_6() {
  struct Case {
    const char* name;
    Measure mu;
    double T;
    int N;
    double xlo, xhi;
  };
  std::vector<Case> cases;
  cases.push_back({"uniform", uniform02(), 1.0, 200, -0.5, 2.2});
  cases.push_back({"normal", normal11(), 0.05, 50, -2.0, 3.0});
  double worst = 0.0;
  const char* worst_case = "";
  for (const auto& c : cases) {
    BarrierProblem p = make_problem(c.mu, delta0(), c.T);
    SolveResult r = solve_boundaries(p, Grid{c.T, c.N});
    GeneralizedInverse gi = generalized_inverse(r.bp);
    CounterRng rng = path_stream(123, 0);
    for (int i = 0; i < 100; ++i) {
      double t = c.T * (0.05 + 0.9 * rng.uniform(2 * i));
      double x = c.xlo + (c.xhi - c.xlo) * rng.uniform(2 * i + 1);
      double uk = value_U_kernel(t, x, r.bp, gi, p);
      double ul = value_U_localtime(t, x, gi, p);
      double d = std::fabs(uk - ul);
      if (d > worst) {
        worst = d;
        worst_case = c.name;
      }
    }
  }
  report(6, "the two value representations agree within 1e-4 at 100 seeded points per target",
         worst < 1e-4,
         fmt("max |kernel - localtime| = %.3g (worst case: %s target)", worst, worst_case));
}

void check_7() {
  auto t0 = std::chrono::steady_clock::now();
  BarrierProblem p = make_problem(uniform02(), delta0(), 1.0);
  SolveResult r = solve_boundaries(p, Grid{1.0, 2000});
  MCConfig mc;
  mc.n_paths = 100000;
  mc.dt = 1e-4;
  mc.seed = 2024;
  auto samples = simulate_embedding(r.bp, p, mc);
  EmbeddingDiagnostics d = embedding_test(samples, p, r.bp);
  double dt = seconds_since(t0);
  double se = std::sqrt(d.censor_pred * (1.0 - d.censor_pred) /
                        double(samples.size()));
  bool ks_ok = d.ks < 0.02;
  bool cens_ok = std::fabs(d.censor_obs - d.censor_pred) <= 3.0 * se;
  bool time_ok = dt < 300.0;
  report(7, "1e5 simulated paths with bridge correction embed the restricted target",
         ks_ok && cens_ok && time_ok,
         fmt("KS = %.5f (demand < 0.02), censoring obs %.5f vs pred %.5f (|diff| %.5f vs 3 SE = %.5f), "
             "%d stopped, runtime %.0f s (limit 300)",
             d.ks, d.censor_obs, d.censor_pred, std::fabs(d.censor_obs - d.censor_pred),
             3.0 * se, int(d.n_stopped), dt));
}

void check_8() {
  BarrierProblem p = make_problem(cantor_mix(), delta0(), 0.2);
  bool completed = true;
  std::string note;
  SolveResult r;
  try {
    r = solve_boundaries(p, Grid{0.2, 100});
  } catch (const SolverError& e) {
    completed = false;
    note = e.what();
  }
  if (!completed) {
    report(8, "half-cantor half-uniform target solves at N=100 with certified residuals", false,
           "solver failed: " + note);
    return;
  }
  bool mono = nondecreasing(r.bp.b_plus) && nondecreasing(r.bp.b_minus);
  bool resid_ok = r.report.max_certified < 1e-9;
  report(8, "half-cantor half-uniform target solves at N=100 with certified residuals",
         mono && resid_ok,
         fmt("both boundaries monotone %s, max certified residual %.3g (demand < 1e-9), "
             "%d nodes resolved by monotonicity binds inside target gaps, s_plus(T) = %.6f, "
             "s_minus(T) = %.6f",
             mono ? "yes" : "NO", r.report.max_certified, r.report.n_bind,
             r.bp.b_plus.front(), r.bp.b_minus.front()));
}

void check_9() {
  // direct time-integral of the transition density in the substitution
  // tau = rho^2; adaptive refinement resolves the transition layer at
  // rho ~ |x - y|, which a fixed panel count misses for near-coincident
  // levels
  struct Quad {
    double (*f)(double, double);
    double dx;
    double simpson(double a, double m, double b, double fa, double fm,
                   double fb) const {
      return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }
    double refine(double a, double b, double fa, double fm, double fb,
                  double whole, int depth) const {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm, dx), frm = f(rm, dx);
      double left = simpson(a, lm, m, fa, flm, fm);
      double right = simpson(m, rm, b, fm, frm, fb);
      if (depth <= 0 || std::fabs(left + right - whole) < 1e-14)
        return left + right + (left + right - whole) / 15.0;
      return refine(a, m, fa, flm, fm, left, depth - 1) +
             refine(m, b, fm, frm, fb, right, depth - 1);
    }
  };
  auto integrand = [](double rho, double dx) {
    return 2.0 * rho * heat_kernel(rho * rho, dx);
  };
  auto elt_by_quadrature = [&](double x, double y, double u) {
    Quad q{integrand, x - y};
    double R = std::sqrt(u);
    double m = 0.5 * R;
    double fa = integrand(0.0, x - y), fm = integrand(m, x - y),
           fb = integrand(R, x - y);
    return q.refine(0.0, R, fa, fm, fb, q.simpson(0.0, m, R, fa, fm, fb), 48);
  };
  CounterRng rng = path_stream(7, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double u = 0.05 + 2.95 * rng.uniform(3 * i);
    double x = -2.0 + 4.0 * rng.uniform(3 * i + 1);
    double y = -2.0 + 4.0 * rng.uniform(3 * i + 2);
    double d = std::fabs(expected_local_time(x, y, u) - elt_by_quadrature(x, y, u));
    worst = std::max(worst, d);
  }
  double origin = std::fabs(expected_local_time(0.0, 0.0, 1.0) -
                            std::sqrt(2.0 / M_PI));
  report(9, "closed-form expected local time matches the transition-density integral",
         worst < 1e-9 && origin < 1e-12,
         fmt("max |closed form - quadrature| = %.3g over 100 triples (demand < 1e-9); "
             "|L(0,0,1) - sqrt(2/pi)| = %.3g (demand < 1e-12)",
             worst, origin));
}

void check_10() {
  const char* bin = std::getenv("ROST_BIN");
  if (!bin) {
    report(10, "identical config and seed reproduce artifacts byte for byte", false,
           "ROST_BIN not set; cannot exercise the command-line pipeline");
    return;
  }
  fs::path d = fs::temp_directory_path() / "rost_acceptance";
  fs::remove_all(d);
  fs::create_directories(d);
  {
    std::ofstream cfg(d / "cfg.json");
    cfg << R"({
      "mu": {"components": [{"kind": "uniform", "a": 0.0, "b": 2.0, "w": 1.0}]},
      "nu": {"components": [{"kind": "atom", "x": 0.0, "w": 1.0}]},
      "T": 1.0,
      "N": 50,
      "mc": {"n_paths": 4000, "dt": 1e-3, "seed": 7},
      "verify": {"ks_tol": 0.08}
    })";
  }
  auto run = [&](const char* sub) {
    std::string cmd = std::string(bin) + " verify --config " +
                      (d / "cfg.json").string() + " --out " +
                      (d / sub).string() + " > " + (d / sub).string() +
                      ".log 2>&1";
    return std::system(cmd.c_str());
  };
  int rc1 = run("a");
  int rc2 = run("b");
  // resolved_config.json is excluded: it echoes each run's own output path
  bool same = true;
  std::string differing;
  for (const char* f : {"boundaries.csv", "samples.csv", "oracle.csv",
                        "mc_report.json", "verify_report.json"}) {
    if (slurp(d / "a" / f) != slurp(d / "b" / f)) {
      same = false;
      differing += std::string(f) + " ";
    }
  }
  bool ok = rc1 == 0 && rc2 == 0 && same;
  report(10, "identical config and seed reproduce artifacts byte for byte", ok,
         same ? fmt("exit codes %d/%d; all five artifacts byte-identical across runs",
                    rc1, rc2)
              : "runs differ in: " + differing);
}

}  // namespace

int main() {
  std::printf("acceptance suite: boundary solver, oracles, and pipeline\n\n");
  check_1_and_2();
  check_3();
  check_4();
  check_5();
  check_6();
  check_7();
  check_8();
  check_9();
  check_10();
  std::printf("\nacceptance: %d of %d checks pass", n_pass, n_pass + n_fail);
  if (n_fail > 0)
    std::printf(" (the failing checks encode demands the implemented scheme "
                "measurably does not meet; see their lines)");
  std::printf("\n");
  return n_fail == 0 ? 0 : 1;
}
