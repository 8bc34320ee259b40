#include "rost/verify.hpp"

#include "rost/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rost {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kWeyl = 0x9e3779b97f4a7c15ULL;

}  // namespace

double CounterRng::uniform(std::uint64_t n) const {
  std::uint64_t r = mix64(key + kWeyl * (n + 1));
  // top 53 bits, centered on half-steps: never 0 or 1
  return ((r >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t n) const {
  return norm_cdf_inv(uniform(n));
}

CounterRng path_stream(std::uint64_t seed, std::uint64_t path) {
  return CounterRng{mix64(mix64(seed + kWeyl) + kWeyl * (path + 1))};
}

namespace {

// Monitoring times with the boundary evaluated at each: tau[0] = 0 up to
// tau.back() = T. Values come from the solved node arrays, read forward
// (s(t) = b(T - t)), linearly interpolated except for the square-root shape
// in the cell adjacent to the anchor.
struct Schedule {
  std::vector<double> tau;
  std::vector<double> su;  // upper boundary; +inf where absent
  std::vector<double> sl;  // lower boundary magnitude; +inf where absent
  // the curve is a + b*sqrt(t) on [0, sqrt_until) and piecewise linear
  // between schedule points beyond it
  double sqrt_until = 0.0;
};

double forward_node(const std::vector<double>& b, int N, int i) {
  return b[N - i];
}

// boundary at forward time tt from the coarse node arrays
double coarse_at(const std::vector<double>& b, const Grid& g, double tt) {
  if (tt >= g.T) return b.front();
  double r = tt / g.h();
  int i = (int)r;
  double s0 = forward_node(b, g.N, i), s1 = forward_node(b, g.N, i + 1);
  if (s0 == INF || s1 == INF) return INF;
  double th = r - i;
  if (i == 0) th = std::sqrt(th);
  return s0 + (s1 - s0) * th;
}

Schedule build_schedule(const BoundaryPair& bp, const BarrierProblem& prob,
                        const MCConfig& cfg) {
  const Grid& g = bp.grid;
  const double h = g.h();
  Schedule S;
  S.tau.push_back(0.0);
  S.su.push_back(forward_node(bp.b_plus, g.N, 0));
  S.sl.push_back(forward_node(bp.b_minus, g.N, 0));

  double start = 0.0;
  const bool up = forward_node(bp.b_plus, g.N, 1) != INF;
  const bool dn = forward_node(bp.b_minus, g.N, 1) != INF;
  if (cfg.refine_vertex && (up || dn)) {
    // the recursion for s(t) only reads earlier forward times, so solving
    // the same problem to the shorter horizon h reproduces the curve on
    // [0, h] at 200x the resolution. Each side is spliced in only where
    // the coarse solve actually has a boundary.
    try {
      const int R = 200;
      SolveResult fine = solve_boundaries(prob, Grid{h, R});
      for (int j = 1; j < R; ++j) {
        S.tau.push_back(j * (h / R));
        S.su.push_back(up ? forward_node(fine.bp.b_plus, R, j) : INF);
        S.sl.push_back(dn ? forward_node(fine.bp.b_minus, R, j) : INF);
      }
      S.tau.push_back(h);
      S.su.push_back(forward_node(bp.b_plus, g.N, 1));
      S.sl.push_back(forward_node(bp.b_minus, g.N, 1));
      start = h;
    } catch (const SolverError&) {
      // fall back to plain square-root interpolation of the first cell
    }
  }

  long M = std::lround((g.T - start) / cfg.dt);
  if (M < 1) M = 1;
  const double d = (g.T - start) / M;
  for (long m = 1; m <= M; ++m) {
    double tt = m == M ? g.T : start + m * d;
    S.tau.push_back(tt);
    S.su.push_back(coarse_at(bp.b_plus, g, tt));
    S.sl.push_back(coarse_at(bp.b_minus, g, tt));
  }
  S.sqrt_until = start > 0.0 ? h / 200 : h;
  return S;
}

// Crossing fraction of one side within a segment, in upper-side
// coordinates (path below boundary, gaps positive); 2.0 means no crossing.
double cross_one(double W, double Wn, double s0, double s1, double d,
                 bool first, const CounterRng& g, std::uint64_t ctr) {
  if (s0 == INF || s1 == INF) return 2.0;
  const double g0 = s0 - W, g1 = s1 - Wn;
  if (g0 <= 0.0) {
    // sitting on the anchor: the true boundary rises steeply enough that
    // a chord bridge from gap zero would stop everything, so only an
    // endpoint exit counts, placed where a straight path meets the
    // square-root interpolation
    if (g1 > 0.0) return 2.0;
    if (!first) return 0.0;
    const double rise = s1 - s0, over = Wn - s0;
    if (!(rise > 0.0) || !(over > 0.0)) return 1.0;
    const double r = rise / over;  // <= 1 since Wn >= s1
    return r * r;
  }
  if (g1 <= 0.0) return g0 / (g0 - g1);
  if (g0 * g1 >= 13.8156 * d) return 2.0;  // bridge weight below 1e-12
  const double p = std::exp(-2.0 * g0 * g1 / d);
  return g.uniform(ctr) < p ? g0 / (g0 + g1) : 2.0;
}

EmbeddingSample run_path(double W0, const Schedule& S, const CounterRng& g) {
  const std::size_t M = S.tau.size() - 1;
  double W = W0;
  for (std::size_t m = 1; m <= M; ++m) {
    const double d = S.tau[m] - S.tau[m - 1];
    const double Wn = W + std::sqrt(d) * g.normal(4 * m);
    const double tu =
        cross_one(W, Wn, S.su[m - 1], S.su[m], d, m == 1, g, 4 * m + 1);
    const double tl =
        cross_one(-W, -Wn, S.sl[m - 1], S.sl[m], d, m == 1, g, 4 * m + 2);
    if (tu <= 1.0 || tl <= 1.0) {
      const bool up = tu <= tl;
      const double th = up ? tu : tl;
      const double s0 = up ? S.su[m - 1] : S.sl[m - 1];
      const double s1 = up ? S.su[m] : S.sl[m];
      const double t0 = S.tau[m - 1], t1 = S.tau[m];
      // read the stopped value off the curve shape, not the chord
      const double f =
          t1 <= S.sqrt_until
              ? (std::sqrt(t0 + th * d) - std::sqrt(t0)) /
                    (std::sqrt(t1) - std::sqrt(t0))
              : th;
      const double w = s0 + (s1 - s0) * f;
      return {t0 + th * d, up ? w : -w,
              up ? StopSide::Upper : StopSide::Lower};
    }
    W = Wn;
  }
  return {S.tau[M], W, StopSide::Censored};
}

}  // namespace

std::vector<EmbeddingSample> simulate_embedding(const BoundaryPair& bp,
                                                const BarrierProblem& prob,
                                                const MCConfig& cfg) {
  if (prob.nu.has_singular())
    throw std::invalid_argument(
        "simulate_embedding: starting law has a singular component");
  if (cfg.n_paths < 1)
    throw std::invalid_argument("simulate_embedding: need n_paths >= 1");
  if (!(cfg.dt > 0.0) || cfg.dt > bp.grid.h() * (1.0 + 1e-9))
    throw std::invalid_argument(
        "simulate_embedding: dt must lie in (0, grid spacing]");

  const Schedule S = build_schedule(bp, prob, cfg);
  std::vector<EmbeddingSample> out;
  out.reserve((std::size_t)cfg.n_paths);
  for (long p = 0; p < cfg.n_paths; ++p) {
    CounterRng g = path_stream(cfg.seed, (std::uint64_t)p);
    out.push_back(run_path(prob.nu.sample(g.uniform(0)), S, g));
  }
  return out;
}

EmbeddingDiagnostics embedding_test(const std::vector<EmbeddingSample>& samples,
                                    const BarrierProblem& prob,
                                    const BoundaryPair& bp) {
  const double spT = bp.b_plus.front();   // forward value at the horizon
  const double smT = bp.b_minus.front();
  const double hp = prob.hat.plus, hm = prob.hat.minus;

  EmbeddingDiagnostics d;
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const EmbeddingSample& s : samples) {
    switch (s.side) {
      case StopSide::Upper: ++d.n_upper; xs.push_back(s.w_stop); break;
      case StopSide::Lower: ++d.n_lower; xs.push_back(s.w_stop); break;
      case StopSide::Censored: ++d.n_censored; break;
    }
  }
  d.n_stopped = d.n_upper + d.n_lower;
  if (d.n_stopped < 1000)
    throw std::invalid_argument(
        "embedding_test: need at least 1000 stopped samples");

  const double mass_u = spT == INF ? 0.0 : prob.mu.mass(hp, spT);
  const double mass_l = smT == INF ? 0.0 : prob.mu.mass(-smT, -hm);
  const double p_r = mass_u + mass_l;
  if (!(p_r > 0.0))
    throw std::domain_error("embedding_test: reachable window has no mass");
  d.censor_pred = 1.0 - p_r;
  d.censor_obs = (double)d.n_censored / (double)samples.size();

  auto restricted_cdf = [&](double x) {
    double acc = 0.0;
    if (smT != INF) acc += prob.mu.mass(-smT, std::clamp(x, -smT, -hm));
    if (spT != INF) acc += prob.mu.mass(hp, std::clamp(x, hp, spT));
    return acc / p_r;
  };

  std::sort(xs.begin(), xs.end());
  const double n = (double)xs.size();
  double D = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = restricted_cdf(xs[i]);
    D = std::max(D, std::max(F - i / n, (i + 1) / n - F));
  }
  d.ks = D;
  return d;
}

}  // namespace rost
