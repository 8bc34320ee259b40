#pragma once

#include "rost/measures.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rost {

struct Grid {
  double T = 1.0;
  int N = 2;
  double h() const { return T / N; }
  // node(N) == T exactly
  double node(int l) const { return l == N ? T : l * (T / N); }
};

enum class BoundaryMode { TwoSided, UpperOnly, LowerOnly };
enum class Side { Plus, Minus };

struct BarrierProblem {
  Measure mu, nu;
  SupportInfo support;
  HatPair hat;
  BoundaryMode mode = BoundaryMode::TwoSided;
  double cap_plus = 0.0;   // bracket ceiling for b_plus
  double cap_minus = 0.0;  // ceiling for the magnitude of the lower boundary
};

// Validates both measures, computes the null interval around the starting
// support, classifies which boundaries exist (a side whose null interval
// endpoint is infinite never re-enters the target's support), and sets the
// truncation caps to the effective support hull widened by 6*sqrt(T).
BarrierProblem make_problem(Measure mu, Measure nu, double T);

struct SolverConfig {
  double root_abs_tol = 1e-10;
  double residual_tol = 1e-9;
  int max_bisection_iters = 200;
  int newton_polish_iters = 5;
  double cap_plus = 0.0;  // > 0 overrides the problem cap
  double cap_minus = 0.0;
  bool force_sweeps = false;  // re-sweep a level even when one pass is exact
  int max_sweeps = 50;
};

enum class NodeMethod { Absent, Terminal, RightPoint, Midpoint, Bind };

struct NodeReport {
  NodeMethod method = NodeMethod::Absent;
  // right-endpoint equation evaluated at the final boundary value
  double literal_residual = 0.0;
  // residual of the equation this node was actually solved against
  double certified_residual = 0.0;
};

struct BoundaryPair {
  Grid grid;
  // node values indexed k = 0..N; +inf marks an absent boundary
  std::vector<double> b_plus, b_minus;
};

struct SolveReport {
  std::vector<NodeReport> plus, minus;  // indexed like the node arrays
  double max_certified = 0.0;           // over root-certified nodes; binds
                                        // are excluded and counted in n_bind
  double max_literal = 0.0;
  int n_midpoint = 0;
  int n_bind = 0;
  int max_sweeps_used = 0;
};

struct SolveResult {
  BoundaryPair bp;
  SolveReport report;
};

class SolverError : public std::runtime_error {
 public:
  enum class Kind { NoSignChange, SweepDivergence };
  SolverError(Kind kind_, int node_, Side side_, const std::string& msg)
      : std::runtime_error(msg), kind(kind_), node(node_), side(side_) {}
  Kind kind;
  int node;
  Side side;
};

// One term of the backward sum: the kernel-weighted signed mass of (nu - mu)
// over the stored section (-b_minus(t_l), b_plus(t_l)] at lag t_l - t_k,
// evaluated at the point x. Requires l > k and both arrays filled at l.
double kernel_mass(int k, double x, int l, const BoundaryPair& bp,
                   const BarrierProblem& prob);

// Right-endpoint residual at level k: h * sum over l = k+1..N of kernel_mass
// at the signed point (+candidate for Plus, -candidate for Minus). Only
// levels l > k are read, so a backward one-pass solve is self-consistent.
double residual(int k, double candidate_b, Side side, const BoundaryPair& bp,
                const BarrierProblem& prob);

// Cell-averaged residual: each cell (t_j, t_{j+1}] contributes the kernel
// mass at lag (j - k + 1/2) h over the section bounded by averaged adjacent
// boundary values; the j = k cell averages the candidate with the stored
// value at k+1. This is the primary equation: the right-endpoint rule drops
// the half weight of the target-side density at the node's own time slice,
// so its residual is biased positive and generically has no root at all.
// Reads level k of the opposite side, so two-sided levels are iterated to a
// joint fixed point.
double midpoint_residual(int k, double candidate_b, Side side,
                         const BoundaryPair& bp, const BarrierProblem& prob);

// Backward recursion from b(t_N) = hat endpoints. Per node and side, in
// order: the previous value when it already satisfies the cell-averaged
// equation; a monotonicity bind when that equation is materially negative
// there (advancing could only cross the spurious far-tail sign flip); a
// certified root of the cell-averaged equation on [b(t_{k+1}), cap] (cap
// extended once by 50% before giving up); a certified root of the
// right-endpoint equation as a last resort. Throws NoSignChange when every
// rung fails and SweepDivergence when a coupled level exceeds max_sweeps.
SolveResult solve_boundaries(const BarrierProblem& prob, const Grid& grid,
                             const SolverConfig& cfg = {});

// Piecewise-linear inverse of the boundary pair in forward time s(t) =
// b(T - t). phi(x) is the first time the barrier reaches x: 0 strictly
// between the starting endpoints, the interpolated crossing time elsewhere,
// T beyond the range the solve reached.
struct GeneralizedInverse {
  double T = 0.0;
  std::vector<double> t;       // ascending, t.front() = 0, t.back() = T
  std::vector<double> s_plus;  // s at t[i]; +inf where absent
  std::vector<double> s_minus;

  double phi(double x) const;
  double operator()(double x) const { return phi(x); }
  // slope of phi; 0 in the flat core and beyond the range. One-sided at the
  // kinks (the value at a stored node belongs to the segment above it).
  double dphi(double x) const;
  // signed positions of the stored node values, sorted; quadrature users
  // split integration segments here because phi kinks at each
  std::vector<double> breakpoints() const;
  double s_plus_at(double tt) const;  // linear interpolation, clamped to [0,T]
  double s_minus_at(double tt) const;
};

GeneralizedInverse generalized_inverse(const BoundaryPair& bp);

}  // namespace rost
