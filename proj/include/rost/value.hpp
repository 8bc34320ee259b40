#pragma once

#include "rost/solver.hpp"

// The excess value function U(t,x) tied to the solved boundaries, computed
// through two independent representations (a space-time kernel integral and
// a single local-time Stieltjes integral), plus a binomial-lattice optimal
// stopping oracle that knows nothing about the integral equations. Agreement
// between all three is the project's main cross-validation.

namespace rost {

// G(x) = 2 * int_0^x (F_nu(z) - F_mu(z)) dz. Exact per-component
// antiderivatives throughout, including the singular part, where the
// cdf integral follows the self-similar recursion of the cantor function.
double payoff_G(double x, const BarrierProblem& prob);

// U(t,x) as the time integral over (t, T] of the kernel-weighted signed
// mass of (nu - mu) over the section between the boundaries. Atoms of nu
// integrate in closed form (the expected-local-time primitive cut at the
// time the barrier reaches the atom); the rest uses composite Simpson in
// r = sqrt(u - t), which removes the edge singularity at u = t. Boundary
// sections interpolate linearly between solved nodes.
double value_U_kernel(double t, double x, const BoundaryPair& bp,
                      const GeneralizedInverse& gi, const BarrierProblem& prob);
double value_U_kernel(double t, double x, const BoundaryPair& bp,
                      const BarrierProblem& prob);

// U(t,x) as a single Stieltjes integral in the space variable: the expected
// local time at level y over the remaining window (T - t - phi(y))^+,
// integrated against (nu - mu). Splits at the inverse-boundary kinks and at
// the local-time cusp y = x.
double value_U_localtime(double t, double x, const GeneralizedInverse& gi,
                         const BarrierProblem& prob);
double value_U_localtime(double t, double x, const BoundaryPair& bp,
                         const BarrierProblem& prob);

struct LatticeSpec {
  Grid grid;
  // half-width of the column range; 0 derives it from the problem caps
  double x_radius = 0.0;
};

struct LatticeResult {
  Grid grid;
  double dx = 0.0;      // column spacing, dx = sqrt(h)
  int j_zero = 0;       // column of x = 0
  std::vector<double> xs;
  // V[k][j]: value at time node k, column j; row N equals the payoff
  std::vector<std::vector<double>> V;
  // outermost strict-continuation column per row and side, indexed like the
  // solver's backward node arrays (row k holds s(T - t_k)). +inf when the
  // side never materially closes: the continuation run reaches the cap
  // column, or every stopped cell beyond it sits on a payoff-flat tail that
  // the remaining steps cannot cross (V = G there is a reachability
  // artifact, not a stopping decision). The hat endpoint when the row has
  // no strict continuation at all.
  std::vector<double> b_plus, b_minus;
};

// Optimal stopping of the symmetric simple random walk with space step
// sqrt(h) and payoff G: backward induction V = max(G, average of the two
// successors), reflecting at the cap columns. The stopping set's inner
// edges estimate the boundaries within O(sqrt(h)) without ever touching
// the integral equations, so this is an independent oracle for them.
LatticeResult lattice_value(const BarrierProblem& prob, const LatticeSpec& spec);

}  // namespace rost
