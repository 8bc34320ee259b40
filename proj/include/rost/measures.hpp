#pragma once

#include <functional>
#include <limits>
#include <vector>

// Probability measures on R as finite mixtures of named analytic families:
// atoms, absolutely-continuous pieces (uniform, normal, exponential,
// polynomial), and a singular-continuous piece (Cantor). Exact CDFs, exact
// atom handling, Stieltjes integration of smooth functions, and a fast closed
// form for Gaussian-kernel masses (the solver's inner loop).

namespace rost {

inline constexpr double INF = std::numeric_limits<double>::infinity();

enum class ComponentKind { Atom, Uniform, Normal, Exponential, Polynomial, Cantor };

struct Component {
  ComponentKind kind = ComponentKind::Atom;
  double w = 1.0;           // mixture weight
  double x = 0.0;           // atom location
  double a = 0.0, b = 0.0;  // interval endpoints (uniform, polynomial, cantor)
  double mean = 0.0, var = 1.0;
  double rate = 1.0;        // exponential
  int m = 1;                // polynomial: density proportional to (y-a)^m on [a,b]
  int depth = 30;           // cantor ternary recursion depth (cdf error <= 2^-depth)

  static Component atom(double x, double w);
  static Component uniform(double a, double b, double w);
  static Component normal(double mean, double var, double w);
  static Component exponential(double rate, double w);
  static Component polynomial(double a, double b, int m, double w);
  static Component cantor(double a, double b, int depth, double w);
};

struct Measure {
  std::vector<Component> components;

  // throws std::invalid_argument on malformed parameters or weights not
  // summing to 1 within 1e-10
  void validate() const;

  double cdf(double x) const;        // m((-inf, x]), right-continuous
  double point_mass(double x) const; // atoms exactly at x
  double cdf_left(double x) const;   // m((-inf, x))
  double mass(double a, double b) const; // m((a, b]), half-open
  double mean() const;
  double total_weight() const;
  bool has_atoms() const;
  bool has_singular() const;

  double support_lo() const; // may be -inf (normal)
  double support_hi() const; // may be +inf (normal, exponential)
  // finite bounds leaving out at most ~1e-12 of tail mass per component;
  // equal to the exact bounds when those are finite
  double effective_lo() const;
  double effective_hi() const;

  // exact mixture sampling, deterministic in u in (0,1): the integer part of
  // the weight scan picks the component, the rescaled remainder drives that
  // component's inverse CDF
  double sample(double u) const;
};

// Cantor function on [0,1], iterative ternary descent; error <= 2^-depth.
double cantor_cdf01(double t, int depth);

// Smallest point of the standard Cantor set >= t, for t in [0,1].
double cantor_next_point01(double t);

// inf(supp m intersect [c, +inf)), +inf when empty.
double first_mass_at_or_above(const Measure& m, double c);
// sup(supp m intersect (-inf, c]), -inf when empty.
double first_mass_at_or_below(const Measure& m, double c);

struct SupportInfo {
  double a_plus = 0.0;   // sup supp nu
  double a_minus = 0.0;  // -inf supp nu
  double mu_plus = 0.0;  // sup supp mu
  double mu_minus = 0.0; // -inf supp mu
};

// throws std::domain_error unless a_plus >= 0 and a_minus >= 0 (the starting
// law must straddle the origin, the normalization everything else assumes)
SupportInfo support_info(const Measure& mu, const Measure& nu);

struct HatPair {
  double minus = INF; // magnitude: the null interval is (-minus, plus)
  double plus = INF;
};

// Endpoints of the largest mu-null open interval containing the nu-hull
// (-a_minus, a_plus). Requires mu atom-less and mu-null nu-hull interior;
// throws std::domain_error otherwise.
HatPair hat_b(const Measure& mu, const Measure& nu);

struct QuadOpts {
  double abs_tol = 1e-10;
  double max_seg = INF;    // cap on initial segment width
  // optional refinement focus (kernel center): segments within focus_radius
  // of focus start no wider than fine_width
  double focus = 0.0;
  double fine_width = INF;
  double focus_radius = 0.0;
  const std::vector<double>* breakpoints = nullptr; // mandatory split points
};

// int_(a,b] f dm. Atoms summed exactly; density pieces by adaptive
// Gauss-Legendre; singular pieces by parts (needs df = f'). Extended-real
// endpoints allowed.
double stieltjes(const Measure& m, double a, double b,
                 const std::function<double(double)>& f,
                 const std::function<double(double)>& df = nullptr,
                 const QuadOpts& opts = QuadOpts{});

// int_(a,b] f d(nu - mu)
double signed_stieltjes(const Measure& nu, const Measure& mu, double a, double b,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& df = nullptr,
                        const QuadOpts& opts = QuadOpts{});

// int_(a,b] p(tau, x - y) (nu - mu)(dy): closed forms for atom, uniform,
// normal and exponential components; clipped adaptive quadrature for
// polynomial parts; self-similar leaf expansion for cantor parts. No
// allocation; safe for hot loops.
double kernel_signed_mass(const Measure& nu, const Measure& mu,
                          double a, double b, double tau, double x);

} // namespace rost
