#include "rost/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rost/kernel.hpp"

namespace rost {

namespace {

// 7-point Gauss-Legendre on [-1,1]
constexpr double GLX[3] = {0.4058451513773972, 0.7415311855993945,
                           0.9491079123427585};
constexpr double GLW0 = 0.4179591836734694;
constexpr double GLW[3] = {0.3818300505051189, 0.2797053914892766,
                           0.1294849661688697};

template <class F>
double gl7(F& f, double a, double b) {
  double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double s = GLW0 * f(c);
  for (int i = 0; i < 3; ++i)
    s += GLW[i] * (f(c - hw * GLX[i]) + f(c + hw * GLX[i]));
  return s * hw;
}

template <class F>
double gl_refine(F& f, double a, double b, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double left = gl7(f, a, m), right = gl7(f, m, b);
  if (depth >= 26 || std::fabs(left + right - whole) <= tol)
    return left + right;
  return gl_refine(f, a, m, left, 0.5 * tol, depth + 1) +
         gl_refine(f, m, b, right, 0.5 * tol, depth + 1);
}

// Adaptive quadrature of f over [a,b]: initial segments no wider than the
// caps in opts (fine_width inside the focus window), split at breakpoints,
// each refined by halving until the G7 estimate is stable.
template <class F>
double gl_adaptive(F&& f, double a, double b, const QuadOpts& o) {
  if (!(b > a)) return 0.0;
  double width = b - a;
  std::vector<double> pts{a, b};
  if (o.breakpoints)
    for (double p : *o.breakpoints)
      if (p > a && p < b) pts.push_back(p);
  if (o.focus_radius > 0.0) {
    for (double p : {o.focus - o.focus_radius, o.focus + o.focus_radius})
      if (p > a && p < b) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double p = pts[i], q = pts[i + 1];
    double cap = o.max_seg;
    if (o.focus_radius > 0.0 && p >= o.focus - o.focus_radius - 1e-300 &&
        q <= o.focus + o.focus_radius + 1e-300)
      cap = std::min(cap, o.fine_width);
    long n = 1;
    if (cap < q - p) n = std::min(200000L, (long)std::ceil((q - p) / cap));
    double step = (q - p) / (double)n;
    for (long j = 0; j < n; ++j) {
      double sa = p + step * (double)j;
      double sb = (j == n - 1) ? q : p + step * (double)(j + 1);
      double seg_tol = o.abs_tol * (sb - sa) / width;
      total += gl_refine(f, sa, sb, gl7(f, sa, sb), seg_tol, 0);
    }
  }
  return total;
}

double component_pdf(const Component& c, double y) {
  switch (c.kind) {
    case ComponentKind::Uniform:
      return (y >= c.a && y <= c.b) ? 1.0 / (c.b - c.a) : 0.0;
    case ComponentKind::Normal: {
      double s = std::sqrt(c.var);
      return norm_pdf((y - c.mean) / s) / s;
    }
    case ComponentKind::Exponential:
      return y >= 0.0 ? c.rate * std::exp(-c.rate * y) : 0.0;
    case ComponentKind::Polynomial: {
      if (y < c.a || y > c.b) return 0.0;
      double base = c.b - c.a;
      return (c.m + 1) * std::pow(y - c.a, (double)c.m) /
             std::pow(base, (double)(c.m + 1));
    }
    default:
      return 0.0;
  }
}

double component_cdf(const Component& c, double x) {
  switch (c.kind) {
    case ComponentKind::Atom:
      return x >= c.x ? 1.0 : 0.0;
    case ComponentKind::Uniform: {
      if (x <= c.a) return 0.0;
      if (x >= c.b) return 1.0;
      return (x - c.a) / (c.b - c.a);
    }
    case ComponentKind::Normal:
      return norm_cdf((x - c.mean) / std::sqrt(c.var));
    case ComponentKind::Exponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-c.rate * x);
    case ComponentKind::Polynomial: {
      if (x <= c.a) return 0.0;
      if (x >= c.b) return 1.0;
      return std::pow((x - c.a) / (c.b - c.a), (double)(c.m + 1));
    }
    case ComponentKind::Cantor: {
      if (x <= c.a) return 0.0;
      if (x >= c.b) return 1.0;
      return cantor_cdf01((x - c.a) / (c.b - c.a), c.depth);
    }
  }
  return 0.0;
}

// supports: exact and tail-trimmed (1e-12 mass) finite bounds
double component_lo(const Component& c) {
  switch (c.kind) {
    case ComponentKind::Atom: return c.x;
    case ComponentKind::Normal: return -INF;
    case ComponentKind::Exponential: return 0.0;
    default: return c.a;
  }
}

double component_hi(const Component& c) {
  switch (c.kind) {
    case ComponentKind::Atom: return c.x;
    case ComponentKind::Normal: return INF;
    case ComponentKind::Exponential: return INF;
    default: return c.b;
  }
}

double component_eff_lo(const Component& c) {
  if (c.kind == ComponentKind::Normal)
    return c.mean + std::sqrt(c.var) * norm_cdf_inv(1e-12);
  return component_lo(c);
}

double component_eff_hi(const Component& c) {
  if (c.kind == ComponentKind::Normal)
    return c.mean - std::sqrt(c.var) * norm_cdf_inv(1e-12);
  if (c.kind == ComponentKind::Exponential)
    return -std::log(1e-12) / c.rate;
  return component_hi(c);
}

double component_mean(const Component& c) {
  switch (c.kind) {
    case ComponentKind::Atom: return c.x;
    case ComponentKind::Uniform: return 0.5 * (c.a + c.b);
    case ComponentKind::Normal: return c.mean;
    case ComponentKind::Exponential: return 1.0 / c.rate;
    case ComponentKind::Polynomial:
      return c.a + (c.b - c.a) * (c.m + 1) / (double)(c.m + 2);
    case ComponentKind::Cantor: return 0.5 * (c.a + c.b); // symmetric
  }
  return 0.0;
}

} // namespace

Component Component::atom(double x, double w) {
  Component c; c.kind = ComponentKind::Atom; c.x = x; c.w = w; return c;
}
Component Component::uniform(double a, double b, double w) {
  Component c; c.kind = ComponentKind::Uniform; c.a = a; c.b = b; c.w = w; return c;
}
Component Component::normal(double mean, double var, double w) {
  Component c; c.kind = ComponentKind::Normal; c.mean = mean; c.var = var; c.w = w; return c;
}
Component Component::exponential(double rate, double w) {
  Component c; c.kind = ComponentKind::Exponential; c.rate = rate; c.w = w; return c;
}
Component Component::polynomial(double a, double b, int m, double w) {
  Component c; c.kind = ComponentKind::Polynomial; c.a = a; c.b = b; c.m = m; c.w = w; return c;
}
Component Component::cantor(double a, double b, int depth, double w) {
  Component c; c.kind = ComponentKind::Cantor; c.a = a; c.b = b; c.depth = depth; c.w = w; return c;
}

void Measure::validate() const {
  if (components.empty())
    throw std::invalid_argument("measure: no components");
  double tw = 0.0;
  for (const Component& c : components) {
    if (!(c.w > 0.0) || !std::isfinite(c.w))
      throw std::invalid_argument("measure: component weight must be positive");
    tw += c.w;
    switch (c.kind) {
      case ComponentKind::Atom:
        if (!std::isfinite(c.x)) throw std::invalid_argument("atom: bad location");
        if (c.w > 1.0 + 1e-12) throw std::invalid_argument("atom: weight > 1");
        break;
      case ComponentKind::Uniform:
      case ComponentKind::Polynomial:
      case ComponentKind::Cantor:
        if (!(c.b > c.a) || !std::isfinite(c.a) || !std::isfinite(c.b))
          throw std::invalid_argument("interval component: need a < b finite");
        if (c.kind == ComponentKind::Polynomial && c.m < 0)
          throw std::invalid_argument("polynomial: exponent must be >= 0");
        if (c.kind == ComponentKind::Cantor && (c.depth < 1 || c.depth > 60))
          throw std::invalid_argument("cantor: depth must be in [1, 60]");
        break;
      case ComponentKind::Normal:
        if (!(c.var > 0.0)) throw std::invalid_argument("normal: var must be > 0");
        break;
      case ComponentKind::Exponential:
        if (!(c.rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        break;
    }
  }
  if (std::fabs(tw - 1.0) > 1e-10)
    throw std::invalid_argument("measure: weights must sum to 1");
}

double Measure::cdf(double x) const {
  double s = 0.0;
  for (const Component& c : components) s += c.w * component_cdf(c, x);
  return s;
}

double Measure::point_mass(double x) const {
  double s = 0.0;
  for (const Component& c : components)
    if (c.kind == ComponentKind::Atom && c.x == x) s += c.w;
  return s;
}

double Measure::cdf_left(double x) const { return cdf(x) - point_mass(x); }

double Measure::mass(double a, double b) const {
  if (!(b > a)) return 0.0;
  return cdf(b) - cdf(a);
}

double Measure::mean() const {
  double s = 0.0;
  for (const Component& c : components) s += c.w * component_mean(c);
  return s;
}

double Measure::total_weight() const {
  double s = 0.0;
  for (const Component& c : components) s += c.w;
  return s;
}

bool Measure::has_atoms() const {
  for (const Component& c : components)
    if (c.kind == ComponentKind::Atom) return true;
  return false;
}

bool Measure::has_singular() const {
  for (const Component& c : components)
    if (c.kind == ComponentKind::Cantor) return true;
  return false;
}

double Measure::support_lo() const {
  double v = INF;
  for (const Component& c : components) v = std::min(v, component_lo(c));
  return v;
}

double Measure::support_hi() const {
  double v = -INF;
  for (const Component& c : components) v = std::max(v, component_hi(c));
  return v;
}

double Measure::effective_lo() const {
  double v = INF;
  for (const Component& c : components) v = std::min(v, component_eff_lo(c));
  return v;
}

double Measure::effective_hi() const {
  double v = -INF;
  for (const Component& c : components) v = std::max(v, component_eff_hi(c));
  return v;
}

double Measure::sample(double u) const {
  u = std::min(std::max(u, 1e-300), 1.0 - 1e-16);
  double cum = 0.0;
  const Component* pick = &components.back();
  double v = u;
  for (const Component& c : components) {
    if (u < cum + c.w || &c == &components.back()) {
      pick = &c;
      v = std::min(std::max((u - cum) / c.w, 1e-300), 1.0 - 1e-16);
      break;
    }
    cum += c.w;
  }
  const Component& c = *pick;
  switch (c.kind) {
    case ComponentKind::Atom: return c.x;
    case ComponentKind::Uniform: return c.a + (c.b - c.a) * v;
    case ComponentKind::Normal: return c.mean + std::sqrt(c.var) * norm_cdf_inv(v);
    case ComponentKind::Exponential: return -std::log1p(-v) / c.rate;
    case ComponentKind::Polynomial:
      return c.a + (c.b - c.a) * std::pow(v, 1.0 / (double)(c.m + 1));
    case ComponentKind::Cantor: {
      // binary digits of v pick left/right thirds
      double x01 = 0.0, scale = 1.0 / 3.0;
      for (int i = 0; i < 47; ++i) {
        v *= 2.0;
        if (v >= 1.0) { x01 += 2.0 * scale; v -= 1.0; }
        scale /= 3.0;
      }
      return c.a + (c.b - c.a) * x01;
    }
  }
  return 0.0;
}

double cantor_cdf01(double t, int depth) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double acc = 0.0, scale = 1.0;
  for (int i = 0; i < depth; ++i) {
    t *= 3.0;
    if (t < 1.0) {
      scale *= 0.5;
    } else if (t < 2.0) {
      return acc + scale * 0.5;
    } else {
      acc += scale * 0.5;
      scale *= 0.5;
      t -= 2.0;
    }
  }
  return acc + scale * t; // linear remainder; error <= 2^-depth
}

double cantor_next_point01(double t) {
  if (t <= 0.0) return 0.0;
  if (t > 1.0) return INF;
  double acc = 0.0, scale = 1.0;
  for (int i = 0; i < 64 && scale > 0.0; ++i) {
    double t3 = 3.0 * t;
    if (t3 <= 0.0) return acc;
    if (t3 < 1.0) {
      t = t3;
      scale /= 3.0;
    } else if (t3 <= 2.0) {
      // includes the exact edge t = 1/3: that point carries no mass on its
      // right, so the first point with mass at or above is 2/3 of this level
      return acc + 2.0 * scale / 3.0;
    } else {
      acc += 2.0 * scale / 3.0;
      scale /= 3.0;
      t = t3 - 2.0;
    }
  }
  return acc;
}

namespace {

// Smallest p >= v such that the component puts mass on [p, p + eps) for
// every eps > 0 (equivalently: mass begins at p going up). +inf when no mass
// lies at or above v. This is the mass-based notion the null-interval
// endpoints need; a support point with nothing on its right (an interval's
// upper endpoint, say) does not qualify.
double component_first_at_or_above(const Component& c, double v) {
  switch (c.kind) {
    case ComponentKind::Atom: return c.x >= v ? c.x : INF;
    case ComponentKind::Normal: return v;
    case ComponentKind::Exponential: return v <= 0.0 ? 0.0 : v;
    case ComponentKind::Uniform:
    case ComponentKind::Polynomial:
      if (v <= c.a) return c.a;
      return v < c.b ? v : INF;
    case ComponentKind::Cantor: {
      if (v <= c.a) return c.a;
      if (v >= c.b) return INF;
      double g = cantor_next_point01((v - c.a) / (c.b - c.a));
      return std::isfinite(g) ? c.a + (c.b - c.a) * g : INF;
    }
  }
  return INF;
}

// mirror of the above: largest p <= v with mass on (p - eps, p]
double component_first_at_or_below(const Component& c, double v) {
  switch (c.kind) {
    case ComponentKind::Atom: return c.x <= v ? c.x : -INF;
    case ComponentKind::Normal: return v;
    case ComponentKind::Exponential:
      return v > 0.0 ? v : -INF;
    case ComponentKind::Uniform:
    case ComponentKind::Polynomial:
      if (v >= c.b) return c.b;
      return v > c.a ? v : -INF;
    case ComponentKind::Cantor: {
      // the Cantor set is symmetric about the interval midpoint
      if (v >= c.b) return c.b;
      if (v <= c.a) return -INF;
      double g = cantor_next_point01((c.b - v) / (c.b - c.a));
      return std::isfinite(g) ? c.b - (c.b - c.a) * g : -INF;
    }
  }
  return -INF;
}

} // namespace

double first_mass_at_or_above(const Measure& m, double c) {
  double v = INF;
  for (const Component& comp : m.components)
    v = std::min(v, component_first_at_or_above(comp, c));
  return v;
}

double first_mass_at_or_below(const Measure& m, double c) {
  double v = -INF;
  for (const Component& comp : m.components)
    v = std::max(v, component_first_at_or_below(comp, c));
  return v;
}

SupportInfo support_info(const Measure& mu, const Measure& nu) {
  SupportInfo s;
  s.a_plus = nu.support_hi();
  s.a_minus = -nu.support_lo();
  s.mu_plus = mu.support_hi();
  s.mu_minus = -mu.support_lo();
  if (s.a_plus < 0.0 || s.a_minus < 0.0)
    throw std::domain_error("support_info: starting law must straddle 0");
  return s;
}

HatPair hat_b(const Measure& mu, const Measure& nu) {
  if (mu.has_atoms())
    throw std::domain_error("hat_b: target measure must be atom-less");
  SupportInfo s = support_info(mu, nu);
  if (mu.cdf_left(s.a_plus) - mu.cdf(-s.a_minus) > 1e-12)
    throw std::domain_error("hat_b: target has mass inside the starting hull");
  HatPair h;
  h.plus = first_mass_at_or_above(mu, s.a_plus);
  double lo = first_mass_at_or_below(mu, -s.a_minus);
  h.minus = -lo; // -inf maps to +inf magnitude
  return h;
}

namespace {

// int_(a,b] f dF_c for one singular component, by parts:
// f(b)F(b) - f(a)F(a) - int F f', with the constant-F tails handled exactly
// and the quadrature clipped to [lo, hi] (and optionally the focus window).
double cantor_by_parts(const Component& c, double a, double b,
                       const std::function<double(double)>& f,
                       const std::function<double(double)>& df,
                       const QuadOpts& o) {
  double lo = std::max(a, c.a), hi = std::min(b, c.b);
  double Fa = component_cdf(c, a), Fb = component_cdf(c, b);
  double term = 0.0;
  if (std::isfinite(b)) term += f(b) * Fb;
  if (std::isfinite(a) && Fa > 0.0) term -= f(a) * Fa;
  if (b > c.b) {
    // F constant = 1 on [max(a, c.b), b]
    double p = std::max(a, c.b);
    double fb = std::isfinite(b) ? f(b) : 0.0;
    term -= (fb - f(p));
  }
  if (hi > lo) {
    auto g = [&](double y) { return component_cdf(c, y) * df(y); };
    double qlo = lo, qhi = hi;
    if (o.focus_radius > 0.0) {
      qlo = std::max(qlo, o.focus - o.focus_radius);
      qhi = std::min(qhi, o.focus + o.focus_radius);
    }
    if (qhi > qlo) term -= gl_adaptive(g, qlo, qhi, o);
  }
  return term;
}

double density_quad(const Component& c, double a, double b,
                    const std::function<double(double)>& f,
                    const QuadOpts& o) {
  double lo = std::max(a, component_eff_lo(c));
  double hi = std::min(b, component_eff_hi(c));
  if (o.focus_radius > 0.0) {
    lo = std::max(lo, o.focus - o.focus_radius);
    hi = std::min(hi, o.focus + o.focus_radius);
  }
  if (!(hi > lo)) return 0.0;
  QuadOpts oo = o;
  if (!(oo.max_seg < (hi - lo))) oo.max_seg = (hi - lo) / 8.0;
  auto g = [&](double y) { return f(y) * component_pdf(c, y); };
  return gl_adaptive(g, lo, hi, oo);
}

} // namespace

double stieltjes(const Measure& m, double a, double b,
                 const std::function<double(double)>& f,
                 const std::function<double(double)>& df,
                 const QuadOpts& opts) {
  if (!(b > a)) return 0.0;
  double total = 0.0;
  for (const Component& c : m.components) {
    switch (c.kind) {
      case ComponentKind::Atom:
        if (c.x > a && c.x <= b) total += c.w * f(c.x);
        break;
      case ComponentKind::Cantor: {
        if (!df)
          throw std::invalid_argument(
              "stieltjes: integrating a singular component needs f'");
        total += c.w * cantor_by_parts(c, a, b, f, df, opts);
        break;
      }
      default:
        total += c.w * density_quad(c, a, b, f, opts);
        break;
    }
  }
  return total;
}

double signed_stieltjes(const Measure& nu, const Measure& mu, double a, double b,
                        const std::function<double(double)>& f,
                        const std::function<double(double)>& df,
                        const QuadOpts& opts) {
  return stieltjes(nu, a, b, f, df, opts) - stieltjes(mu, a, b, f, df, opts);
}

namespace {

// Kernel mass of one cantor piece over a window, using the measure's own
// dyadic structure: at depth d the support is 2^d ternary intervals of mass
// 2^-d, and each is an affine copy of the whole measure, so a leaf of width
// w has centered variance w^2/8 and zero third moment. Full leaves inside
// the window are emitted as point masses with the matching second-order
// kernel correction; the error per unit mass is then fourth order in
// w/sqrt(tau). Leaves cut by a window edge keep splitting, and the sliver
// left at the depth cap (mass 2^-48) is split by the exact cdf.
double cantor_leaf_sum(double l, double w, double m, int d, double wlo,
                       double whi, double tau, double x, double wtarget) {
  double r = l + w;
  if (r <= wlo || l >= whi) return 0.0;
  bool whole = l >= wlo && r <= whi;
  if (whole && w <= wtarget) {
    double dx = x - (l + 0.5 * w);
    double p = heat_kernel(tau, dx);
    return m * p * (1.0 + w * w / 16.0 * (dx * dx - tau) / (tau * tau));
  }
  if (d >= 48) {
    double ql = std::max(l, wlo), qh = std::min(r, whi);
    double mi = m * (cantor_cdf01((qh - l) / w, 30) -
                     cantor_cdf01((ql - l) / w, 30));
    if (!(mi > 0.0)) return 0.0;
    return mi * heat_kernel(tau, x - 0.5 * (ql + qh));
  }
  double w3 = w / 3.0;
  return cantor_leaf_sum(l, w3, 0.5 * m, d + 1, wlo, whi, tau, x, wtarget) +
         cantor_leaf_sum(l + 2.0 * w3, w3, 0.5 * m, d + 1, wlo, whi, tau, x,
                         wtarget);
}

// closed-form and clipped-quadrature kernel masses per component, times w
double component_kernel_mass(const Component& c, double a, double b,
                             double tau, double x) {
  double st = std::sqrt(tau);
  switch (c.kind) {
    case ComponentKind::Atom:
      return (c.x > a && c.x <= b) ? c.w * heat_kernel(tau, x - c.x) : 0.0;
    case ComponentKind::Uniform: {
      double lo = std::max(a, c.a), hi = std::min(b, c.b);
      if (!(hi > lo)) return 0.0;
      return c.w / (c.b - c.a) *
             (norm_cdf((hi - x) / st) - norm_cdf((lo - x) / st));
    }
    case ComponentKind::Normal: {
      // Gaussian product: N(y;x,tau) N(y;mean,var) = N(x;mean,var+tau) N(y;mt,vt)
      double s2 = c.var + tau;
      double pref = std::exp(-(x - c.mean) * (x - c.mean) / (2.0 * s2)) /
                    (SQRT_2PI * std::sqrt(s2));
      double vt = c.var * tau / s2;
      double mt = (c.mean * tau + x * c.var) / s2;
      double svt = std::sqrt(vt);
      double zhi = b == INF ? INF : (b - mt) / svt;
      double zlo = a == -INF ? -INF : (a - mt) / svt;
      return c.w * pref * (norm_cdf(zhi) - norm_cdf(zlo));
    }
    case ComponentKind::Exponential: {
      double lo = std::max(a, 0.0), hi = b;
      if (!(hi > lo)) return 0.0;
      double e = c.rate * (0.5 * c.rate * tau - x);
      if (e < 600.0) {
        double ctr = x - c.rate * tau;
        double zhi = hi == INF ? INF : (hi - ctr) / st;
        return c.w * c.rate * std::exp(e) *
               (norm_cdf(zhi) - norm_cdf((lo - ctr) / st));
      }
      // overflow-safe direct quadrature (far-left evaluation points)
      double qlo = std::max(lo, x - 9.0 * st);
      double qhi = std::min(std::min(hi, component_eff_hi(c)), x + 9.0 * st);
      if (!(qhi > qlo)) return 0.0;
      QuadOpts o; o.abs_tol = 1e-12; o.max_seg = 0.5 * st;
      auto g = [&](double y) {
        return heat_kernel(tau, x - y) * component_pdf(c, y);
      };
      return c.w * gl_adaptive(g, qlo, qhi, o);
    }
    case ComponentKind::Polynomial: {
      double qlo = std::max(std::max(a, c.a), x - 9.0 * st);
      double qhi = std::min(std::min(b, c.b), x + 9.0 * st);
      if (!(qhi > qlo)) return 0.0;
      QuadOpts o; o.abs_tol = 1e-12; o.max_seg = 0.5 * st;
      auto g = [&](double y) {
        return heat_kernel(tau, x - y) * component_pdf(c, y);
      };
      return c.w * gl_adaptive(g, qlo, qhi, o);
    }
    case ComponentKind::Cantor: {
      // leaves more than 10 kernel deviations out are dropped (p < 2e-22)
      double wlo = std::max(a, x - 10.0 * st);
      double whi = std::min(b, x + 10.0 * st);
      if (!(whi > wlo)) return 0.0;
      // leaf width 0.02 sqrt(tau) keeps the expansion error per call below
      // ~1e-8 p while the pruned leaf count stays O(100)
      return c.w * cantor_leaf_sum(c.a, c.b - c.a, 1.0, 0, wlo, whi, tau, x,
                                   0.02 * st);
    }
  }
  return 0.0;
}

} // namespace

double kernel_signed_mass(const Measure& nu, const Measure& mu,
                          double a, double b, double tau, double x) {
  if (!(b > a) || !(tau > 0.0)) return 0.0;
  double s = 0.0;
  for (const Component& c : nu.components)
    s += component_kernel_mass(c, a, b, tau, x);
  for (const Component& c : mu.components)
    s -= component_kernel_mass(c, a, b, tau, x);
  return s;
}

} // namespace rost
