#include "rost/io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rost {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(std::string(where) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) bad(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

double num(const json& j, const char* where, const char* key) {
  if (!j.contains(key))
    bad(std::string(where) + ": missing key \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) bad(std::string(where) + ": \"" + key + "\" not a number");
  double x = v.get<double>();
  if (!std::isfinite(x))
    bad(std::string(where) + ": \"" + key + "\" not finite");
  return x;
}

long integer(const json& j, const char* where, const char* key) {
  if (!j.contains(key))
    bad(std::string(where) + ": missing key \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer())
    bad(std::string(where) + ": \"" + key + "\" not an integer");
  return v.get<long>();
}

bool boolean(const json& j, const char* where, const char* key, bool dflt) {
  if (!j.contains(key)) return dflt;
  const json& v = j.at(key);
  if (!v.is_boolean()) bad(std::string(where) + ": \"" + key + "\" not a bool");
  return v.get<bool>();
}

double num_or(const json& j, const char* where, const char* key, double dflt) {
  return j.contains(key) ? num(j, where, key) : dflt;
}

Component parse_component(const json& j, const std::string& where) {
  const char* w = where.c_str();
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    bad(where + ": component needs a string \"kind\"");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "atom") {
    check_keys(j, w, {"kind", "x", "w"});
    return Component::atom(num(j, w, "x"), num(j, w, "w"));
  }
  if (kind == "uniform") {
    check_keys(j, w, {"kind", "a", "b", "w"});
    return Component::uniform(num(j, w, "a"), num(j, w, "b"), num(j, w, "w"));
  }
  if (kind == "normal") {
    check_keys(j, w, {"kind", "mean", "var", "w"});
    return Component::normal(num(j, w, "mean"), num(j, w, "var"),
                             num(j, w, "w"));
  }
  if (kind == "exponential") {
    check_keys(j, w, {"kind", "rate", "w"});
    return Component::exponential(num(j, w, "rate"), num(j, w, "w"));
  }
  if (kind == "polynomial") {
    check_keys(j, w, {"kind", "a", "b", "m", "w"});
    return Component::polynomial(num(j, w, "a"), num(j, w, "b"),
                                 (int)integer(j, w, "m"), num(j, w, "w"));
  }
  if (kind == "cantor") {
    check_keys(j, w, {"kind", "a", "b", "depth", "w"});
    return Component::cantor(num(j, w, "a"), num(j, w, "b"),
                             (int)integer(j, w, "depth"), num(j, w, "w"));
  }
  bad(where + ": unknown kind \"" + kind + "\"");
}

Measure parse_measure(const json& j, const std::string& where) {
  check_keys(j, where.c_str(), {"components"});
  if (!j.contains("components") || !j.at("components").is_array() ||
      j.at("components").empty())
    bad(where + ": needs a non-empty \"components\" array");
  Measure m;
  int i = 0;
  for (const json& c : j.at("components"))
    m.components.push_back(
        parse_component(c, where + ".components[" + std::to_string(i++) + "]"));
  try {
    m.validate();
  } catch (const std::exception& e) {
    bad(where + ": " + e.what());
  }
  return m;
}

json component_json(const Component& c) {
  json j;
  switch (c.kind) {
    case ComponentKind::Atom:
      j = {{"kind", "atom"}, {"x", c.x}, {"w", c.w}};
      break;
    case ComponentKind::Uniform:
      j = {{"kind", "uniform"}, {"a", c.a}, {"b", c.b}, {"w", c.w}};
      break;
    case ComponentKind::Normal:
      j = {{"kind", "normal"}, {"mean", c.mean}, {"var", c.var}, {"w", c.w}};
      break;
    case ComponentKind::Exponential:
      j = {{"kind", "exponential"}, {"rate", c.rate}, {"w", c.w}};
      break;
    case ComponentKind::Polynomial:
      j = {{"kind", "polynomial"}, {"a", c.a}, {"b", c.b}, {"m", c.m},
           {"w", c.w}};
      break;
    case ComponentKind::Cantor:
      j = {{"kind", "cantor"}, {"a", c.a}, {"b", c.b}, {"depth", c.depth},
           {"w", c.w}};
      break;
  }
  return j;
}

json measure_json(const Measure& m) {
  json comps = json::array();
  for (const Component& c : m.components) comps.push_back(component_json(c));
  return json{{"components", std::move(comps)}};
}

std::string fmt12(double x) {
  if (x == INF) return "inf";
  if (x == 0.0) x = 0.0;  // collapse -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    bad(std::string("config: invalid JSON: ") + e.what());
  }
  check_keys(j, "config", {"mu", "nu", "T", "N", "solver", "mc", "verify", "out"});
  if (!j.contains("mu") || !j.contains("nu"))
    bad("config: both \"mu\" and \"nu\" are required");

  RunConfig cfg;
  cfg.mu = parse_measure(j.at("mu"), "mu");
  cfg.nu = parse_measure(j.at("nu"), "nu");
  cfg.T = num(j, "config", "T");
  cfg.N = (int)integer(j, "config", "N");
  if (!(cfg.T > 0.0)) bad("config: T must be positive");
  if (cfg.N < 2) bad("config: N must be at least 2");

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    check_keys(s, "solver",
               {"root_abs_tol", "residual_tol", "max_bisection_iters",
                "newton_polish_iters", "cap_plus", "cap_minus", "force_sweeps",
                "max_sweeps"});
    cfg.solver.root_abs_tol =
        num_or(s, "solver", "root_abs_tol", cfg.solver.root_abs_tol);
    cfg.solver.residual_tol =
        num_or(s, "solver", "residual_tol", cfg.solver.residual_tol);
    if (s.contains("max_bisection_iters"))
      cfg.solver.max_bisection_iters =
          (int)integer(s, "solver", "max_bisection_iters");
    if (s.contains("newton_polish_iters"))
      cfg.solver.newton_polish_iters =
          (int)integer(s, "solver", "newton_polish_iters");
    cfg.solver.cap_plus = num_or(s, "solver", "cap_plus", cfg.solver.cap_plus);
    cfg.solver.cap_minus =
        num_or(s, "solver", "cap_minus", cfg.solver.cap_minus);
    cfg.solver.force_sweeps =
        boolean(s, "solver", "force_sweeps", cfg.solver.force_sweeps);
    if (s.contains("max_sweeps"))
      cfg.solver.max_sweeps = (int)integer(s, "solver", "max_sweeps");
  }

  if (j.contains("mc")) {
    const json& m = j.at("mc");
    check_keys(m, "mc", {"n_paths", "dt", "seed", "refine_vertex"});
    if (m.contains("n_paths")) cfg.mc.n_paths = integer(m, "mc", "n_paths");
    cfg.mc.dt = num_or(m, "mc", "dt", cfg.mc.dt);
    if (m.contains("seed")) {
      const json& v = m.at("seed");
      if (!v.is_number_integer() && !v.is_number_unsigned())
        bad("mc: \"seed\" not an integer");
      cfg.mc.seed = v.get<std::uint64_t>();
    }
    cfg.mc.refine_vertex =
        boolean(m, "mc", "refine_vertex", cfg.mc.refine_vertex);
  }

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, "verify",
               {"oracle", "mc", "oracle_tol", "ks_tol", "censor_sigmas"});
    cfg.gates.oracle = boolean(v, "verify", "oracle", cfg.gates.oracle);
    cfg.gates.mc = boolean(v, "verify", "mc", cfg.gates.mc);
    cfg.gates.oracle_tol =
        num_or(v, "verify", "oracle_tol", cfg.gates.oracle_tol);
    cfg.gates.ks_tol = num_or(v, "verify", "ks_tol", cfg.gates.ks_tol);
    cfg.gates.censor_sigmas =
        num_or(v, "verify", "censor_sigmas", cfg.gates.censor_sigmas);
  }

  if (j.contains("out")) {
    if (!j.at("out").is_string()) bad("config: \"out\" not a string");
    cfg.out = j.at("out").get<std::string>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string materialize_config(const RunConfig& cfg) {
  json j;
  j["mu"] = measure_json(cfg.mu);
  j["nu"] = measure_json(cfg.nu);
  j["T"] = cfg.T;
  j["N"] = cfg.N;
  j["solver"] = {{"root_abs_tol", cfg.solver.root_abs_tol},
                 {"residual_tol", cfg.solver.residual_tol},
                 {"max_bisection_iters", cfg.solver.max_bisection_iters},
                 {"newton_polish_iters", cfg.solver.newton_polish_iters},
                 {"cap_plus", cfg.solver.cap_plus},
                 {"cap_minus", cfg.solver.cap_minus},
                 {"force_sweeps", cfg.solver.force_sweeps},
                 {"max_sweeps", cfg.solver.max_sweeps}};
  j["mc"] = {{"n_paths", cfg.mc.n_paths},
             {"dt", cfg.mc.dt},
             {"seed", cfg.mc.seed},
             {"refine_vertex", cfg.mc.refine_vertex}};
  j["verify"] = {{"oracle", cfg.gates.oracle},
                 {"mc", cfg.gates.mc},
                 {"oracle_tol", cfg.gates.oracle_tol},
                 {"ks_tol", cfg.gates.ks_tol},
                 {"censor_sigmas", cfg.gates.censor_sigmas}};
  j["out"] = cfg.out;
  return j.dump(2) + "\n";
}

void write_boundaries_csv(const std::string& path, const BoundaryPair& bp) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,s_plus,s_minus\n";
  const int N = bp.grid.N;
  for (int k = N; k >= 0; --k) {
    double t = bp.grid.T - bp.grid.node(k);
    out << fmt12(t) << ',' << fmt12(bp.b_plus[k]) << ','
        << fmt12(bp.b_minus[k]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

BoundaryPair read_boundaries_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("boundaries: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,s_plus,s_minus")
    bad("boundaries: bad header in " + path);
  std::vector<double> t, sp, sm;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const char* p = line.c_str();
    double v[3];
    for (int i = 0; i < 3; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p)
        bad("boundaries: unparseable field at row " + std::to_string(row));
      p = end;
      if (i < 2) {
        if (*p != ',')
          bad("boundaries: expected comma at row " + std::to_string(row));
        ++p;
      }
    }
    if (*p != '\0' && *p != '\r')
      bad("boundaries: trailing junk at row " + std::to_string(row));
    t.push_back(v[0]);
    sp.push_back(v[1]);
    sm.push_back(v[2]);
  }
  const std::size_t n = t.size();
  if (n < 3) bad("boundaries: need at least 3 rows");
  if (t.front() != 0.0) bad("boundaries: first t must be 0");
  const double T = t.back();
  if (!(T > 0.0)) bad("boundaries: last t must be positive");
  const double h = T / (double)(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(t[i] - (double)i * h) > 1e-9 * T)
      bad("boundaries: t must be ascending and equally spaced");

  BoundaryPair bp;
  bp.grid = Grid{T, (int)(n - 1)};
  bp.b_plus.resize(n);
  bp.b_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // row i holds forward time i*h = node N - i of the backward grid
    bp.b_plus[n - 1 - i] = sp[i];
    bp.b_minus[n - 1 - i] = sm[i];
  }
  return bp;
}

void write_samples_csv(const std::string& path,
                       const std::vector<EmbeddingSample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "path,sigma,w_stop,side\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const EmbeddingSample& s = samples[i];
    const char* side = s.side == StopSide::Upper     ? "upper"
                       : s.side == StopSide::Lower   ? "lower"
                                                     : "censored";
    out << i << ',' << fmt12(s.sigma) << ',' << fmt12(s.w_stop) << ',' << side
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

void write_oracle_csv(const std::string& path, const BoundaryPair& bp,
                      const LatticeResult& lat) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,solver_s_plus,lattice_s_plus,solver_s_minus,lattice_s_minus,"
         "abs_diff_plus,abs_diff_minus\n";
  const int N = bp.grid.N;
  auto diff = [](double a, double b) {
    if (a == INF && b == INF) return 0.0;
    return std::abs(a - b);
  };
  for (int k = N; k >= 0; --k) {
    double t = bp.grid.T - bp.grid.node(k);
    out << fmt12(t) << ',' << fmt12(bp.b_plus[k]) << ','
        << fmt12(lat.b_plus[k]) << ',' << fmt12(bp.b_minus[k]) << ','
        << fmt12(lat.b_minus[k]) << ',' << fmt12(diff(bp.b_plus[k], lat.b_plus[k]))
        << ',' << fmt12(diff(bp.b_minus[k], lat.b_minus[k])) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string solve_report_json(const SolveResult& r) {
  json j;
  j["s_plus_T"] = r.bp.b_plus.front() == INF ? json("inf")
                                             : json(r.bp.b_plus.front());
  j["s_minus_T"] = r.bp.b_minus.front() == INF ? json("inf")
                                               : json(r.bp.b_minus.front());
  j["max_certified_residual"] = r.report.max_certified;
  j["max_literal_residual"] = r.report.max_literal;
  j["n_midpoint"] = r.report.n_midpoint;
  j["n_bind"] = r.report.n_bind;
  j["max_sweeps_used"] = r.report.max_sweeps_used;
  return j.dump(2) + "\n";
}

std::string mc_report_json(const EmbeddingDiagnostics& d) {
  json j;
  j["ks"] = d.ks;
  j["n_stopped"] = d.n_stopped;
  j["n_censored"] = d.n_censored;
  j["censor_pred"] = d.censor_pred;
  j["censor_obs"] = d.censor_obs;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace rost
