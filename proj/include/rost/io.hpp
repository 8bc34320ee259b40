#pragma once

#include "rost/solver.hpp"
#include "rost/value.hpp"
#include "rost/verify.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace rost {

// Configuration problems get their own type so callers can map them to the
// config-error exit code.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct VerifyGates {
  bool oracle = true;
  bool mc = true;
  double oracle_tol = 0.0;  // 0 means max(0.05, 3*sqrt(h))
  double ks_tol = 0.02;
  double censor_sigmas = 3.0;  // binomial standard errors allowed
};

struct RunConfig {
  Measure mu, nu;
  double T = 1.0;
  int N = 2;
  SolverConfig solver;
  MCConfig mc;
  VerifyGates gates;
  std::string out = ".";
};

// Strict JSON ingestion: unknown keys anywhere are rejected, kinds select
// the exact field set a component may carry, and measures are validated
// semantically after parsing. Throws ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Full round-trippable JSON document with every default materialized, so a
// run directory is self-describing.
std::string materialize_config(const RunConfig& cfg);

// One row per node in forward time: `t,s_plus,s_minus`, `inf` sentinel for
// an absent side, 12 significant digits, mandatory header.
void write_boundaries_csv(const std::string& path, const BoundaryPair& bp);

// Inverse of write_boundaries_csv: accepts any strtod-parseable reals,
// requires the exact header, ascending equally spaced t from 0, and at
// least two rows. Throws ConfigError on malformed input.
BoundaryPair read_boundaries_csv(const std::string& path);

// `path,sigma,w_stop,side` with side spelled upper|lower|censored.
void write_samples_csv(const std::string& path,
                       const std::vector<EmbeddingSample>& samples);

// Node-by-node comparison against the lattice boundary, forward time.
void write_oracle_csv(const std::string& path, const BoundaryPair& bp,
                      const LatticeResult& lat);

std::string solve_report_json(const SolveResult& r);
std::string mc_report_json(const EmbeddingDiagnostics& d);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace rost
