#pragma once

#include "rost/solver.hpp"

#include <cstdint>
#include <vector>

namespace rost {

// 64-bit avalanche finalizer (variant 13). Bijective, so distinct inputs
// never collide.
std::uint64_t mix64(std::uint64_t z);

// Counter-based stream: draw n is a pure function of (key, n), the mix of
// key plus n steps of a Weyl walk. Draws can be made in any order and
// unused counters cost nothing, so simulations stay bit-identical no
// matter how the work is scheduled.
struct CounterRng {
  std::uint64_t key = 0;
  double uniform(std::uint64_t n) const;  // strictly inside (0, 1)
  double normal(std::uint64_t n) const;   // inverse-cdf transform
};

// Stream for one path, derived from (seed, path index). Counter 0 is the
// initial draw from nu; step m consumes counters 4m (Gaussian increment),
// 4m+1 and 4m+2 (upper and lower bridge uniforms, drawn only when needed).
CounterRng path_stream(std::uint64_t seed, std::uint64_t path);

enum class StopSide { Upper, Lower, Censored };

struct EmbeddingSample {
  double sigma = 0.0;   // stopping time in (0, T]; equals T when censored
  double w_stop = 0.0;  // boundary value at sigma; terminal value if censored
  StopSide side = StopSide::Censored;
};

struct MCConfig {
  long n_paths = 100000;
  double dt = 1e-4;           // step hint; must not exceed the grid spacing
  std::uint64_t seed = 0;
  // re-solve the first grid cell on a 200-node subgrid so the steep start
  // of the boundary is monitored at matching resolution (the forward
  // recursion is horizon-local, so the short solve yields the same curve)
  bool refine_vertex = true;
};

// First exit of W (started from nu) through the moving corridor
// (-s_-(t), s_+(t)) read off bp. Gaussian steps between schedule times with
// a Brownian-bridge crossing check against the per-segment linearized
// boundary; the segment starting at the anchor uses square-root
// interpolation instead, since the true curve there rises steeply enough
// that no chord bridge applies. Paths alive at T are censored. Stopped
// paths record the interpolated boundary value at the crossing time.
// Singular starting laws throw std::invalid_argument.
std::vector<EmbeddingSample> simulate_embedding(const BoundaryPair& bp,
                                                const BarrierProblem& prob,
                                                const MCConfig& cfg);

struct EmbeddingDiagnostics {
  double ks = 0.0;  // stopped values vs the target restricted to the
                    // window the barrier reaches by the horizon
  long n_stopped = 0;
  long n_censored = 0;
  long n_upper = 0;
  long n_lower = 0;
  double censor_pred = 0.0;  // 1 - mu(reachable window)
  double censor_obs = 0.0;
};

// Kolmogorov-Smirnov distance between the non-censored stopped values and
// the target restricted to [-s_-(T), -hat_-] u [hat_+, s_+(T)] and
// renormalized, plus censoring accounting. Needs at least 1000 stopped
// samples; throws std::invalid_argument otherwise.
EmbeddingDiagnostics embedding_test(const std::vector<EmbeddingSample>& samples,
                                    const BarrierProblem& prob,
                                    const BoundaryPair& bp);

}  // namespace rost
