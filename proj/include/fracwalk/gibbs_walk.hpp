#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fracwalk/tail_law.hpp"

namespace fracwalk {

// Meeting probability rho_d of two ancestral lines started d apart, looked up
// from a moderate-depth correlation sequence and extended beyond its last lag
// by the d^{2a-1} L(d)^{-2} decay. Laws with divergent square sums (alpha >=
// 1/2 or finite support, gcd 1) meet almost surely: rho == 1. Instances are
// memoized per law; building one costs a short renewal run.
class MeetingProbabilityTable {
 public:
  static std::shared_ptr<const MeetingProbabilityTable> shared_for(const TailLaw& law);

  double rho(std::int64_t distance) const;

 private:
  MeetingProbabilityTable() = default;
  bool always_one_ = false;
  double alpha_ = 0.0;
  bool log_power_ = false;
  double beta_ = 0.0;
  std::vector<double> table_; // rho at distances 0..M
};

struct SamplerDiagnostics {
  std::int64_t burn_in = 0;          // window depth B below zero
  std::int32_t components_touching = 0; // components meeting {1..n}
  std::int32_t exiting_components = 0;  // those whose line left below -B (all of
                                        // them: every window root's parent is below -B)
  double coalescence_risk = 0.0;     // union bound sum_{i<j} rho(|e_i - e_j|) over exit points
  // First-order bound on the variance deficit of the burn-in cut: tying
  // components c, c' would add 2 * 4p(1-p) m_c m_c' to Var S_n, and the tie
  // below -B happens with probability rho(|e_c - e_c'|).
  double variance_bias_estimate = 0.0;
  bool heavy_regime_warning = false; // law does not declare alpha < 1/2
  std::int64_t fresh_coins = 0;      // adjusted walk only
};

struct WalkPath {
  TailLaw law;
  double p = 0.5;
  std::vector<std::int8_t> increments; // X_1..X_n
  std::vector<std::int64_t> positions; // S_0..S_n, S_0 = 0
  SamplerDiagnostics diagnostics;

  std::int64_t length() const { return std::int64_t(increments.size()); }
  // linear interpolation between integer times
  double position_at(double x) const;
};

// Approximate sampler for the component-coloring Gibbs measure: realize the
// spanning graph on [-B, n], color every window component +1 with probability
// p (coin keyed by the component's minimal vertex), and read off X_1..X_n.
// Components whose lines would only coalesce below -B get independent colors;
// coalescence_risk bounds the total-variation bias of that cut. B = 0 selects
// the default burn-in 8n.
WalkPath sample_gibbs_increments(const TailLaw& law, double p, std::int64_t n, std::int64_t burn_in,
                                 std::uint64_t seed, std::uint32_t replica = 0,
                                 const MeetingProbabilityTable* rho = nullptr);

// Half-line variant on {1..n}: X_i copies X_{i-k_i} when the look-back stays
// in the domain and otherwise draws a fresh fair coin.
WalkPath sample_adjusted_walk(const TailLaw& law, std::int64_t n, std::uint64_t seed,
                              std::uint32_t replica = 0);

struct RescaledPath {
  std::vector<double> t;
  std::vector<double> value;
};

// t -> c~ n^{-1/2-a} L(n) (S(nt) - n(2p-1)t) on the given grid.
RescaledPath rescale(const WalkPath& path, const TailLaw& law, double c_tilde_value,
                     std::int64_t n, std::span<const double> grid);

} // namespace fracwalk
