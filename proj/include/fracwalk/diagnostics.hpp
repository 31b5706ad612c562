#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracwalk/gibbs_walk.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/tail_law.hpp"

namespace fracwalk {

struct ComparisonRow {
  std::string label;
  double grid_a = 0.0; // n, or s for covariance rows
  double grid_b = 0.0; // t for covariance rows
  double mc = 0.0;
  double stderr_ = 0.0;
  double exact = 0.0;
  double asymptote = 0.0; // NaN when not applicable
  double budget = 0.0;    // truncation + burn-in bias allowance added to 3*stderr
  double z = 0.0;         // (mc - exact) / stderr
  bool pass = false;
};

struct ComparisonReport {
  std::string quantity;
  std::string law_spec;
  double p = 0.0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  std::vector<ComparisonRow> rows;

  bool all_pass() const;
};

struct DiagnosticsOptions {
  int threads = 0;                   // 0: default pool size
  std::int64_t burn_in_multiplier = 8;
  double corr_rel_tol = kDefaultCorrRelTol;
  double sigma_mult = 3.0;           // pass band half-width in standard errors
};

// Monte Carlo Var(S_n) under the component-coloring sampler against the exact
// correlation-sum formula and the power-law asymptote, one row per n. The
// point-mass law is compared against its closed form 4p(1-p) n^2 instead.
ComparisonReport variance_compare(const TailLaw& law, double p, std::span<const std::int64_t> n_list,
                                  std::uint64_t reps, std::uint64_t seed,
                                  const DiagnosticsOptions& opts = {});

// Empirical covariance of the rescaled walk at pairs (s,t) against the
// fractional Brownian covariance with H = alpha + 1/2. Diagonal pairs are
// variance rows.
ComparisonReport covariance_compare(const TailLaw& law, double p, std::int64_t n,
                                    std::span<const std::pair<double, double>> st_grid,
                                    std::uint64_t reps, std::uint64_t seed,
                                    const DiagnosticsOptions& opts = {});

struct MomentsCheck {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_stat = 0.0;
  double sigma_skew = 0.0; // sqrt(6/N)
  double sigma_kurt = 0.0; // sqrt(24/N)
  std::uint64_t count = 0;
  bool moments_pass(double sigma_mult = 3.0) const;
};

// Moment and Kolmogorov distances of samples against N(0, exact_variance).
MomentsCheck gaussianity_check(std::span<const double> samples, double exact_variance);

// Covariances of the shipped coordinatewise-increasing functionals of the
// increments: S_n, the drift-corrected running maximum A_{0,n}, S_{n/2}, and
// the +1 count on {i : i % 3 == 1}. Increasing pairs pass when the estimate
// is >= -sigma_mult * stderr; the decreasing B_{0,n} is checked against S_n
// with the inequality reversed.
ComparisonReport fkg_test(const TailLaw& law, double p, std::int64_t n, std::uint64_t reps,
                          std::uint64_t seed, const DiagnosticsOptions& opts = {});

struct MaxStats {
  std::vector<double> a_values; // A_{0,n} per replica
  std::vector<double> b_values; // B_{0,n} per replica
  std::vector<double> theta;
  std::vector<double> tail_frequency; // P(A > theta n^{1/2+a} L(n)^{-1})
  double identity_max_error = 0.0;    // sup |(A-B) - (S_n - (2p-1)n)|
};

MaxStats max_statistics(const TailLaw& law, double p, std::int64_t n, std::uint64_t reps,
                        std::span<const double> theta_list, std::uint64_t seed,
                        const DiagnosticsOptions& opts = {});

} // namespace fracwalk
