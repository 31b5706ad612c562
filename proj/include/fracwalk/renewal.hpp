#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fracwalk/tail_law.hpp"

namespace fracwalk {

// q[n] = P(n lies in the set of partial sums of iid draws from the law),
// with q[0] = 1, computed from the renewal recursion
//   q[n] = sum_{k=1..n} pmf(k) q[n-k].
struct RenewalSequence {
  TailLaw law;
  std::vector<double> q; // indices 0..n_max
  std::int64_t n_max() const { return std::int64_t(q.size()) - 1; }
};

// Divide-and-conquer convolution, O(N log^2 N); used for every length.
RenewalSequence renewal_sequence(const TailLaw& law, std::int64_t n_max);
// Reference O(N^2) evaluation of the same recursion (tests cross-check the
// two to 1e-12).
std::vector<double> renewal_sequence_naive(const TailLaw& law, std::int64_t n_max);

struct PartialSumCheck {
  double sum = 0.0;       // sum_{n<=x} q_n
  double asymptote = 0.0; // (1-a)/(Gamma(2-a)Gamma(1+a)) * x^a / L(x); NaN for finite laws
  double ratio = 0.0;
};
PartialSumCheck q_partial_sum_check(const RenewalSequence& seq, std::int64_t x);

// (1-a)/(Gamma(2-a)Gamma(1+a))
double partial_sum_constant(double alpha);

struct SquareSum {
  double value = 0.0;      // sum q_n^2 over the computed range
  double tail_bound = 0.0; // fitted power-law remainder; +inf when the decay
                           // observed over the last decade is not summable
};
SquareSum q_square_sum(const RenewalSequence& seq);

// Truncated autocorrelation of q: c[i] ~= sum_j q_j q_{i+j}. The depth J is
// doubled until one more doubling moves every coefficient by less than
// rel_tol * c[0]; trunc_error[i] is a Cauchy-Schwarz bound on the omitted
// mass, so c[i] <= exact <= c[i] + trunc_error[i] (up to the fitted square-sum
// remainder).
struct CorrelationSequence {
  std::vector<double> c;
  std::vector<double> trunc_error;
  std::int64_t depth = 0; // J actually used
  std::int64_t max_lag() const { return std::int64_t(c.size()) - 1; }
  double rho(std::int64_t i) const { return c[std::size_t(i)] / c[0]; }
};

inline constexpr double kDefaultCorrRelTol = 2e-5;

CorrelationSequence correlation_sequence(const TailLaw& law, std::int64_t max_lag,
                                         double rel_tol = kDefaultCorrRelTol);

// Variance asymptote constant: [a(2a+1)]^-1 [Gamma(1-2a)^2 Gamma(2a) cos(pi a)]^-1,
// defined for 0 < a < 1/2. Satisfies sum_{i<=n} c_i ~ 2a K_a n^{2a} L^-2 and
// Var S_n ~ 4p(1-p) K_a / c0 * n^{2a+1} L^-2.
double k_alpha(double alpha);

// Normalizing constant of the rescaled walk, fixed by the identity
// c~^2 * 4p(1-p) K_a = c0 (unit variance of the rescaled walk at t = 1).
double c_tilde(const TailLaw& law, double p, const CorrelationSequence& corr);

// Var S_n = 4p(1-p)/c0 * (2 sum_{i<n} (n-i) c_i + n c0); exact for any law
// in the infinitely-many-components regime.
double exact_variance(double p, const CorrelationSequence& corr, std::int64_t n);
// Upper bound on how far truncation of c can pull exact_variance down.
double exact_variance_truncation_budget(double p, const CorrelationSequence& corr, std::int64_t n);

// 4p(1-p) K_a / c0 * n^(2a+1) L(n)^-2.
double asymptotic_variance(const TailLaw& law, double p, const CorrelationSequence& corr,
                           std::int64_t n);

} // namespace fracwalk
