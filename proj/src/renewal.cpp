#include "fracwalk/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracwalk/fft.hpp"
#include "fracwalk/stats.hpp"

namespace fracwalk {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

std::vector<double> pmf_prefix(const TailLaw& law, std::int64_t n_max) {
  std::vector<double> p(std::size_t(n_max) + 1, 0.0);
  const std::int64_t stop = law.heavy() ? n_max : std::min(n_max, law.support_max());
  for (std::int64_t k = 1; k <= stop; ++k) p[std::size_t(k)] = law.pmf(k);
  return p;
}

// CDQ convolution: on entry q[l..r) holds all contributions from indices
// below l; on exit q[l..r) is final.
void cdq_solve(std::vector<double>& q, const std::vector<double>& p, std::int64_t p_eff,
               std::int64_t l, std::int64_t r) {
  constexpr std::int64_t kLeaf = 64;
  if (r - l <= kLeaf) {
    for (std::int64_t n = std::max<std::int64_t>(l, 1); n < r; ++n) {
      double s = q[std::size_t(n)];
      const std::int64_t j0 = std::max(l, n - p_eff);
      for (std::int64_t j = j0; j < n; ++j) s += q[std::size_t(j)] * p[std::size_t(n - j)];
      q[std::size_t(n)] = s;
    }
    return;
  }
  const std::int64_t m = l + (r - l) / 2;
  cdq_solve(q, p, p_eff, l, m);
  const std::int64_t pb_len = std::min(r - l - 1, p_eff);
  if (pb_len >= 1) {
    const std::span<const double> qa(q.data() + l, std::size_t(m - l));
    const std::span<const double> pb(p.data() + 1, std::size_t(pb_len));
    const auto conv = fft::convolve(qa, pb);
    const std::int64_t conv_len = std::int64_t(conv.size());
    for (std::int64_t n = m; n < r; ++n) {
      const std::int64_t t = n - l - 1;
      if (t < conv_len) q[std::size_t(n)] += conv[std::size_t(t)];
    }
  }
  cdq_solve(q, p, p_eff, m, r);
}

} // namespace

RenewalSequence renewal_sequence(const TailLaw& law, std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("renewal_sequence: n_max must be >= 1");
  const auto p = pmf_prefix(law, n_max);
  const std::int64_t p_eff = law.heavy() ? n_max : law.support_max();
  RenewalSequence seq{law, {}};
  seq.q.assign(std::size_t(n_max) + 1, 0.0);
  seq.q[0] = 1.0;
  cdq_solve(seq.q, p, p_eff, 0, n_max + 1);
  return seq;
}

std::vector<double> renewal_sequence_naive(const TailLaw& law, std::int64_t n_max) {
  if (n_max < 1) throw std::invalid_argument("renewal_sequence_naive: n_max must be >= 1");
  const auto p = pmf_prefix(law, n_max);
  std::vector<double> q(std::size_t(n_max) + 1, 0.0);
  q[0] = 1.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) s += p[std::size_t(k)] * q[std::size_t(n - k)];
    q[std::size_t(n)] = s;
  }
  return q;
}

double partial_sum_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("partial_sum_constant: alpha must lie in (0,1)");
  return (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::tgamma(1.0 + alpha));
}

PartialSumCheck q_partial_sum_check(const RenewalSequence& seq, std::int64_t x) {
  if (x < 0 || x > seq.n_max()) throw std::invalid_argument("q_partial_sum_check: x out of range");
  PartialSumCheck out;
  out.sum = pairwise_sum(std::span<const double>(seq.q.data(), std::size_t(x) + 1));
  if (seq.law.heavy() && seq.law.alpha() < 1.0) {
    const double a = seq.law.alpha();
    out.asymptote =
        partial_sum_constant(a) * std::pow(double(x), a) / seq.law.slowly_varying(double(x));
    out.ratio = out.sum / out.asymptote;
  } else {
    out.asymptote = std::numeric_limits<double>::quiet_NaN();
    out.ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

SquareSum q_square_sum(const RenewalSequence& seq) {
  SquareSum out;
  const std::size_t n = seq.q.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = seq.q[i] * seq.q[i];
  out.value = pairwise_sum(sq);

  // Fit log q_n^2 against log n over the last decade and integrate the fitted
  // power law beyond the horizon. Reported, not certified.
  out.tail_bound = std::numeric_limits<double>::infinity();
  const std::int64_t N = seq.n_max();
  if (N < 128) return out;
  const std::int64_t lo = std::max<std::int64_t>(N / 10, 1);
  std::vector<double> xs, ys;
  const double step = std::pow(double(N) / double(lo), 1.0 / 127.0);
  double pos = double(lo);
  std::int64_t last = -1;
  for (int i = 0; i < 128; ++i, pos *= step) {
    const std::int64_t idx = std::min<std::int64_t>(N, std::int64_t(pos));
    if (idx <= last) continue;
    last = idx;
    const double v = sq[std::size_t(idx)];
    if (v <= 0.0) continue;
    xs.push_back(std::log(double(idx)));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8) return out;
  const LineFit fit = least_squares(xs, ys);
  if (fit.slope >= -1.000001) return out; // not summable at the observed decay
  out.tail_bound = std::exp(fit.intercept) * std::pow(double(N), fit.slope + 1.0) /
                   (-fit.slope - 1.0);
  return out;
}

CorrelationSequence correlation_sequence(const TailLaw& law, std::int64_t max_lag,
                                         double rel_tol) {
  if (!law.subcritical())
    throw std::domain_error(
        "correlation_sequence: divergent regime (sum q_n^2 converges only for alpha < 1/2)");
  if (max_lag < 0) throw std::invalid_argument("correlation_sequence: max_lag must be >= 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("correlation_sequence: rel_tol must be > 0");

  constexpr std::int64_t kMaxDepth = std::int64_t(1) << 24;
  std::int64_t depth = 1;
  while (depth < std::max<std::int64_t>(std::int64_t(1) << 15, 4 * (max_lag + 1))) depth <<= 1;

  RenewalSequence seq = renewal_sequence(law, depth);
  std::vector<double> c, prev;
  for (;;) {
    c = fft::autocorrelation(seq.q, std::size_t(max_lag));
    if (!prev.empty()) {
      double worst = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::fabs(c[i] - prev[i]));
      if (worst < rel_tol * c[0]) break;
    }
    if (depth >= kMaxDepth)
      throw std::runtime_error("correlation_sequence: no convergence by depth 2^24");
    prev = c;
    depth <<= 1;
    seq = renewal_sequence(law, depth);
  }

  CorrelationSequence out;
  out.c = std::move(c);
  out.depth = depth;
  const SquareSum ss = q_square_sum(seq);
  // suffix[i] = sum of q_j^2 for j >= depth - max_lag + i (computed part)
  std::vector<double> suffix(std::size_t(max_lag) + 2, 0.0);
  for (std::int64_t i = max_lag; i >= 0; --i) {
    const std::int64_t j = depth - max_lag + i; // j >= depth - max_lag >= 3(max_lag+1) > 0
    suffix[std::size_t(i)] =
        suffix[std::size_t(i) + 1] + seq.q[std::size_t(j)] * seq.q[std::size_t(j)];
  }
  out.trunc_error.resize(std::size_t(max_lag) + 1);
  const double sqrt_tb = std::sqrt(ss.tail_bound);
  for (std::int64_t i = 0; i <= max_lag; ++i) {
    // omitted terms are sum_{j > depth - i} q_j q_{j+i}
    const double head = suffix[std::size_t(max_lag - i + 1)] + ss.tail_bound;
    out.trunc_error[std::size_t(i)] = std::sqrt(head) * sqrt_tb;
  }
  return out;
}

double k_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw std::invalid_argument("k_alpha: requires 0 < alpha < 1/2");
  const double g = std::tgamma(1.0 - 2.0 * alpha);
  return 1.0 / (alpha * (2.0 * alpha + 1.0)) /
         (g * g * std::tgamma(2.0 * alpha) * std::cos(kPi * alpha));
}

double c_tilde(const TailLaw& law, double p, const CorrelationSequence& corr) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("c_tilde: p must lie in (0,1)");
  const double a = law.alpha();
  if (!(a < 0.5)) throw std::invalid_argument("c_tilde: requires alpha < 1/2");
  // Defined so that the rescaled walk has unit variance at t = 1:
  // c~^2 * 4p(1-p) K_a = c0 exactly.
  return std::sqrt(corr.c[0] / (4.0 * p * (1.0 - p) * k_alpha(a)));
}

double exact_variance(double p, const CorrelationSequence& corr, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("exact_variance: n must be >= 1");
  if (n > corr.max_lag()) throw std::invalid_argument("exact_variance: n exceeds correlation lags");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("exact_variance: p must lie in [0,1]");
  double s = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) s += double(n - i) * corr.c[std::size_t(i)];
  return 4.0 * p * (1.0 - p) / corr.c[0] * (2.0 * s + double(n) * corr.c[0]);
}

double exact_variance_truncation_budget(double p, const CorrelationSequence& corr,
                                        std::int64_t n) {
  if (n < 1 || n > corr.max_lag()) throw std::invalid_argument("budget: n out of range");
  double s_lo = 0.0, s_hi = 0.0;
  for (std::int64_t i = 1; i <= n; ++i) {
    s_lo += double(n - i) * corr.c[std::size_t(i)];
    s_hi += double(n - i) * (corr.c[std::size_t(i)] + corr.trunc_error[std::size_t(i)]);
  }
  const double f = 4.0 * p * (1.0 - p);
  const double hi = f * (2.0 * s_hi / corr.c[0] + double(n));
  const double lo = f * (2.0 * s_lo / (corr.c[0] + corr.trunc_error[0]) + double(n));
  return hi - lo;
}

double asymptotic_variance(const TailLaw& law, double p, const CorrelationSequence& corr,
                           std::int64_t n) {
  const double a = law.alpha();
  const double ln = law.slowly_varying(double(n));
  return 4.0 * p * (1.0 - p) * k_alpha(a) / corr.c[0] * std::pow(double(n), 2.0 * a + 1.0) /
         (ln * ln);
}

} // namespace fracwalk
