#include "fracwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracwalk {

double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 64) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t h = x.size() / 2;
  return pairwise_sum(x.first(h)) + pairwise_sum(x.subspan(h));
}

MeanVar mean_variance(std::span<const double> x) {
  MeanVar out;
  out.count = x.size();
  if (x.empty()) return out;
  out.mean = pairwise_sum(x) / double(x.size());
  if (x.size() < 2) return out;
  std::vector<double> sq(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - out.mean;
    sq[i] = d * d;
  }
  out.var = pairwise_sum(sq) / double(x.size() - 1);
  out.stderr_mean = std::sqrt(out.var / double(x.size()));
  return out;
}

double variance_stderr(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mean = pairwise_sum(x) / double(x.size());
  std::vector<double> sq(x.size()), qu(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    sq[i] = d * d;
    qu[i] = d * d * d * d;
  }
  const double m2 = pairwise_sum(sq) / double(x.size());
  const double m4 = pairwise_sum(qu) / double(x.size());
  const double v = std::max(0.0, m4 - m2 * m2);
  return std::sqrt(v / double(x.size()));
}

CovEstimate covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("covariance: length mismatch");
  CovEstimate out;
  const std::size_t n = x.size();
  if (n < 2) return out;
  const double mx = pairwise_sum(x) / double(n);
  const double my = pairwise_sum(y) / double(n);
  std::vector<double> prod(n), prod2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = x[i] - mx;
    const double b = y[i] - my;
    prod[i] = a * b;
    prod2[i] = a * b * a * b;
  }
  const double c = pairwise_sum(prod) / double(n);
  const double m22 = pairwise_sum(prod2) / double(n);
  out.cov = c * double(n) / double(n - 1);
  out.stderr_ = std::sqrt(std::max(0.0, m22 - c * c) / double(n));
  return out;
}

Moments sample_moments(std::span<const double> x) {
  Moments out;
  out.count = x.size();
  if (x.size() < 2) return out;
  const std::size_t n = x.size();
  out.mean = pairwise_sum(x) / double(n);
  std::vector<double> p2(n), p3(n), p4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - out.mean;
    p2[i] = d * d;
    p3[i] = d * d * d;
    p4[i] = d * d * d * d;
  }
  const double m2 = pairwise_sum(p2) / double(n);
  const double m3 = pairwise_sum(p3) / double(n);
  const double m4 = pairwise_sum(p4) / double(n);
  out.var = m2 * double(n) / double(n - 1);
  out.skewness = m3 / std::pow(m2, 1.5);
  out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

double ks_statistic_normal(std::span<const double> x, double mean, double sd) {
  if (x.empty() || sd <= 0.0) return 0.0;
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = double(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = normal_cdf((s[i] - mean) / sd);
    d = std::max(d, std::max(f - double(i) / n, double(i + 1) / n - f));
  }
  return d;
}

double ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) return 0.0;
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(double(i) / double(a.size()) - double(j) / double(b.size())));
  }
  return d;
}

double dkw_epsilon(std::uint64_t n, double confidence) {
  if (n == 0) return 1.0;
  const double delta = 1.0 - confidence;
  return std::sqrt(std::log(2.0 / delta) / (2.0 * double(n)));
}

double binomial_ci_halfwidth(double p_hat, std::uint64_t n, double z) {
  if (n == 0) return 1.0;
  return z * std::sqrt(std::max(p_hat * (1.0 - p_hat), 1.0 / double(n)) / double(n));
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument("least_squares: need >= 3 points");
  const std::size_t n = x.size();
  const double mx = pairwise_sum(x) / double(n);
  const double my = pairwise_sum(y) / double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  fit.slope_stderr = (n > 2) ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  return fit;
}

} // namespace fracwalk
