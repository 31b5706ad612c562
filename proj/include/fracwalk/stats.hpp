#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fracwalk {

// Order-fixed pairwise summation; used for every replica reduction so that
// reports do not depend on the worker count.
double pairwise_sum(std::span<const double> x);

struct MeanVar {
  double mean = 0.0;
  double var = 0.0; // unbiased
  double stderr_mean = 0.0;
  std::uint64_t count = 0;
};
MeanVar mean_variance(std::span<const double> x);

// Standard error of the unbiased sample variance, sqrt((m4 - m2^2)/n).
double variance_stderr(std::span<const double> x);

struct CovEstimate {
  double cov = 0.0;
  double stderr_ = 0.0;
};
CovEstimate covariance(std::span<const double> x, std::span<const double> y);

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  std::uint64_t count = 0;
};
Moments sample_moments(std::span<const double> x);

double normal_cdf(double z);

// One-sample Kolmogorov distance against N(mean, sd^2).
double ks_statistic_normal(std::span<const double> x, double mean, double sd);
double ks_two_sample(std::span<const double> x, std::span<const double> y);

// Dvoretzky-Kiefer-Wolfowitz band half-width at the given confidence.
double dkw_epsilon(std::uint64_t n, double confidence);

double binomial_ci_halfwidth(double p_hat, std::uint64_t n, double z);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

} // namespace fracwalk
