#include "fracwalk/fbm.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fracwalk/rng.hpp"
#include "fracwalk/stats.hpp"

namespace fracwalk {

namespace {

void check_params(const FbmParams& p) {
  if (!(p.hurst > 0.0 && p.hurst < 1.0))
    throw std::invalid_argument("hurst parameter must lie in (0,1)");
}

std::mutex g_fgn_mutex;
std::map<std::pair<double, std::int64_t>, std::shared_ptr<const FgnSampler>>& fgn_memo() {
  static std::map<std::pair<double, std::int64_t>, std::shared_ptr<const FgnSampler>> memo;
  return memo;
}

} // namespace

double fbm_covariance(const FbmParams& params, double s, double t) {
  check_params(params);
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("fbm_covariance: times must be >= 0");
  const double h2 = 2.0 * params.hurst;
  return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::fabs(t - s), h2));
}

double fgn_autocovariance(const FbmParams& params, std::int64_t k) {
  check_params(params);
  if (k < 0) throw std::invalid_argument("fgn_autocovariance: lag must be >= 0");
  if (k == 0) return 1.0;
  const long double h2 = 2.0L * (long double)params.hurst;
  const long double kk = (long double)k;
  return double(0.5L * (std::pow(kk + 1.0L, h2) - 2.0L * std::pow(kk, h2) +
                        std::pow(kk - 1.0L, h2)));
}

std::shared_ptr<const FgnSampler> FgnSampler::shared_for(const FbmParams& params,
                                                         std::int64_t n) {
  check_params(params);
  if (n < 1 || n > 4096) throw std::invalid_argument("fgn sampler: n must lie in [1, 4096]");
  const auto key = std::make_pair(params.hurst, n);
  {
    std::lock_guard<std::mutex> lock(g_fgn_mutex);
    auto it = fgn_memo().find(key);
    if (it != fgn_memo().end()) return it->second;
  }

  auto sampler = std::shared_ptr<FgnSampler>(new FgnSampler());
  sampler->n_ = n;
  auto& l = sampler->chol_;
  l.assign(std::size_t(n) * std::size_t(n + 1) / 2, 0.0);
  auto at = [&l](std::int64_t i, std::int64_t j) -> double& {
    return l[std::size_t(i) * std::size_t(i + 1) / 2 + std::size_t(j)];
  };
  std::vector<double> gamma(std::size_t(n), 0.0);
  for (std::int64_t k = 0; k < n; ++k) gamma[std::size_t(k)] = fgn_autocovariance(params, k);

  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j <= i; ++j) {
      double s = gamma[std::size_t(i - j)];
      for (std::int64_t k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      if (i == j) {
        if (s <= 0.0)
          throw std::runtime_error("fgn covariance factorization lost positive definiteness");
        at(i, j) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }

  std::lock_guard<std::mutex> lock(g_fgn_mutex);
  auto [it, inserted] = fgn_memo().emplace(key, sampler);
  return it->second;
}

std::vector<double> FgnSampler::sample(std::uint64_t seed, std::uint32_t replica) const {
  std::vector<double> z(std::size_t(n_), 0.0);
  for (std::int64_t j = 0; j < n_; ++j) z[std::size_t(j)] = keyed_normal(seed, replica, j, kDrawGauss);
  std::vector<double> x(std::size_t(n_), 0.0);
  const double* row = chol_.data();
  for (std::int64_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::int64_t j = 0; j <= i; ++j) s += row[j] * z[std::size_t(j)];
    x[std::size_t(i)] = s;
    row += i + 1;
  }
  return x;
}

std::vector<double> sample_fgn(const FbmParams& params, std::int64_t n, std::uint64_t seed,
                               std::uint32_t replica) {
  return FgnSampler::shared_for(params, n)->sample(seed, replica);
}

HurstFit hurst_estimate(std::span<const std::pair<double, double>> variance_curve) {
  if (variance_curve.size() < 4)
    throw std::invalid_argument("hurst_estimate: need at least 4 points");
  std::vector<double> x, y;
  x.reserve(variance_curve.size());
  y.reserve(variance_curve.size());
  for (const auto& [n, var] : variance_curve) {
    if (!(n > 0.0) || !(var > 0.0))
      throw std::invalid_argument("hurst_estimate: nonpositive entry in the variance curve");
    x.push_back(std::log(n));
    y.push_back(std::log(var));
  }
  const LineFit fit = least_squares(x, y);
  return {fit.slope / 2.0, fit.slope_stderr / 2.0};
}

} // namespace fracwalk
