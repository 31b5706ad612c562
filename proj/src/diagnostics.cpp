#include "fracwalk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracwalk/fbm.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/stats.hpp"

namespace fracwalk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_point_mass(const TailLaw& law) {
  return !law.heavy() && law.support_max() == 1;
}

std::uint32_t replica_id(std::size_t row, std::uint64_t reps, std::uint64_t r) {
  const std::uint64_t id = row * reps + r;
  if (id > 0xffffffffull) throw std::invalid_argument("replica space exhausted");
  return std::uint32_t(id);
}

// drift-corrected running maxima measured from the two endpoints
struct PathMaxima {
  double a = 0.0;
  double b = 0.0;
  double corrected_end = 0.0;
};

PathMaxima path_maxima(const WalkPath& path, double p) {
  const double drift = 2.0 * p - 1.0;
  double peak = 0.0; // i = 0 term of S_i - drift*i
  for (std::int64_t i = 1; i <= path.length(); ++i)
    peak = std::max(peak, double(path.positions[std::size_t(i)]) - drift * double(i));
  const double end = double(path.positions.back()) - drift * double(path.length());
  return {peak, peak - end, end};
}

} // namespace

bool ComparisonReport::all_pass() const {
  for (const auto& row : rows)
    if (!row.pass) return false;
  return true;
}

bool MomentsCheck::moments_pass(double sigma_mult) const {
  return std::fabs(skewness) <= sigma_mult * sigma_skew &&
         std::fabs(excess_kurtosis) <= sigma_mult * sigma_kurt;
}

ComparisonReport variance_compare(const TailLaw& law, double p,
                                  std::span<const std::int64_t> n_list, std::uint64_t reps,
                                  std::uint64_t seed, const DiagnosticsOptions& opts) {
  if (n_list.empty()) throw std::invalid_argument("variance_compare: empty n list");
  if (reps < 2) throw std::invalid_argument("variance_compare: need >= 2 replicas");
  const bool point_mass = is_point_mass(law);
  if (!point_mass && !law.subcritical())
    throw std::domain_error("variance_compare: law must declare alpha < 1/2 (or be the point mass)");

  const std::int64_t n_max = *std::max_element(n_list.begin(), n_list.end());
  CorrelationSequence corr;
  if (!point_mass) corr = correlation_sequence(law, n_max, opts.corr_rel_tol);
  const auto rho = MeetingProbabilityTable::shared_for(law);

  ComparisonReport report{"variance", law.spec_string(), p, reps, seed, {}};
  for (std::size_t row = 0; row < n_list.size(); ++row) {
    const std::int64_t n = n_list[row];
    std::vector<double> sn(reps), bias(reps);
    parallel_for(
        reps,
        [&](std::uint64_t r) {
          const auto path = sample_gibbs_increments(law, p, n, opts.burn_in_multiplier * n, seed,
                                                    replica_id(row, reps, r), rho.get());
          sn[r] = double(path.positions.back());
          bias[r] = path.diagnostics.variance_bias_estimate;
        },
        opts.threads);

    ComparisonRow out;
    out.label = "n=" + std::to_string(n);
    out.grid_a = double(n);
    out.mc = mean_variance(sn).var;
    out.stderr_ = variance_stderr(sn);
    if (point_mass) {
      out.exact = 4.0 * p * (1.0 - p) * double(n) * double(n);
      out.asymptote = kNaN;
      out.budget = 0.0;
    } else {
      out.exact = exact_variance(p, corr, n);
      out.asymptote = asymptotic_variance(law, p, corr, n);
      out.budget = exact_variance_truncation_budget(p, corr, n) + mean_variance(bias).mean;
    }
    out.z = (out.mc - out.exact) / (out.stderr_ > 0 ? out.stderr_ : 1.0);
    out.pass = std::fabs(out.mc - out.exact) <= opts.sigma_mult * out.stderr_ + out.budget;
    report.rows.push_back(std::move(out));
  }
  return report;
}

ComparisonReport covariance_compare(const TailLaw& law, double p, std::int64_t n,
                                    std::span<const std::pair<double, double>> st_grid,
                                    std::uint64_t reps, std::uint64_t seed,
                                    const DiagnosticsOptions& opts) {
  if (!law.subcritical())
    throw std::domain_error("covariance_compare: law must declare alpha < 1/2");
  if (st_grid.empty()) throw std::invalid_argument("covariance_compare: empty grid");
  const double alpha = law.alpha();

  double t_max = 0.0;
  std::vector<double> times;
  for (const auto& [s, t] : st_grid) {
    if (!(s > 0.0) || !(t > 0.0)) throw std::invalid_argument("grid times must be positive");
    times.push_back(s);
    times.push_back(t);
    t_max = std::max({t_max, s, t});
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  const auto corr = correlation_sequence(law, 1, opts.corr_rel_tol);
  const double ct = c_tilde(law, p, corr);
  const auto rho = MeetingProbabilityTable::shared_for(law);
  const auto path_len = std::int64_t(std::ceil(double(n) * t_max));

  std::vector<std::vector<double>> by_time(times.size());
  for (auto& v : by_time) v.resize(reps);
  std::vector<double> bias(reps);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        const auto path = sample_gibbs_increments(law, p, path_len,
                                                  opts.burn_in_multiplier * path_len, seed,
                                                  replica_id(0, reps, r), rho.get());
        const auto rs = rescale(path, law, ct, n, times);
        for (std::size_t j = 0; j < times.size(); ++j) by_time[j][r] = rs.value[j];
        bias[r] = path.diagnostics.variance_bias_estimate;
      },
      opts.threads);

  // the burn-in variance deficit, mapped through the rescaling
  const double scale = ct * std::pow(double(n), -0.5 - alpha) * law.slowly_varying(double(n));
  const double bias_budget = scale * scale * mean_variance(bias).mean;

  ComparisonReport report{"rescaled covariance", law.spec_string(), p, reps, seed, {}};
  const FbmParams fbm{alpha + 0.5};
  for (const auto& [s, t] : st_grid) {
    const auto is = std::size_t(std::lower_bound(times.begin(), times.end(), s) - times.begin());
    const auto it = std::size_t(std::lower_bound(times.begin(), times.end(), t) - times.begin());
    const auto est = covariance(by_time[is], by_time[it]);
    ComparisonRow out;
    out.label = "(s,t)=(" + std::to_string(s) + "," + std::to_string(t) + ")";
    out.grid_a = s;
    out.grid_b = t;
    out.mc = est.cov;
    out.stderr_ = est.stderr_;
    out.exact = fbm_covariance(fbm, s, t);
    out.asymptote = kNaN;
    out.budget = bias_budget;
    out.z = (out.mc - out.exact) / (out.stderr_ > 0 ? out.stderr_ : 1.0);
    out.pass = std::fabs(out.mc - out.exact) <= opts.sigma_mult * out.stderr_ + out.budget;
    report.rows.push_back(std::move(out));
  }
  return report;
}

MomentsCheck gaussianity_check(std::span<const double> samples, double exact_variance) {
  if (samples.size() < 100) throw std::invalid_argument("gaussianity_check: too few samples");
  if (!(exact_variance > 0.0)) throw std::invalid_argument("gaussianity_check: bad variance");
  const auto m = sample_moments(samples);
  MomentsCheck out;
  out.skewness = m.skewness;
  out.excess_kurtosis = m.excess_kurtosis;
  out.ks_stat = ks_statistic_normal(samples, 0.0, std::sqrt(exact_variance));
  out.count = samples.size();
  out.sigma_skew = std::sqrt(6.0 / double(samples.size()));
  out.sigma_kurt = std::sqrt(24.0 / double(samples.size()));
  return out;
}

ComparisonReport fkg_test(const TailLaw& law, double p, std::int64_t n, std::uint64_t reps,
                          std::uint64_t seed, const DiagnosticsOptions& opts) {
  if (n < 4) throw std::invalid_argument("fkg_test: n too small");
  const auto rho = MeetingProbabilityTable::shared_for(law);

  enum { kEnd, kMaxA, kHalf, kPlusCount, kMaxB, kCount };
  std::vector<std::vector<double>> f(kCount);
  for (auto& v : f) v.resize(reps);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        const auto path =
            sample_gibbs_increments(law, p, n, opts.burn_in_multiplier * n, seed,
                                    replica_id(0, reps, r), rho.get());
        const auto m = path_maxima(path, p);
        f[kEnd][r] = double(path.positions.back());
        f[kMaxA][r] = m.a;
        f[kHalf][r] = double(path.positions[std::size_t(n / 2)]);
        double plus = 0.0;
        for (std::int64_t i = 1; i <= n; i += 3) // the fixed index set {1, 4, 7, ...}
          plus += path.increments[std::size_t(i - 1)] == 1;
        f[kPlusCount][r] = plus;
        f[kMaxB][r] = m.b;
      },
      opts.threads);

  const char* names[kCount] = {"S_n", "A_0n", "S_half", "plus_count", "B_0n"};
  ComparisonReport report{"fkg covariance", law.spec_string(), p, reps, seed, {}};

  auto add_row = [&](int x, int y, bool increasing_pair) {
    const auto est = covariance(f[std::size_t(x)], f[std::size_t(y)]);
    ComparisonRow out;
    out.label = std::string("Cov(") + names[x] + "," + names[y] + ")";
    out.mc = est.cov;
    out.stderr_ = est.stderr_;
    out.exact = 0.0; // the FKG lower (resp. upper) bound
    out.asymptote = kNaN;
    out.z = (est.stderr_ > 0) ? est.cov / est.stderr_ : 0.0;
    out.pass = increasing_pair ? est.cov >= -opts.sigma_mult * est.stderr_
                               : est.cov <= opts.sigma_mult * est.stderr_;
    report.rows.push_back(std::move(out));
  };

  add_row(kEnd, kEnd, true); // sanity: a variance is nonnegative
  const int incr[4] = {kEnd, kMaxA, kHalf, kPlusCount};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) add_row(incr[i], incr[j], true);
  add_row(kEnd, kMaxB, false); // increasing vs decreasing: correlation <= 0
  return report;
}

MaxStats max_statistics(const TailLaw& law, double p, std::int64_t n, std::uint64_t reps,
                        std::span<const double> theta_list, std::uint64_t seed,
                        const DiagnosticsOptions& opts) {
  if (!law.subcritical())
    throw std::domain_error("max_statistics: law must declare alpha < 1/2");
  const auto rho = MeetingProbabilityTable::shared_for(law);

  MaxStats out;
  out.a_values.resize(reps);
  out.b_values.resize(reps);
  std::vector<double> identity_err(reps);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        const auto path = sample_gibbs_increments(law, p, n, opts.burn_in_multiplier * n, seed,
                                                  replica_id(0, reps, r), rho.get());
        const auto m = path_maxima(path, p);
        out.a_values[r] = m.a;
        out.b_values[r] = m.b;
        identity_err[r] = std::fabs((m.a - m.b) - m.corrected_end);
      },
      opts.threads);
  out.identity_max_error = *std::max_element(identity_err.begin(), identity_err.end());

  const double scale =
      std::pow(double(n), 0.5 + law.alpha()) / law.slowly_varying(double(n));
  out.theta.assign(theta_list.begin(), theta_list.end());
  out.tail_frequency.resize(theta_list.size());
  for (std::size_t j = 0; j < theta_list.size(); ++j) {
    std::uint64_t hits = 0;
    for (double a : out.a_values) hits += a > theta_list[j] * scale;
    out.tail_frequency[j] = double(hits) / double(reps);
  }
  return out;
}

} // namespace fracwalk
