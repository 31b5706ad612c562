#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracwalk/diagnostics.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/stats.hpp"

using namespace fracwalk;

namespace {
const TailLaw kDelta1 = TailLaw::finite_support({1.0});
const TailLaw kQuarter = TailLaw::power(0.25);
}

TEST_CASE("variance_compare: point-mass closed form and the n=1 row") {
  const std::vector<std::int64_t> ns{1, 16, 64};
  const auto rep = variance_compare(kDelta1, 0.3, ns, 4000, 0xd1a6);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].exact == doctest::Approx(4.0 * 0.3 * 0.7));
  CHECK(rep.rows[1].exact == doctest::Approx(4.0 * 0.3 * 0.7 * 256.0));
  CHECK(rep.all_pass());
  CHECK(std::isnan(rep.rows[0].asymptote));
}

TEST_CASE("variance_compare: heavy law rows pass with their budgets") {
  const std::vector<std::int64_t> ns{1, 64, 256};
  DiagnosticsOptions opts;
  opts.corr_rel_tol = 1e-4;
  const auto rep = variance_compare(kQuarter, 0.5, ns, 6000, 0xd1a7, opts);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].exact == doctest::Approx(1.0)); // 4p(1-p) at n=1
  CHECK(rep.all_pass());
  CHECK(rep.rows[2].asymptote > 0.0);
  CHECK(rep.rows[2].budget > 0.0);
  CHECK_THROWS_AS((void)variance_compare(TailLaw::power(0.75), 0.5, ns, 100, 1),
                  std::domain_error);
}

TEST_CASE("covariance_compare at collapsing points") {
  // (s, t) = (0.5, 1): exact target 1/2 by stationarity of the increments
  const std::vector<std::pair<double, double>> grid{{0.5, 1.0}, {1.0, 1.0}};
  DiagnosticsOptions opts;
  opts.corr_rel_tol = 1e-4;
  const auto rep = covariance_compare(kQuarter, 0.5, 1 << 10, grid, 4000, 0xc0f, opts);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].exact == doctest::Approx(0.5));
  CHECK(rep.rows[1].exact == doctest::Approx(1.0));
  CHECK(rep.all_pass());
}

TEST_CASE("gaussianity_check accepts an iid fair-coin walk control") {
  const std::int64_t n = 1 << 12;
  const std::uint64_t reps = 10000;
  std::vector<double> sn(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    std::int64_t s = 0;
    for (std::int64_t i = 1; i <= n; ++i)
      s += keyed_uniform(0x9a55, std::uint32_t(r), i, kDrawFreshCoin) < 0.5 ? 1 : -1;
    sn[r] = double(s);
  }
  const auto chk = gaussianity_check(sn, double(n));
  CHECK(chk.moments_pass(3.0));
  CHECK(chk.ks_stat * std::sqrt(double(reps)) < 1.95);
  CHECK(chk.sigma_skew == doctest::Approx(std::sqrt(6.0 / double(reps))));
}

TEST_CASE("H=1/2 control: disjoint iid increments are uncorrelated") {
  const std::int64_t n = 1 << 12;
  const std::uint64_t reps = 8000;
  std::vector<double> first_half(reps), second_half(reps);
  for (std::uint64_t r = 0; r < reps; ++r) {
    std::int64_t a = 0, b = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
      const int x = keyed_uniform(0x1d1d, std::uint32_t(r), i, kDrawFreshCoin) < 0.5 ? 1 : -1;
      (i <= n / 2 ? a : b) += x;
    }
    first_half[r] = double(a) / std::sqrt(double(n / 2));
    second_half[r] = double(b) / std::sqrt(double(n / 2));
  }
  const auto est = covariance(first_half, second_half);
  CHECK(std::fabs(est.cov) < 3.0 * est.stderr_);
}

TEST_CASE("fkg_test: every built-in pair passes one-sided, point mass exact value") {
  const auto rep = fkg_test(kQuarter, 0.5, 128, 8000, 0xf6c);
  REQUIRE(rep.rows.size() == 8);
  CHECK(rep.all_pass());
  CHECK(rep.rows[0].mc > 0.0); // sanity row is a variance

  // point mass: S_{n/2} and S_n are perfectly correlated coin multiples
  const auto d1 = fkg_test(kDelta1, 0.3, 64, 8000, 0xf6d);
  CHECK(d1.all_pass());
  for (const auto& row : d1.rows) {
    if (row.label == "Cov(S_n,S_half)") {
      const double want = 4.0 * 0.3 * 0.7 * 32.0 * 64.0;
      CHECK(std::fabs(row.mc - want) < 3.0 * row.stderr_);
    }
  }
}

TEST_CASE("reports are bit-exact replays of (seed, config)") {
  const std::vector<std::int64_t> ns{16, 64};
  DiagnosticsOptions opts;
  opts.corr_rel_tol = 1e-3;
  const auto a = variance_compare(kQuarter, 0.5, ns, 1500, 0xbeef, opts);
  const auto b = variance_compare(kQuarter, 0.5, ns, 1500, 0xbeef, opts);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].mc == b.rows[i].mc);
    CHECK(a.rows[i].stderr_ == b.rows[i].stderr_);
    CHECK(a.rows[i].budget == b.rows[i].budget);
  }
}

TEST_CASE("running maxima above the fluctuation scale are rare") {
  // threshold theta = 8/c~ sits eight standard fluctuation units out
  const auto corr = correlation_sequence(kQuarter, 1, 1e-4);
  const double ct = c_tilde(kQuarter, 0.5, corr);
  const std::vector<double> theta{8.0 / ct};
  const auto ms = max_statistics(kQuarter, 0.5, 1 << 12, 2000, theta, 0x8c7);
  CHECK(ms.tail_frequency[0] < 0.05);
}

TEST_CASE("max_statistics: pathwise identity and monotone tail decay") {
  const std::vector<double> theta{0.0, 0.5, 1.0, 2.0, 4.0};
  const auto ms = max_statistics(kQuarter, 0.5, 1 << 10, 4000, theta, 0xa55);
  CHECK(ms.identity_max_error < 1e-9);
  for (double a : ms.a_values) CHECK(a >= 0.0);
  for (double b : ms.b_values) CHECK(b >= 0.0);
  CHECK(ms.tail_frequency[0] > 0.9); // A > 0 with high probability at p = 1/2
  for (std::size_t j = 1; j < theta.size(); ++j)
    CHECK(ms.tail_frequency[j] <= ms.tail_frequency[j - 1]);
  CHECK(ms.tail_frequency.back() < 0.2);
  CHECK_THROWS_AS((void)max_statistics(kDelta1, 0.5, 64, 100, theta, 1), std::domain_error);
}
