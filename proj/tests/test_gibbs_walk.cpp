#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fracwalk/gibbs_walk.hpp"
#include "fracwalk/parallel.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/tail_law.hpp"

using namespace fracwalk;

namespace {
const TailLaw kDelta1 = TailLaw::finite_support({1.0});
}

TEST_CASE("point mass gives a single coin flip shared by every increment") {
  std::uint64_t plus = 0;
  const std::uint64_t reps = 10000;
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto path = sample_gibbs_increments(kDelta1, 0.7, 32, 256, 0x91bb5, std::uint32_t(r));
    for (auto x : path.increments) CHECK(x == path.increments[0]);
    CHECK(path.diagnostics.components_touching == 1);
    CHECK(path.diagnostics.coalescence_risk == 0.0);
    plus += path.increments[0] == 1;
  }
  const double freq = double(plus) / double(reps);
  CHECK(std::fabs(freq - 0.7) < 3.0 * std::sqrt(0.7 * 0.3 / double(reps)));
}

TEST_CASE("degenerate colorings p = 0 and p = 1") {
  const auto law = TailLaw::power(0.25);
  const auto up = sample_gibbs_increments(law, 1.0, 64, 512, 1);
  const auto dn = sample_gibbs_increments(law, 0.0, 64, 512, 1);
  for (auto x : up.increments) CHECK(x == 1);
  for (auto x : dn.increments) CHECK(x == -1);
  CHECK(up.positions.back() == 64);
  CHECK(dn.positions.back() == -64);
}

TEST_CASE("paths are deterministic per (seed, replica) and differ across them") {
  const auto law = TailLaw::power(0.25);
  const auto a = sample_gibbs_increments(law, 0.5, 128, 1024, 77, 3);
  const auto b = sample_gibbs_increments(law, 0.5, 128, 1024, 77, 3);
  CHECK(a.increments == b.increments);
  CHECK(a.diagnostics.coalescence_risk == b.diagnostics.coalescence_risk);
  const auto c = sample_gibbs_increments(law, 0.5, 128, 1024, 77, 4);
  CHECK(a.increments != c.increments);
}

TEST_CASE("sampler rejects bad arguments and flags the trivial regime") {
  const auto law = TailLaw::power(0.25);
  CHECK_THROWS_AS((void)sample_gibbs_increments(law, 1.5, 16, 128, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)sample_gibbs_increments(law, -0.1, 16, 128, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)sample_gibbs_increments(law, 0.5, 16, 8, 0), std::invalid_argument);
  CHECK_FALSE(sample_gibbs_increments(law, 0.5, 16, 128, 0).diagnostics.heavy_regime_warning);
  CHECK(sample_gibbs_increments(TailLaw::power(0.75), 0.5, 16, 128, 0)
            .diagnostics.heavy_regime_warning);
  CHECK(sample_gibbs_increments(kDelta1, 0.5, 16, 128, 0).diagnostics.heavy_regime_warning);
}

TEST_CASE("mean increment is 2p-1") {
  const auto law = TailLaw::power(0.25);
  const std::uint64_t reps = 4000;
  const std::int64_t n = 64;
  std::vector<double> sn(reps);
  parallel_for(reps, [&](std::uint64_t r) {
    sn[r] = double(sample_gibbs_increments(law, 0.3, n, 8 * n, 0xead, std::uint32_t(r))
                       .positions.back());
  });
  const auto mv = mean_variance(sn);
  CHECK(std::fabs(mv.mean - double(n) * (2.0 * 0.3 - 1.0)) < 3.0 * mv.stderr_mean);
}

TEST_CASE("flipping all colors swaps p and 1-p (two-sample KS)") {
  const auto law = TailLaw::power(0.25);
  const std::uint64_t reps = 10000;
  const std::int64_t n = 64;
  std::vector<double> neg_at_p(reps), pos_at_q(reps);
  parallel_for(reps, [&](std::uint64_t r) {
    neg_at_p[r] = -double(
        sample_gibbs_increments(law, 0.3, n, 8 * n, 0xf11b, std::uint32_t(r)).positions.back());
    pos_at_q[r] = double(
        sample_gibbs_increments(law, 0.7, n, 8 * n, 0x577e, std::uint32_t(r)).positions.back());
  });
  const double d = ks_two_sample(neg_at_p, pos_at_q);
  CHECK(d < 1.9494 * std::sqrt(2.0 / double(reps)));
}

TEST_CASE("sampler variance matches the exact formula within 3 sigma plus budgets") {
  const auto law = TailLaw::power(0.25);
  const auto corr = correlation_sequence(law, 128, 1e-4);
  const auto rho = MeetingProbabilityTable::shared_for(law);
  const std::int64_t n = 128;
  const std::uint64_t reps = 10000;
  std::vector<double> sn(reps), bias(reps);
  parallel_for(reps, [&](std::uint64_t r) {
    const auto path = sample_gibbs_increments(law, 0.5, n, 8 * n, 0x3a3a, std::uint32_t(r),
                                              rho.get());
    sn[r] = double(path.positions.back());
    bias[r] = path.diagnostics.variance_bias_estimate;
  });
  const auto mv = mean_variance(sn);
  const double tol = 3.0 * variance_stderr(sn) +
                     exact_variance_truncation_budget(0.5, corr, n) + mean_variance(bias).mean;
  CHECK(std::fabs(mv.var - exact_variance(0.5, corr, n)) < tol);
  // the burn-in cut can only lose positive correlation
  CHECK(mv.var < exact_variance(0.5, corr, n) + 3.0 * variance_stderr(sn));
}

TEST_CASE("coalescence risk decreases with the burn-in depth") {
  const auto law = TailLaw::power(0.25);
  const auto rho = MeetingProbabilityTable::shared_for(law);
  const std::int64_t n = 16;
  double shallow = 0.0, deep = 0.0;
  const std::uint64_t reps = 400;
  for (std::uint64_t r = 0; r < reps; ++r) {
    const auto a = sample_gibbs_increments(law, 0.5, n, 8 * n, 0xb1a5, std::uint32_t(r), rho.get());
    const auto b =
        sample_gibbs_increments(law, 0.5, n, 512 * n, 0xb1a5, std::uint32_t(r), rho.get());
    CHECK(a.diagnostics.coalescence_risk >= 0.0);
    CHECK(a.diagnostics.coalescence_risk <= 1.0);
    CHECK(a.diagnostics.variance_bias_estimate >= 0.0);
    CHECK(a.diagnostics.exiting_components == a.diagnostics.components_touching);
    shallow += a.diagnostics.coalescence_risk;
    deep += b.diagnostics.coalescence_risk;
  }
  CHECK(deep < shallow);
}

TEST_CASE("adjusted walk: point mass copies one initial coin forever") {
  std::uint64_t plus = 0;
  for (std::uint32_t r = 0; r < 2000; ++r) {
    const auto path = sample_adjusted_walk(kDelta1, 50, 0xad1, r);
    CHECK(path.diagnostics.fresh_coins == 1);
    CHECK(std::abs(path.positions.back()) == 50);
    plus += path.positions.back() > 0;
  }
  CHECK(std::fabs(double(plus) / 2000.0 - 0.5) < 3.0 * std::sqrt(0.25 / 2000.0));
}

TEST_CASE("adjusted walk fresh coins: infinite mean keeps drawing, finite mean stops") {
  const auto heavy = TailLaw::power(0.25);   // infinite mean
  const auto light = TailLaw::power(1.5);    // finite mean
  double prev = 0.0;
  for (std::int64_t n : {1 << 10, 1 << 12}) {
    double heavy_fresh = 0.0, light_fresh = 0.0;
    const std::uint32_t reps = 50;
    for (std::uint32_t r = 0; r < reps; ++r) {
      heavy_fresh += double(sample_adjusted_walk(heavy, n, 0xf00, r).diagnostics.fresh_coins);
      light_fresh += double(sample_adjusted_walk(light, n, 0xf01, r).diagnostics.fresh_coins);
    }
    heavy_fresh /= reps;
    light_fresh /= reps;
    CHECK(heavy_fresh > 1.5 * prev);          // keeps growing (~ n^{3/4})
    CHECK(heavy_fresh / double(n) > 0.1);     // fraction still substantial at desk scale
    CHECK(light_fresh < 25.0);                // ~ zeta(1.5) on average, bounded
    prev = heavy_fresh;
  }
}

TEST_CASE("rescaling: zero at t=0, identically zero for p=1, bounds checked") {
  const auto law = TailLaw::power(0.25);
  const std::int64_t n = 256;
  const auto corr = correlation_sequence(law, 4, 1e-3);
  const double ct = c_tilde(law, 0.5, corr);

  const auto path = sample_gibbs_increments(law, 0.5, n, 8 * n, 5, 0);
  const std::vector<double> grid{0.0, 0.25, 0.5, 1.0};
  const auto rs = rescale(path, law, ct, n, grid);
  CHECK(rs.value[0] == 0.0);
  CHECK(rs.t == grid);

  auto sure = sample_gibbs_increments(law, 1.0, n, 8 * n, 6, 0);
  const auto flat = rescale(sure, law, ct, n, grid);
  for (double v : flat.value) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<double> beyond{1.5};
  CHECK_THROWS_AS((void)rescale(path, law, ct, n, beyond), std::out_of_range);
}

TEST_CASE("positions are the running sums of the increments") {
  for (const auto& path : {sample_gibbs_increments(TailLaw::power(0.25), 0.4, 200, 1600, 11, 2),
                           sample_adjusted_walk(TailLaw::power(0.4), 200, 12, 2)}) {
    REQUIRE(path.positions.size() == path.increments.size() + 1);
    CHECK(path.positions[0] == 0);
    for (std::size_t i = 0; i < path.increments.size(); ++i) {
      CHECK((path.increments[i] == 1 || path.increments[i] == -1));
      CHECK(path.positions[i + 1] - path.positions[i] == path.increments[i]);
    }
    // interpolation hits the lattice exactly and halves in between
    CHECK(path.position_at(3.0) == double(path.positions[3]));
    CHECK(path.position_at(3.5) ==
          0.5 * double(path.positions[3]) + 0.5 * double(path.positions[4]));
  }
}
