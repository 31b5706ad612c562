#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fracwalk/rng.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/tail_law.hpp"

using namespace fracwalk;

#include "test_util.hpp"

using fracwalk::testutil::tail_sup_distance;

TEST_CASE("power family tail and pmf values") {
  const auto law = TailLaw::power(0.25);
  CHECK(law.tail(1) == 1.0);
  CHECK(law.tail(2) == doctest::Approx(0.8408964152537145).epsilon(1e-14));
  CHECK(law.pmf(1) == doctest::Approx(0.1591035847462855).epsilon(1e-13));
  CHECK(TailLaw::power(0.5).tail(4) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.tail(16) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(law.validated_up_to() == 10'000'000);
}

TEST_CASE("log_power with a positive exponent can break monotonicity at n=1") {
  // T(2) = 2^{-1/4} ln(1+e) ~ 1.104 > 1 = T(1)
  CHECK_THROWS_AS((void)TailLaw::log_power(0.25, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)TailLaw::power(0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)TailLaw::power(-1.0), std::invalid_argument);
  // negative beta only fattens the decay near 1; this one is a valid member
  const auto ok = TailLaw::log_power(0.25, -0.5);
  CHECK(ok.tail(1) == 1.0);
  CHECK(ok.pmf(1) > 0.0);
}

TEST_CASE("pmf telescopes against the tail") {
  for (const auto& law :
       {TailLaw::power(0.25), TailLaw::log_power(0.4, -1.0), TailLaw::finite_support({0.5, 0.5})}) {
    double acc = 0.0;
    for (std::int64_t n = 1; n <= 900; ++n) acc += law.pmf(n);
    CHECK(acc + law.tail(901) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("quantile uses the strict tail(n) > u convention") {
  const auto law = TailLaw::power(0.25);
  CHECK(law.quantile(0.9) == 1);          // T(2) ~ 0.841 < 0.9
  CHECK(law.quantile(0.5) == 15);         // T(16) = 0.5 exactly, not > u
  CHECK(law.quantile(0.5 - 1e-9) == 16);  // now T(16) > u
  CHECK(law.quantile(0.8408964152537145) == 1);
  // far tail saturates
  CHECK(law.quantile(1e-30) == kLookbackSaturation);

  const auto two_point = TailLaw::finite_support({0.5, 0.5});
  CHECK(two_point.quantile(0.75) == 1);
  CHECK(two_point.quantile(0.25) == 2);
  CHECK(two_point.quantile(0.499999) == 2);
}

TEST_CASE("sampled look-backs match the tail inside a DKW band") {
  const std::uint64_t seed = 0x5eed0001;
  const int n = 100000;
  const double band = dkw_epsilon(n, 0.999);

  for (const auto& law : {TailLaw::power(0.25), TailLaw::log_power(0.3, -0.5),
                          TailLaw::finite_support({0.25, 0.5, 0.25})}) {
    std::vector<std::int64_t> ks(n);
    for (int i = 0; i < n; ++i) ks[size_t(i)] = law.sample(seed, 0, i);
    CHECK(tail_sup_distance(law, std::move(ks)) < band);
  }
}

TEST_CASE("empirical frequency of K >= 100 matches the closed form") {
  const auto law = TailLaw::power(0.25);
  const int n = 1000000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (law.sample(0xabcdef, 1, i) >= 100) ++hits;
  const double want = std::pow(100.0, -0.25);
  const double sigma = std::sqrt(want * (1 - want) / n);
  CHECK(std::fabs(double(hits) / n - want) < 3 * sigma);
}

TEST_CASE("tail(2n)/tail(n) approaches 2^-alpha") {
  const auto pw = TailLaw::power(0.25);
  for (std::int64_t n : {10, 1000, 1000000})
    CHECK(pw.tail(2 * n) / pw.tail(n) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-13));

  const auto lp = TailLaw::log_power(0.25, -0.5);
  const double target = std::pow(2.0, -0.25);
  double prev = 1.0;
  for (std::int64_t n : {10, 1000, 100000, 10000000}) {
    const double r = lp.tail(2 * n) / lp.tail(n);
    CHECK(std::fabs(r - target) < prev);
    prev = std::fabs(r - target);
  }
  CHECK(prev < 0.02);
}

TEST_CASE("spec strings parse and round-trip") {
  CHECK(TailLaw::parse("power:alpha=0.25").spec_string() == "power:alpha=0.25");
  CHECK(TailLaw::parse("logpow:alpha=0.25,beta=-0.5").spec_string() ==
        "logpow:alpha=0.25,beta=-0.5");
  const auto fin = TailLaw::parse("finite:1,1");
  CHECK(fin.pmf(1) == doctest::Approx(0.5));
  CHECK(fin.pmf(2) == doctest::Approx(0.5));
  CHECK(fin.support_max() == 2);
  CHECK_THROWS_AS((void)TailLaw::parse("power:alpha=x"), std::invalid_argument);
  CHECK_THROWS_AS((void)TailLaw::parse("zeta:s=2"), std::invalid_argument);
  CHECK_THROWS_AS((void)TailLaw::parse("power"), std::invalid_argument);
  // gcd of the support must be 1
  CHECK_THROWS_AS((void)TailLaw::parse("finite:0,1"), std::invalid_argument);
  CHECK_NOTHROW((void)TailLaw::parse("finite:1"));
}

TEST_CASE("overlapping windows sampled with the same seed agree on the overlap") {
  const auto law = TailLaw::power(0.25);
  for (std::int64_t v = -50; v <= 50; ++v) {
    CHECK(law.sample(99, 3, v) == law.sample(99, 3, v));
  }
}
