#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "fracwalk/ancestry.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/stats.hpp"
#include "fracwalk/tail_law.hpp"
#include "test_util.hpp"

using namespace fracwalk;

namespace {

const TailLaw kDelta1 = TailLaw::finite_support({1.0});
const TailLaw kTwoPoint = TailLaw::finite_support({0.5, 0.5});

// in-window ancestral line of z, including z itself
std::set<std::int64_t> window_line(const ParentMap& pm, std::int64_t z) {
  std::set<std::int64_t> line;
  while (z >= pm.lo) {
    line.insert(z);
    z = pm.parent(z);
  }
  return line;
}

bool lines_intersect(const ParentMap& pm, std::int64_t a, std::int64_t b) {
  const auto la = window_line(pm, a);
  for (std::int64_t v : window_line(pm, b))
    if (la.count(v)) return true;
  return false;
}

} // namespace

TEST_CASE("point mass: chain of parents, one component, one exit") {
  const auto pm = sample_parents(kDelta1, 0, 64, 123);
  for (std::int64_t z = 0; z <= 64; ++z) {
    CHECK(pm.offset_of(z) == 1);
    CHECK(pm.parent(z) == z - 1);
  }
  const auto part = component_partition(pm);
  CHECK(part.count() == 1);
  CHECK(part.root[0] == 0);
  CHECK(part.exit_point[0] == -1);
  for (std::int64_t z = 0; z <= 64; ++z) CHECK(part.component_of(z) == 0);
}

TEST_CASE("parent maps are reproducible and consistent across windows") {
  const auto law = TailLaw::power(0.25);
  const auto a = sample_parents(law, -100, 200, 42, 5);
  const auto b = sample_parents(law, -100, 200, 42, 5);
  CHECK(a.offset == b.offset);

  const auto c = sample_parents(law, 50, 400, 42, 5);
  for (std::int64_t z = 50; z <= 200; ++z) CHECK(a.offset_of(z) == c.offset_of(z));

  const auto d = sample_parents(law, -100, 200, 42, 6);
  CHECK(a.offset != d.offset);
}

TEST_CASE("sampled offsets over a large window match the tail law (DKW)") {
  const auto law = TailLaw::power(0.25);
  const auto pm = sample_parents(law, 0, 1'000'000, 0xd1d1);
  const double sup = fracwalk::testutil::tail_sup_distance(law, pm.offset);
  CHECK(sup < dkw_epsilon(1'000'001, 0.999));
}

TEST_CASE("every component has exactly one root and one exit point") {
  for (const auto& law : {kTwoPoint, TailLaw::power(0.25), TailLaw::power(0.75)}) {
    const auto pm = sample_parents(law, -500, 500, 7, 1);
    const auto part = component_partition(pm);
    CHECK(part.root.size() == part.exit_point.size());
    CHECK(part.count() >= 1);
    std::set<std::int64_t> roots(part.root.begin(), part.root.end());
    CHECK(roots.size() == part.root.size());
    for (std::int32_t c = 0; c < part.count(); ++c) {
      CHECK(part.exit_point[std::size_t(c)] < part.lo);
      CHECK(part.component_of(part.root[std::size_t(c)]) == c);
      // the root is the component minimum
      for (std::int64_t z = part.lo; z < part.root[std::size_t(c)]; ++z)
        CHECK(part.component_of(z) != c);
    }
  }
}

TEST_CASE("union-find partition equals brute-force line intersection on small windows") {
  const auto law = TailLaw::power(0.3);
  for (std::uint32_t rep = 0; rep < 40; ++rep) {
    const auto pm = sample_parents(law, -10, 9, 0xbf, rep);
    const auto part = component_partition(pm);
    for (std::int64_t u = -10; u <= 9; ++u)
      for (std::int64_t v = u + 1; v <= 9; ++v) {
        const bool same = part.component_of(u) == part.component_of(v);
        CHECK(same == lines_intersect(pm, u, v));
      }
  }
}

TEST_CASE("meeting probability: point mass always meets") {
  const auto est = meeting_probability_mc(kDelta1, 5, 100, 2000, 99);
  CHECK(est.estimate == 1.0);
  CHECK(est.meets == 2000);
}

TEST_CASE("meeting probability is monotone in depth under coupled seeds") {
  const auto law = TailLaw::power(0.25);
  double prev = -1.0;
  for (std::int64_t depth : {100, 10'000, 1'000'000}) {
    const auto est = meeting_probability_mc(law, 3, depth, 20'000, 0xc0ffee);
    CHECK(est.estimate >= prev);
    prev = est.estimate;
  }
  CHECK(prev < 0.95);
}

TEST_CASE("two-point law: lines coalesce almost surely (Sigma q^2 diverges)") {
  const auto est = meeting_probability_mc(kTwoPoint, 1, 10'000, 20'000, 0xabc);
  CHECK(est.estimate > 0.999);
}

TEST_CASE("meeting estimate approaches the exact rho_1 from the correlations") {
  const auto law = TailLaw::power(0.25);
  const auto corr = correlation_sequence(law, 4, 1e-4);
  const double rho1 = corr.rho(1);
  const auto est = meeting_probability_mc(law, 1, 100'000, 20'000, 0x5ca1e);
  CHECK(est.estimate <= rho1 + est.ci);
  CHECK(std::fabs(est.estimate - rho1) < 0.02);
}

TEST_CASE("bad arguments are rejected") {
  CHECK_THROWS_AS((void)sample_parents(kDelta1, 5, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)meeting_probability_mc(kDelta1, 0, 10, 10, 0), std::invalid_argument);
}
