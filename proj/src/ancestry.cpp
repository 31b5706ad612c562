#include "fracwalk/ancestry.hpp"

#include <algorithm>
#include <stdexcept>

#include "fracwalk/parallel.hpp"
#include "fracwalk/rng.hpp"
#include "fracwalk/stats.hpp"

namespace fracwalk {

ParentMap sample_parents(const TailLaw& law, std::int64_t lo, std::int64_t hi,
                         std::uint64_t seed, std::uint32_t replica) {
  if (lo > hi) throw std::invalid_argument("sample_parents: lo > hi");
  ParentMap pm;
  pm.lo = lo;
  pm.hi = hi;
  pm.seed = seed;
  pm.replica = replica;
  pm.offset.resize(std::size_t(hi - lo + 1));
  for (std::int64_t z = lo; z <= hi; ++z)
    pm.offset[std::size_t(z - lo)] = law.sample(seed, replica, z);
  return pm;
}

namespace {

// Union-find keyed so that the lowest vertex stays the representative; path
// halving keeps chains short even for the point-mass law.
std::int32_t uf_find(std::vector<std::int32_t>& up, std::int32_t i) {
  while (up[std::size_t(i)] != i) {
    up[std::size_t(i)] = up[std::size_t(up[std::size_t(i)])];
    i = up[std::size_t(i)];
  }
  return i;
}

} // namespace

WindowPartition component_partition(const ParentMap& pm) {
  const std::int64_t w = pm.size();
  if (w > (std::int64_t(1) << 31) - 2) throw std::invalid_argument("window too large");
  std::vector<std::int32_t> up(std::size_t(w), 0);
  for (std::int64_t i = 0; i < w; ++i) up[std::size_t(i)] = std::int32_t(i);

  for (std::int64_t i = 0; i < w; ++i) {
    const std::int64_t k = pm.offset[std::size_t(i)];
    if (k <= i) { // parent stays inside the window
      const std::int32_t a = uf_find(up, std::int32_t(i));
      const std::int32_t b = uf_find(up, std::int32_t(i - k));
      if (a != b) up[std::size_t(std::max(a, b))] = std::min(a, b); // min vertex wins
    }
  }

  WindowPartition part;
  part.lo = pm.lo;
  part.hi = pm.hi;
  part.component.assign(std::size_t(w), -1);
  for (std::int64_t i = 0; i < w; ++i) {
    const std::int32_t r = uf_find(up, std::int32_t(i));
    if (std::int64_t(r) == i) { // roots are component minima, met first
      part.component[std::size_t(i)] = std::int32_t(part.root.size());
      part.root.push_back(pm.lo + i);
      part.exit_point.push_back(pm.lo + i - pm.offset[std::size_t(i)]);
    } else {
      part.component[std::size_t(i)] = part.component[std::size_t(r)];
    }
  }
  return part;
}

std::int32_t WindowPartition::count_on(std::int64_t a, std::int64_t b) const {
  a = std::max(a, lo);
  b = std::min(b, hi);
  if (a > b) return 0;
  std::vector<char> seen(root.size(), 0);
  std::int32_t n = 0;
  for (std::int64_t z = a; z <= b; ++z) {
    const std::int32_t c = component_of(z);
    if (!seen[std::size_t(c)]) {
      seen[std::size_t(c)] = 1;
      ++n;
    }
  }
  return n;
}

MeetingEstimate meeting_probability_mc(const TailLaw& law, std::int64_t k, std::int64_t depth,
                                       std::uint64_t reps, std::uint64_t seed, int threads) {
  if (k < 1) throw std::invalid_argument("meeting_probability_mc: k must be >= 1");
  if (depth < 1) throw std::invalid_argument("meeting_probability_mc: depth must be >= 1");
  if (reps < 1) throw std::invalid_argument("meeting_probability_mc: reps must be >= 1");

  std::vector<std::uint8_t> met(reps, 0);
  parallel_for(
      reps,
      [&](std::uint64_t r) {
        std::int64_t a = 0, b = k;
        for (;;) {
          if (a == b) {
            met[r] = 1;
            return;
          }
          if (a < -depth && b < -depth) return; // undecided: scored as no meeting
          if (a > b)
            a -= law.sample(seed, std::uint32_t(r), a);
          else
            b -= law.sample(seed, std::uint32_t(r), b);
        }
      },
      threads);

  MeetingEstimate est;
  est.reps = reps;
  for (auto m : met) est.meets += m;
  est.estimate = double(est.meets) / double(reps);
  est.ci = binomial_ci_halfwidth(est.estimate, reps, 2.5758293035489004); // 99%
  return est;
}

} // namespace fracwalk
