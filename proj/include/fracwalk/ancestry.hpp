#pragma once

#include <cstdint>
#include <vector>

#include "fracwalk/tail_law.hpp"

namespace fracwalk {

// One realization of the spanning graph on a window of the integers: vertex z
// points to z - offset[z - lo]. Offsets are keyed by (seed, replica, vertex),
// so overlapping windows sampled with the same key agree on the overlap, and
// lazy probes (meeting_probability_mc) see the same graph.
struct ParentMap {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::int64_t> offset;
  std::uint64_t seed = 0;
  std::uint32_t replica = 0;

  std::int64_t size() const { return hi - lo + 1; }
  std::int64_t offset_of(std::int64_t z) const { return offset[std::size_t(z - lo)]; }
  std::int64_t parent(std::int64_t z) const { return z - offset_of(z); }
};

ParentMap sample_parents(const TailLaw& law, std::int64_t lo, std::int64_t hi,
                         std::uint64_t seed, std::uint32_t replica = 0);

// Window components: two vertices share an id iff their ancestral lines meet
// before leaving the window. Components are numbered by increasing root, and
// the root is always the minimal vertex of its component (edges point down).
// Every root's parent lies strictly below lo; that parent is the component's
// exit point.
struct WindowPartition {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<std::int32_t> component; // per window vertex
  std::vector<std::int64_t> root;      // per component id
  std::vector<std::int64_t> exit_point;

  std::int32_t component_of(std::int64_t z) const { return component[std::size_t(z - lo)]; }
  std::int32_t count() const { return std::int32_t(root.size()); }
  // number of distinct components met on [a, b]
  std::int32_t count_on(std::int64_t a, std::int64_t b) const;
};

WindowPartition component_partition(const ParentMap& pm);

struct MeetingEstimate {
  double estimate = 0.0; // lower bound on rho_k: undecided runs count as no meeting
  double ci = 0.0;       // 99% binomial half-width
  std::uint64_t meets = 0;
  std::uint64_t reps = 0;
};

// Fraction of replicas in which the ancestral lines of 0 and k, on a shared
// realization of the graph, land on a common vertex before both pass below
// -depth. Estimates are coupled across depths: the same (seed, replica)
// explores the same graph, so the estimate is non-decreasing in depth.
MeetingEstimate meeting_probability_mc(const TailLaw& law, std::int64_t k, std::int64_t depth,
                                       std::uint64_t reps, std::uint64_t seed, int threads = 0);

} // namespace fracwalk
