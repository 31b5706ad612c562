#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fracwalk/tail_law.hpp"

namespace fracwalk::testutil {

// sup_n |empirical P(K >= n) - tail(n)| over all integers, evaluated at the
// jump points of the empirical tail (both curves are monotone in between).
inline double tail_sup_distance(const TailLaw& law, std::vector<std::int64_t> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = double(samples.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < samples.size();) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const std::int64_t v = samples[i];
    sup = std::max(sup, std::fabs((n - double(i)) / n - law.tail(v)));
    if (v < kLookbackSaturation)
      sup = std::max(sup, std::fabs((n - double(j)) / n - law.tail(v + 1)));
    i = j;
  }
  return sup;
}

} // namespace fracwalk::testutil
