#include "fracwalk/gibbs_walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "fracwalk/ancestry.hpp"
#include "fracwalk/renewal.hpp"
#include "fracwalk/rng.hpp"

namespace fracwalk {

namespace {

std::mutex g_rho_mutex;
std::map<std::string, std::shared_ptr<const MeetingProbabilityTable>>& rho_memo() {
  static std::map<std::string, std::shared_ptr<const MeetingProbabilityTable>> memo;
  return memo;
}

} // namespace

std::shared_ptr<const MeetingProbabilityTable> MeetingProbabilityTable::shared_for(
    const TailLaw& law) {
  const std::string key = law.spec_string();
  {
    std::lock_guard<std::mutex> lock(g_rho_mutex);
    auto it = rho_memo().find(key);
    if (it != rho_memo().end()) return it->second;
  }
  auto table = std::shared_ptr<MeetingProbabilityTable>(new MeetingProbabilityTable());
  if (!law.subcritical()) {
    table->always_one_ = true;
  } else {
    table->alpha_ = law.alpha();
    table->log_power_ = law.family() == TailLaw::Family::log_power;
    table->beta_ = law.beta();
    const std::int64_t max_lag = 2048;
    const auto corr = correlation_sequence(law, max_lag, 1e-4);
    table->table_.resize(std::size_t(max_lag) + 1);
    for (std::int64_t i = 0; i <= max_lag; ++i) table->table_[std::size_t(i)] = corr.rho(i);
  }
  std::lock_guard<std::mutex> lock(g_rho_mutex);
  auto [it, inserted] = rho_memo().emplace(key, table);
  return it->second;
}

double MeetingProbabilityTable::rho(std::int64_t distance) const {
  if (always_one_) return 1.0;
  if (distance < 0) distance = -distance;
  const auto m = std::int64_t(table_.size()) - 1;
  if (distance <= m) return table_[std::size_t(distance)];
  // rho_d ~ const d^{2a-1} L(d)^{-2}; anchor the extension at the table edge
  double r = table_[std::size_t(m)] *
             std::pow(double(distance) / double(m), 2.0 * alpha_ - 1.0);
  if (log_power_) {
    const double le = std::log(double(m) - 1.0 + 2.718281828459045);
    const double ld = std::log(double(distance) - 1.0 + 2.718281828459045);
    r *= std::pow(le / ld, -2.0 * beta_);
  }
  return std::min(r, 1.0);
}

WalkPath sample_gibbs_increments(const TailLaw& law, double p, std::int64_t n,
                                 std::int64_t burn_in, std::uint64_t seed, std::uint32_t replica,
                                 const MeetingProbabilityTable* rho) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_gibbs_increments: p must lie in [0,1]");
  if (n < 1) throw std::invalid_argument("sample_gibbs_increments: n must be >= 1");
  if (burn_in == 0) burn_in = 8 * n;
  if (burn_in < n) throw std::invalid_argument("sample_gibbs_increments: burn-in below n");

  const auto pm = sample_parents(law, -burn_in, n, seed, replica);
  const auto part = component_partition(pm);

  WalkPath path{law, p, {}, {}, {}};
  path.increments.resize(std::size_t(n));
  path.positions.assign(std::size_t(n) + 1, 0);

  std::vector<std::int8_t> color(part.root.size(), 0); // 0 = not colored yet
  std::vector<char> touched(part.root.size(), 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int32_t c = part.component_of(i);
    if (!color[std::size_t(c)]) {
      const double u = keyed_uniform(seed, replica, part.root[std::size_t(c)], kDrawColor);
      color[std::size_t(c)] = (u < p) ? std::int8_t(1) : std::int8_t(-1);
    }
    touched[std::size_t(c)] = 1;
    path.increments[std::size_t(i - 1)] = color[std::size_t(c)];
    path.positions[std::size_t(i)] = path.positions[std::size_t(i - 1)] + color[std::size_t(c)];
  }

  auto& d = path.diagnostics;
  d.burn_in = burn_in;
  d.heavy_regime_warning = !law.subcritical();
  std::vector<std::int64_t> exits;
  std::vector<double> footprint; // component size within {1..n}
  for (std::int32_t c = 0; c < part.count(); ++c)
    if (touched[std::size_t(c)]) {
      exits.push_back(part.exit_point[std::size_t(c)]);
      footprint.push_back(0.0);
    }
  if (!footprint.empty()) {
    std::vector<std::int32_t> dense(part.root.size(), -1);
    std::int32_t next = 0;
    for (std::int32_t c = 0; c < part.count(); ++c)
      if (touched[std::size_t(c)]) dense[std::size_t(c)] = next++;
    for (std::int64_t i = 1; i <= n; ++i)
      footprint[std::size_t(dense[std::size_t(part.component_of(i))])] += 1.0;
  }
  d.components_touching = std::int32_t(exits.size());
  d.exiting_components = d.components_touching;
  std::shared_ptr<const MeetingProbabilityTable> owned;
  if (rho == nullptr) {
    owned = MeetingProbabilityTable::shared_for(law);
    rho = owned.get();
  }
  double risk = 0.0, bias = 0.0;
  for (std::size_t i = 0; i < exits.size(); ++i)
    for (std::size_t j = i + 1; j < exits.size(); ++j) {
      const double r = rho->rho(exits[j] - exits[i]);
      risk += r;
      bias += r * footprint[i] * footprint[j];
    }
  d.coalescence_risk = std::min(risk, 1.0);
  const double f = 4.0 * p * (1.0 - p);
  d.variance_bias_estimate = std::min(2.0 * f * bias, f * double(n) * double(n));
  return path;
}

WalkPath sample_adjusted_walk(const TailLaw& law, std::int64_t n, std::uint64_t seed,
                              std::uint32_t replica) {
  if (n < 1) throw std::invalid_argument("sample_adjusted_walk: n must be >= 1");
  WalkPath path{law, 0.5, {}, {}, {}};
  path.increments.resize(std::size_t(n));
  path.positions.assign(std::size_t(n) + 1, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    const std::int64_t k = law.sample(seed, replica, i);
    std::int8_t x;
    if (i - k >= 1) {
      x = path.increments[std::size_t(i - k - 1)];
    } else {
      x = (keyed_uniform(seed, replica, i, kDrawFreshCoin) < 0.5) ? std::int8_t(1)
                                                                  : std::int8_t(-1);
      ++path.diagnostics.fresh_coins;
    }
    path.increments[std::size_t(i - 1)] = x;
    path.positions[std::size_t(i)] = path.positions[std::size_t(i - 1)] + x;
  }
  return path;
}

double WalkPath::position_at(double x) const {
  if (x < 0.0 || x > double(length()))
    throw std::out_of_range("position_at: point beyond path length");
  const auto i = std::int64_t(x);
  if (i >= length()) return double(positions.back());
  const double frac = x - double(i);
  return double(positions[std::size_t(i)]) +
         frac * double(positions[std::size_t(i) + 1] - positions[std::size_t(i)]);
}

RescaledPath rescale(const WalkPath& path, const TailLaw& law, double c_tilde_value,
                     std::int64_t n, std::span<const double> grid) {
  if (n < 1) throw std::invalid_argument("rescale: n must be >= 1");
  const double scale =
      c_tilde_value * std::pow(double(n), -0.5 - law.alpha()) * law.slowly_varying(double(n));
  const double drift = double(n) * (2.0 * path.p - 1.0);
  RescaledPath out;
  out.t.assign(grid.begin(), grid.end());
  out.value.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = grid[j];
    if (t < 0.0 || double(n) * t > double(path.length()))
      throw std::out_of_range("rescale: grid point beyond path length");
    out.value[j] = scale * (path.position_at(double(n) * t) - drift * t);
  }
  return out;
}

} // namespace fracwalk
