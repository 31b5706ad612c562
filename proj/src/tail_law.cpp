#include "fracwalk/tail_law.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fracwalk/rng.hpp"

namespace fracwalk {

namespace {

constexpr double kE = 2.718281828459045235360287471353;

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw std::invalid_argument("law spec: bad number '" + std::string(s) + "'");
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

} // namespace

TailLaw TailLaw::power(double alpha) {
  TailLaw law;
  law.family_ = Family::power;
  law.alpha_ = alpha;
  law.validate();
  return law;
}

TailLaw TailLaw::log_power(double alpha, double beta) {
  TailLaw law;
  law.family_ = Family::log_power;
  law.alpha_ = alpha;
  law.beta_ = beta;
  law.validate();
  return law;
}

TailLaw TailLaw::finite_support(std::vector<double> pmf) {
  TailLaw law;
  law.family_ = Family::finite;
  if (pmf.empty()) throw std::invalid_argument("finite law: empty pmf");
  for (double p : pmf)
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("finite law: negative or non-finite mass");
  // Entries are treated as weights and normalized via suffix sums.
  const std::size_t m = pmf.size();
  law.finite_tail_.assign(m, 0.0);
  double acc = 0.0;
  for (std::size_t i = m; i-- > 0;) {
    acc += pmf[i];
    law.finite_tail_[i] = acc;
  }
  if (acc <= 0.0) throw std::invalid_argument("finite law: zero total mass");
  for (double& t : law.finite_tail_) t /= acc;
  std::int64_t g = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (pmf[i] > 0.0) g = std::gcd(g, std::int64_t(i + 1));
  if (g != 1) throw std::invalid_argument("finite law: support must have gcd 1");
  law.validated_up_to_ = std::int64_t(m);
  law.validate();
  return law;
}

TailLaw TailLaw::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("law spec: missing ':'");
  const std::string_view name = spec.substr(0, colon);
  std::string_view rest = spec.substr(colon + 1);

  auto next_field = [&rest]() {
    const auto comma = rest.find(',');
    std::string_view f = rest.substr(0, comma);
    rest = (comma == std::string_view::npos) ? std::string_view{} : rest.substr(comma + 1);
    return f;
  };
  auto key_value = [](std::string_view f, std::string_view key) {
    if (f.substr(0, key.size()) != key || f.size() <= key.size() || f[key.size()] != '=')
      throw std::invalid_argument("law spec: expected '" + std::string(key) + "=...'");
    return parse_number(f.substr(key.size() + 1));
  };

  if (name == "power") {
    return power(key_value(next_field(), "alpha"));
  }
  if (name == "logpow") {
    const double a = key_value(next_field(), "alpha");
    const double b = key_value(next_field(), "beta");
    return log_power(a, b);
  }
  if (name == "finite") {
    std::vector<double> pmf;
    while (!rest.empty() || pmf.empty()) pmf.push_back(parse_number(next_field()));
    return finite_support(std::move(pmf));
  }
  throw std::invalid_argument("law spec: unknown family '" + std::string(name) + "'");
}

double TailLaw::alpha() const {
  if (!heavy()) throw std::logic_error("finite-support law has no tail exponent");
  return alpha_;
}

std::int64_t TailLaw::support_max() const {
  if (heavy()) throw std::logic_error("parametric law has unbounded support");
  return std::int64_t(finite_tail_.size());
}

double TailLaw::tail(std::int64_t n) const {
  if (n < 1) return 1.0;
  switch (family_) {
    case Family::power:
      return std::pow(double(n), -alpha_);
    case Family::log_power:
      return std::pow(double(n), -alpha_) * std::pow(std::log(double(n) - 1.0 + kE), beta_);
    case Family::finite:
      return n <= std::int64_t(finite_tail_.size()) ? finite_tail_[std::size_t(n - 1)] : 0.0;
  }
  return 0.0;
}

double TailLaw::pmf(std::int64_t n) const {
  if (n < 1) return 0.0;
  switch (family_) {
    case Family::power: {
      // T(n) - T(n+1) = T(n) * (1 - (1+1/n)^(-alpha)), evaluated without cancellation
      const double x = -alpha_ * std::log1p(1.0 / double(n));
      return tail(n) * -std::expm1(x);
    }
    case Family::log_power: {
      const double lg = std::log(double(n) - 1.0 + kE);
      const double dl = std::log1p(1.0 / (double(n) - 1.0 + kE));
      const double x = -alpha_ * std::log1p(1.0 / double(n)) + beta_ * std::log1p(dl / lg);
      return tail(n) * -std::expm1(x);
    }
    case Family::finite: {
      const auto m = std::int64_t(finite_tail_.size());
      if (n > m) return 0.0;
      return finite_tail_[std::size_t(n - 1)] - (n == m ? 0.0 : finite_tail_[std::size_t(n)]);
    }
  }
  return 0.0;
}

double TailLaw::slowly_varying(double x) const {
  if (!heavy()) throw std::logic_error("finite-support law has no slowly varying part");
  if (family_ == Family::power) return 1.0;
  return std::pow(std::log(x - 1.0 + kE), beta_);
}

void TailLaw::validate() {
  if (family_ == Family::finite) return; // constructed directly from suffix sums
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw std::invalid_argument("tail law: alpha must be > 0");
  if (!std::isfinite(beta_)) throw std::invalid_argument("tail law: beta must be finite");

  // pmf(n) >= 0 iff the tail is non-increasing; dense prefix then log grid.
  constexpr std::int64_t kDense = 10'000;
  constexpr std::int64_t kCap = 10'000'000;
  double prev = tail(1);
  for (std::int64_t n = 2; n <= kDense + 1; ++n) {
    const double t = tail(n);
    if (t > prev)
      throw std::invalid_argument("tail law: pmf(" + std::to_string(n - 1) + ") < 0 for " + spec_string());
    prev = t;
  }
  std::int64_t n = kDense;
  while (n < kCap) {
    const std::int64_t next = std::max(n + 1, std::int64_t(double(n) * 1.02));
    if (tail(next) > tail(n))
      throw std::invalid_argument("tail law: tail increases near n=" + std::to_string(next));
    n = next;
  }
  validated_up_to_ = kCap;
}

std::int64_t TailLaw::quantile(double u) const {
  if (family_ == Family::finite) {
    // largest n with tail(n) > u; tail(1) = 1 > u always
    std::int64_t k = 1;
    const auto m = std::int64_t(finite_tail_.size());
    while (k < m && finite_tail_[std::size_t(k)] > u) ++k;
    return k;
  }
  if (u < tail(kLookbackSaturation)) return kLookbackSaturation;

  // Analytic seed ignoring the slowly varying factor, then one correction
  // pass for log_power, then a guarded bracket + binary search.
  double x = std::exp(-std::log(u) / alpha_);
  if (family_ == Family::log_power && x >= 1.0)
    x = std::exp((std::log(slowly_varying(x)) - std::log(u)) / alpha_);
  std::int64_t n0 = (x >= double(kLookbackSaturation))
                        ? kLookbackSaturation - 1
                        : std::max<std::int64_t>(1, std::int64_t(x));

  std::int64_t lo, hi;
  if (tail(n0) > u) {
    lo = n0;
    hi = n0;
    while (tail(hi + 1) > u) {
      lo = hi + 1;
      hi = std::min(kLookbackSaturation - 1, hi * 2);
      if (lo > hi) return kLookbackSaturation - 1;
    }
  } else {
    hi = n0 - 1;
    lo = std::max<std::int64_t>(1, n0 / 2);
    while (tail(lo) <= u && lo > 1) {
      hi = lo - 1;
      lo = std::max<std::int64_t>(1, lo / 2);
    }
  }
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (tail(mid) > u)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

std::int64_t TailLaw::sample(std::uint64_t seed, std::uint32_t replica, std::int64_t vertex) const {
  return quantile(keyed_uniform(seed, replica, vertex, kDrawLookback));
}

std::string TailLaw::spec_string() const {
  switch (family_) {
    case Family::power:
      return "power:alpha=" + format_number(alpha_);
    case Family::log_power:
      return "logpow:alpha=" + format_number(alpha_) + ",beta=" + format_number(beta_);
    case Family::finite: {
      std::string s = "finite:";
      for (std::size_t i = 0; i < finite_tail_.size(); ++i) {
        if (i) s += ',';
        s += format_number(pmf(std::int64_t(i + 1)));
      }
      return s;
    }
  }
  return {};
}

} // namespace fracwalk
