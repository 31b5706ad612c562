#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fracwalk {

// Look-back offsets above this value are clamped; downstream code only ever
// compares offsets against window bounds, which are many orders smaller.
inline constexpr std::int64_t kLookbackSaturation = std::int64_t(1) << 62;

// A heavy-tailed law on {1,2,...} described by its tail function
// T(n) = P(K >= n) = n^(-alpha) * L(n) with L slowly varying and T(1) = 1.
//
// Families:
//   power     T(n) = n^(-alpha)
//   log_power T(n) = n^(-alpha) * ln(n - 1 + e)^beta   (the log factor is 1 at n = 1)
//   finite    explicit pmf on {1..m}; no tail exponent (used for point-mass
//             and two-point reference laws)
//
// The pmf is derived by differencing the tail; nonnegativity is checked at
// construction by a dense monotonicity scan on [1, 1e4] and a log-spaced
// scan up to 1e7.
class TailLaw {
 public:
  enum class Family { power, log_power, finite };

  static TailLaw power(double alpha);
  static TailLaw log_power(double alpha, double beta);
  static TailLaw finite_support(std::vector<double> pmf);
  // "power:alpha=0.25", "logpow:alpha=0.25,beta=-0.5", "finite:0.5,0.5"
  static TailLaw parse(std::string_view spec);

  Family family() const { return family_; }
  bool heavy() const { return family_ != Family::finite; }
  double alpha() const; // throws for finite-support laws
  double beta() const { return beta_; }
  // True when the law declares alpha < 1/2 (the infinitely-many-components
  // regime in which the correlation machinery converges).
  bool subcritical() const { return heavy() && alpha_ < 0.5; }

  double tail(std::int64_t n) const;   // P(K >= n)
  double pmf(std::int64_t n) const;    // P(K = n), computed stably
  double slowly_varying(double x) const; // L(x) = tail(x) * x^alpha, heavy laws only

  // Inverse-transform sample keyed by (seed, replica, vertex); saturates at
  // kLookbackSaturation. P(K >= n) = tail(n) exactly for n <= saturation.
  std::int64_t sample(std::uint64_t seed, std::uint32_t replica, std::int64_t vertex) const;
  // The same transform applied to an explicit uniform in (0,1).
  std::int64_t quantile(double u) const;

  std::int64_t validated_up_to() const { return validated_up_to_; }
  std::int64_t support_max() const; // finite laws only
  std::string spec_string() const;

 private:
  TailLaw() = default;
  void validate();

  Family family_ = Family::power;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<double> finite_tail_; // finite: tail_[i] = P(K >= i+1), tail_[0] = 1
  std::int64_t validated_up_to_ = 0;
};

} // namespace fracwalk
