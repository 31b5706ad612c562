#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fracwalk {

struct FbmParams {
  double hurst = 0.5; // must lie in (0,1); this model's regime is alpha + 1/2
};

// E(S_s S_t) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2 for the unit-variance
// fractional Brownian motion.
double fbm_covariance(const FbmParams& params, double s, double t);

// Stationary increment autocovariance
// gamma(k) = ((k+1)^{2H} - 2 k^{2H} + |k-1|^{2H}) / 2, gamma(0) = 1.
double fgn_autocovariance(const FbmParams& params, std::int64_t k);

// Exact fractional Gaussian noise sampler backed by a dense Cholesky factor
// of the n x n covariance (n <= 4096). Factors are cached per (H, n).
class FgnSampler {
 public:
  static std::shared_ptr<const FgnSampler> shared_for(const FbmParams& params, std::int64_t n);

  std::int64_t size() const { return n_; }
  // deterministic per (seed, replica)
  std::vector<double> sample(std::uint64_t seed, std::uint32_t replica) const;

 private:
  FgnSampler() = default;
  std::int64_t n_ = 0;
  std::vector<double> chol_; // lower triangle, row-packed
};

// one-shot convenience
std::vector<double> sample_fgn(const FbmParams& params, std::int64_t n, std::uint64_t seed,
                               std::uint32_t replica = 0);

struct HurstFit {
  double h = 0.0;
  double stderr_ = 0.0;
};

// Least-squares slope of log Var(S_n) against log n, halved. Needs >= 4
// points with positive ordinates.
HurstFit hurst_estimate(std::span<const std::pair<double, double>> variance_curve);

} // namespace fracwalk
