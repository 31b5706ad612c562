#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracwalk::fft {

// In-place iterative radix-2 transform; size must be a power of two.
void transform(std::vector<std::complex<double>>& a, bool inverse);

// Forward transform of a real sequence (length a power of two, >= 2).
// Returns the n/2+1 nonnegative-frequency bins.
std::vector<std::complex<double>> real_forward(std::span<const double> x);

// Inverse of real_forward: n/2+1 bins -> n real samples.
std::vector<double> real_inverse(std::span<const std::complex<double>> spectrum, std::size_t n);

// Exact linear convolution, length a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

// c[i] = sum_j x[j] * x[j+i] for i = 0..max_lag.
std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag);

} // namespace fracwalk::fft
