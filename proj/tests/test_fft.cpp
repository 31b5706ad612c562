#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fracwalk/fft.hpp"

using namespace fracwalk;

namespace {

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = -2.0 * M_PI * double(k * j % n) / double(n);
      s += x[j] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = s;
  }
  return out;
}

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

} // namespace

TEST_CASE("complex transform matches the naive DFT") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> x(64);
  for (auto& c : x) c = {u(rng), u(rng)};
  auto want = naive_dft(x);
  auto got = x;
  fft::transform(got, false);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(got[k] - want[k]) < 1e-11);

  fft::transform(got, true);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(got[k] - x[k]) < 1e-12);
}

TEST_CASE("real transform agrees with the complex one and inverts") {
  const auto x = random_vec(256, 2);
  std::vector<std::complex<double>> cx(x.begin(), x.end());
  fft::transform(cx, false);
  const auto rx = fft::real_forward(x);
  REQUIRE(rx.size() == 129);
  for (std::size_t k = 0; k < rx.size(); ++k) CHECK(std::abs(rx[k] - cx[k]) < 1e-11);

  const auto back = fft::real_inverse(rx, 256);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("convolution matches the direct sum on the FFT path") {
  const auto a = random_vec(150, 3);
  const auto b = random_vec(333, 4);
  const auto got = fft::convolve(a, b);
  REQUIRE(got.size() == a.size() + b.size() - 1);
  for (std::size_t t : {std::size_t(0), std::size_t(7), std::size_t(149), std::size_t(300),
                        a.size() + b.size() - 2}) {
    double want = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (t >= i && t - i < b.size()) want += a[i] * b[t - i];
    CHECK(got[t] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("autocorrelation matches the direct sum on the FFT path") {
  const auto x = random_vec(5000, 5);
  const auto got = fft::autocorrelation(x, 64);
  REQUIRE(got.size() == 65);
  for (std::size_t lag : {std::size_t(0), std::size_t(1), std::size_t(17), std::size_t(64)}) {
    double want = 0.0;
    for (std::size_t j = 0; j + lag < x.size(); ++j) want += x[j] * x[j + lag];
    CHECK(got[lag] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("autocorrelation of a constant sequence is linear in the lag") {
  // all-ones input: c[i]/c[0] = (J - i + 1)/(J + 1)
  const std::size_t n = 4097; // J = 4096
  std::vector<double> ones(n, 1.0);
  const auto c = fft::autocorrelation(ones, 32);
  for (std::size_t i = 0; i <= 32; ++i)
    CHECK(c[i] / c[0] == doctest::Approx(double(n - i) / double(n)).epsilon(1e-12));
}
