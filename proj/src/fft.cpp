#include "fracwalk/fft.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fracwalk::fft {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct TwiddleTable {
  std::size_t n = 0;                      // transform size the table was built for
  std::vector<std::complex<double>> w;    // w[k] = exp(-2*pi*i*k/n), k < n/2
};

std::mutex g_twiddle_mutex;
std::shared_ptr<const TwiddleTable> g_twiddles;

// Largest-size table wins; smaller transforms read it with a stride.
std::shared_ptr<const TwiddleTable> twiddles_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_twiddle_mutex);
  if (!g_twiddles || g_twiddles->n < n) {
    auto t = std::make_shared<TwiddleTable>();
    t->n = n;
    t->w.resize(n / 2);
    const double step = kTwoPi / double(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double a = step * double(k);
      t->w[k] = {std::cos(a), -std::sin(a)};
    }
    g_twiddles = std::move(t);
  }
  return g_twiddles;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void transform_impl(std::complex<double>* a, std::size_t n, bool inverse,
                    const TwiddleTable& tab) {
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = tab.n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = tab.w[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + half] * w;
        a[i + k] = u + v;
        a[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / double(n);
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
  }
}

} // namespace

void transform(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
  const auto tab = twiddles_for(n);
  transform_impl(a.data(), n, inverse, *tab);
}

std::vector<std::complex<double>> real_forward(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2 || !is_pow2(n)) throw std::invalid_argument("real fft size must be a power of two >= 2");
  const std::size_t h = n / 2;
  std::vector<std::complex<double>> z(h);
  for (std::size_t j = 0; j < h; ++j) z[j] = {x[2 * j], x[2 * j + 1]};
  const auto tab = twiddles_for(n); // also covers the half-size transform
  transform_impl(z.data(), h, false, *tab);

  const std::size_t stride = tab->n / n;
  std::vector<std::complex<double>> out(h + 1);
  for (std::size_t k = 0; k <= h; ++k) {
    const std::complex<double> zk = z[k % h];
    const std::complex<double> zm = std::conj(z[(h - k) % h]);
    const std::complex<double> e = 0.5 * (zk + zm);
    const std::complex<double> o = std::complex<double>(0.0, -0.5) * (zk - zm);
    const std::complex<double> w = (k == h) ? std::complex<double>(-1.0, 0.0) : tab->w[k * stride];
    out[k] = e + w * o;
  }
  return out;
}

std::vector<double> real_inverse(std::span<const std::complex<double>> spectrum, std::size_t n) {
  if (n < 2 || !is_pow2(n)) throw std::invalid_argument("real fft size must be a power of two >= 2");
  const std::size_t h = n / 2;
  if (spectrum.size() != h + 1) throw std::invalid_argument("spectrum size mismatch");
  const auto tab = twiddles_for(n);
  const std::size_t stride = tab->n / n;

  std::vector<std::complex<double>> z(h);
  for (std::size_t k = 0; k < h; ++k) {
    const std::complex<double> xk = spectrum[k];
    const std::complex<double> xm = std::conj(spectrum[h - k]);
    const std::complex<double> e = 0.5 * (xk + xm);
    const std::complex<double> winv = std::conj(tab->w[k * stride]);
    const std::complex<double> o = 0.5 * (xk - xm) * winv;
    z[k] = e + std::complex<double>(0.0, 1.0) * o;
  }
  transform_impl(z.data(), h, true, *tab);

  std::vector<double> x(n);
  for (std::size_t j = 0; j < h; ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  if (a.size() * b.size() <= 4096) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }
  const std::size_t n = std::max<std::size_t>(2, next_pow2(out_len));
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  auto fa = real_forward(pa);
  const auto fb = real_forward(pb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  auto full = real_inverse(fa, n);
  full.resize(out_len);
  return full;
}

std::vector<double> autocorrelation(std::span<const double> x, std::size_t max_lag) {
  if (x.empty()) return {};
  if (max_lag >= x.size()) throw std::invalid_argument("autocorrelation lag exceeds sequence");
  const std::size_t out_len = max_lag + 1;
  if (x.size() <= 2048) {
    std::vector<double> out(out_len, 0.0);
    for (std::size_t i = 0; i <= max_lag; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j + i < x.size(); ++j) s += x[j] * x[j + i];
      out[i] = s;
    }
    return out;
  }
  const std::size_t n = next_pow2(2 * x.size());
  std::vector<double> pad(n, 0.0);
  std::copy(x.begin(), x.end(), pad.begin());
  auto fx = real_forward(pad);
  for (auto& c : fx) c = {c.real() * c.real() + c.imag() * c.imag(), 0.0};
  auto full = real_inverse(fx, n);
  full.resize(out_len);
  return full;
}

} // namespace fracwalk::fft
