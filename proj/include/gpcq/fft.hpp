#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "gpcq/grid.hpp"
#include "gpcq/parallel.hpp"

namespace gpcq {

enum class FftDirection { Forward, Inverse };

namespace detail {

// Bit-reversal and twiddle tables for one power-of-two line length.
struct FftTables {
  int n;
  std::vector<int> bitrev;
  std::vector<Complex> twiddle;  // e^{-2 pi i k / n}, k < n/2

  explicit FftTables(int n_) : n(n_), bitrev(n_), twiddle(n_ / 2) {
    int logn = 0;
    while ((1 << logn) < n) ++logn;
    for (int i = 0; i < n; ++i) {
      int r = 0;
      for (int b = 0; b < logn; ++b)
        if (i & (1 << b)) r |= 1 << (logn - 1 - b);
      bitrev[i] = r;
    }
    for (int k = 0; k < n / 2; ++k) {
      const double ang = -2.0 * kPi * k / n;
      twiddle[k] = {std::cos(ang), std::sin(ang)};
    }
  }
};

// In-place radix-2 decimation-in-time transform of one contiguous line.
// Forward kernel is e^{-i 2 pi j k / n}; no scaling on either direction.
inline void fft_line(Complex* a, const FftTables& t, bool inverse) {
  const int n = t.n;
  for (int i = 0; i < n; ++i) {
    const int j = t.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const int half = len / 2;
    const int step = n / len;
    for (int start = 0; start < n; start += len) {
      for (int k = 0; k < half; ++k) {
        Complex w = t.twiddle[static_cast<std::size_t>(k) * step];
        if (inverse) w = std::conj(w);
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

}  // namespace detail

// n-dimensional in-place DFT over the grid, one axis at a time. Forward is
// unscaled; Inverse applies the 1/N^dim factor, so the pair is an identity.
// Lines transform independently, so parallel execution is bit-exact.
inline void fft_transform(const Grid& g, std::vector<Complex>& data, FftDirection dir) {
  const int n = g.points_per_axis;
  const bool inverse = dir == FftDirection::Inverse;
  const detail::FftTables tables(n);
  const std::size_t total = data.size();
  for (int axis = 0; axis < g.dim; ++axis) {
    std::size_t stride = 1;
    for (int a = g.dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
    const std::size_t lines = total / static_cast<std::size_t>(n);
    detail::run_workers(lines, [&](std::size_t line) {
      thread_local std::vector<Complex> buf;
      buf.resize(static_cast<std::size_t>(n));
      const std::size_t inner = line % stride;
      const std::size_t outer = line / stride;
      const std::size_t base = outer * stride * static_cast<std::size_t>(n) + inner;
      for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = data[base + i * stride];
      detail::fft_line(buf.data(), tables, inverse);
      for (int i = 0; i < n; ++i) data[base + i * stride] = buf[static_cast<std::size_t>(i)];
    });
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(total);
    parallel_for(total, [&](std::size_t i) { data[i] *= scale; });
  }
}

// Spectral coefficients of f (unscaled forward DFT).
inline std::vector<Complex> forward_fft(const ComplexField& f) {
  std::vector<Complex> spec = f.values;
  fft_transform(f.grid, spec, FftDirection::Forward);
  return spec;
}

// Field from spectral coefficients (applies the 1/N^dim normalization).
inline ComplexField inverse_fft(const Grid& g, std::vector<Complex> spec) {
  fft_transform(g, spec, FftDirection::Inverse);
  return ComplexField(g, std::move(spec));
}

}  // namespace gpcq
