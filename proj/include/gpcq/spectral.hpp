#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "gpcq/errors.hpp"
#include "gpcq/fft.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/parallel.hpp"

namespace gpcq {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

namespace detail {

// |z|^r via squared magnitude; even integer exponents avoid the sqrt.
inline double abs_pow(double sq_mag, double r) {
  if (r == 2.0) return sq_mag;
  if (r == 4.0) return sq_mag * sq_mag;
  if (r == 6.0) return sq_mag * sq_mag * sq_mag;
  return std::pow(sq_mag, 0.5 * r);
}

// Applies fn(flat, ksq, kvec) over all modes; kvec holds dim wavenumbers.
template <class Fn>
void apply_modes(const Grid& g, Fn&& fn) {
  const int n = g.points_per_axis;
  std::vector<double> k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = g.wavenumber(i);
  parallel_for(g.size(), [&](std::size_t flat) {
    int idx[4];
    decode_index(g, flat, idx);
    double kvec[4] = {0, 0, 0, 0};
    double ksq = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      kvec[a] = k[static_cast<std::size_t>(idx[a])];
      ksq += kvec[a] * kvec[a];
    }
    fn(flat, ksq, kvec);
  });
}

}  // namespace detail

// Grid L^r quadrature norm: (h^n sum |f|^r)^{1/r}; r = infinity is the grid max.
inline double lp_norm(const ComplexField& f, double r) {
  if (!(r >= 1.0)) throw InvalidExponentError("Lebesgue exponent must satisfy r >= 1");
  if (std::isinf(r))
    return std::sqrt(deterministic_max(f.size(), [&](std::size_t i) { return std::norm(f[i]); }));
  const double s =
      deterministic_sum(f.size(), [&](std::size_t i) { return detail::abs_pow(std::norm(f[i]), r); });
  return std::pow(f.grid.cell_volume() * s, 1.0 / r);
}

// Same quadrature for a real-valued sample array on the grid.
inline double lp_norm(const Grid& g, std::span<const double> samples, double r) {
  if (!(r >= 1.0)) throw InvalidExponentError("Lebesgue exponent must satisfy r >= 1");
  if (std::isinf(r))
    return deterministic_max(samples.size(), [&](std::size_t i) { return std::abs(samples[i]); });
  const double s = deterministic_sum(
      samples.size(), [&](std::size_t i) { return detail::abs_pow(samples[i] * samples[i], r); });
  return std::pow(g.cell_volume() * s, 1.0 / r);
}

// Components of the spectral gradient: inverse transform of (i k_j) fhat.
inline std::vector<ComplexField> spectral_gradient(const ComplexField& f) {
  const std::vector<Complex> spec = forward_fft(f);
  std::vector<ComplexField> out;
  out.reserve(static_cast<std::size_t>(f.grid.dim));
  for (int axis = 0; axis < f.grid.dim; ++axis) {
    std::vector<Complex> comp = spec;
    detail::apply_modes(f.grid, [&](std::size_t i, double, const double* kvec) {
      comp[i] *= Complex{0.0, kvec[axis]};
    });
    out.push_back(inverse_fft(f.grid, std::move(comp)));
  }
  return out;
}

// Pointwise Euclidean magnitude of the gradient, |grad f|.
inline std::vector<double> gradient_magnitude(const ComplexField& f) {
  const std::vector<ComplexField> g = spectral_gradient(f);
  std::vector<double> mag(f.size());
  parallel_for(f.size(), [&](std::size_t i) {
    double s = 0.0;
    for (const ComplexField& c : g) s += std::norm(c[i]);
    mag[i] = std::sqrt(s);
  });
  return mag;
}

// Homogeneous Sobolev seminorm: (cell_volume/N^n sum |k|^2 |fhat|^2)^{1/2}.
inline double h1dot_norm(const ComplexField& f) {
  std::vector<Complex> spec = forward_fft(f);
  const std::vector<double> ksq = [&] {
    std::vector<double> v(f.size());
    detail::apply_modes(f.grid, [&](std::size_t i, double k2, const double*) { v[i] = k2; });
    return v;
  }();
  const double s =
      deterministic_sum(f.size(), [&](std::size_t i) { return ksq[i] * std::norm(spec[i]); });
  return std::sqrt(f.grid.cell_volume() / static_cast<double>(f.size()) * s);
}

// Free Schroedinger propagator: multiplies fhat(k) by e^{-i |k|^2 t}.
inline ComplexField free_propagator(const ComplexField& f, double t) {
  std::vector<Complex> spec = forward_fft(f);
  detail::apply_modes(f.grid, [&](std::size_t i, double ksq, const double*) {
    const double phase = -ksq * t;
    spec[i] *= Complex{std::cos(phase), std::sin(phase)};
  });
  return inverse_fft(f.grid, std::move(spec));
}

// Spectral Laplacian: multiplies fhat(k) by -|k|^2.
inline ComplexField laplacian(const ComplexField& f) {
  std::vector<Complex> spec = forward_fft(f);
  detail::apply_modes(f.grid, [&](std::size_t i, double ksq, const double*) { spec[i] *= -ksq; });
  return inverse_fft(f.grid, std::move(spec));
}

// Zeroes spectral coefficients outside half the Nyquist radius,
// i.e. modes with |m| > N/4 on the integer lattice.
inline void spectral_truncate_half_radius(const Grid& g, std::vector<Complex>& spec) {
  const double cutoff_sq = std::pow(g.points_per_axis / 4.0, 2);
  parallel_for(spec.size(), [&](std::size_t flat) {
    int idx[4];
    decode_index(g, flat, idx);
    double msq = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double m = g.mode(idx[a]);
      msq += m * m;
    }
    if (msq > cutoff_sq) spec[flat] = Complex{0.0, 0.0};
  });
}

}  // namespace gpcq
