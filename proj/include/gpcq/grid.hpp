#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "gpcq/errors.hpp"
#include "gpcq/rng.hpp"

namespace gpcq {

using Complex = std::complex<double>;

// Periodic n-dimensional lattice, n in {3,4}: N points per axis (power of
// two, N >= 8), box length L, spacing h = L/N. Sites x_j = j*h per axis,
// frequencies 2*pi*m/L with m in [-N/2, N/2). Storage is row-major with the
// last axis contiguous.
struct Grid {
  int dim = 0;
  int points_per_axis = 0;
  double box_length = 0.0;

  Grid() = default;

  Grid(int dim_, int points_per_axis_, double box_length_)
      : dim(dim_), points_per_axis(points_per_axis_), box_length(box_length_) {
    if (dim != 3 && dim != 4) throw InvalidParametersError("grid dim must be 3 or 4");
    const int n = points_per_axis;
    if (n < 8 || (n & (n - 1)) != 0)
      throw InvalidParametersError("points_per_axis must be a power of two >= 8");
    if (!(box_length > 0.0)) throw InvalidParametersError("box_length must be positive");
  }

  double spacing() const { return box_length / points_per_axis; }
  double cell_volume() const { return std::pow(spacing(), dim); }
  double volume() const { return std::pow(box_length, dim); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(points_per_axis);
    return s;
  }

  // Signed mode integer for an axis index, in [-N/2, N/2).
  int mode(int axis_index) const {
    return axis_index < points_per_axis / 2 ? axis_index : axis_index - points_per_axis;
  }

  double wavenumber(int axis_index) const {
    return 2.0 * kPi * mode(axis_index) / box_length;
  }

  double coordinate(int axis_index) const { return spacing() * axis_index; }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim == b.dim && a.points_per_axis == b.points_per_axis &&
           a.box_length == b.box_length;
  }
};

// Complex excitation values sampled on a Grid.
struct ComplexField {
  Grid grid;
  std::vector<Complex> values;

  ComplexField() = default;

  explicit ComplexField(const Grid& g) : grid(g), values(g.size(), Complex{0.0, 0.0}) {}

  ComplexField(const Grid& g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw InvalidParametersError("field size does not match grid");
  }

  std::size_t size() const { return values.size(); }
  Complex& operator[](std::size_t i) { return values[i]; }
  const Complex& operator[](std::size_t i) const { return values[i]; }

  bool is_finite() const {
    for (const Complex& z : values)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }
};

// Decodes a flat row-major index into per-axis indices (idx must hold dim ints).
inline void decode_index(const Grid& g, std::size_t flat, int* idx) {
  const std::size_t n = static_cast<std::size_t>(g.points_per_axis);
  for (int a = g.dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n);
    flat /= n;
  }
}

// Applies fn(flat, idx) over all sites, idx being the per-axis indices.
template <class Fn>
void for_each_site(const Grid& g, Fn&& fn) {
  int idx[4] = {0, 0, 0, 0};
  const std::size_t total = g.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    fn(flat, idx);
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++idx[a] < g.points_per_axis) break;
      idx[a] = 0;
    }
  }
}

}  // namespace gpcq
