#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "gpcq/errors.hpp"
#include "gpcq/fft.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/rng.hpp"

namespace gpcq {

struct InitialData {
  enum class Kind { Constant, Gaussian, RandomFourier };
  Kind kind = Kind::Constant;

  Complex constant_value{0.0, 0.0};

  Complex amplitude{0.0, 0.0};
  double sigma = 1.0;
  std::vector<double> center;  // empty means the box centre

  std::uint64_t seed = 0;
  double decay_exponent = 0.0;  // must exceed n/2 + 1
  double cutoff = 0.0;          // integer-mode radius |m| <= cutoff
};

// Samples the requested excitation on the grid.
//  - constant: v = c everywhere.
//  - gaussian: v(x) = A exp(-d(x, x0)^2 / sigma^2) with the periodic
//    (minimal-image) distance, so the bump is symmetric on the torus.
//  - random_fourier: v(x) = sum over |m| <= cutoff of
//    xi_m (1 + |k|^2)^{-s/2} e^{i k.x}, the xi_m unit-variance complex
//    Gaussians drawn from the counter-based stream at the mode's flat index;
//    identical bits for identical (seed, grid).
inline ComplexField generate_initial(const InitialData& data, const Grid& grid) {
  switch (data.kind) {
    case InitialData::Kind::Constant: {
      ComplexField v(grid);
      for (Complex& z : v.values) z = data.constant_value;
      return v;
    }
    case InitialData::Kind::Gaussian: {
      if (!(data.sigma > 0.0)) throw InvalidParametersError("gaussian sigma must be positive");
      if (!data.center.empty() && data.center.size() != static_cast<std::size_t>(grid.dim))
        throw InvalidParametersError("gaussian center must have one offset per axis");
      std::vector<double> c(static_cast<std::size_t>(grid.dim), 0.5 * grid.box_length);
      for (std::size_t a = 0; a < data.center.size(); ++a) c[a] = data.center[a];
      ComplexField v(grid);
      const double inv_sigma_sq = 1.0 / (data.sigma * data.sigma);
      for_each_site(grid, [&](std::size_t flat, const int* idx) {
        double dist_sq = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          double d = std::abs(grid.coordinate(idx[a]) - c[static_cast<std::size_t>(a)]);
          d = std::min(d, grid.box_length - d);
          dist_sq += d * d;
        }
        v[flat] = data.amplitude * std::exp(-dist_sq * inv_sigma_sq);
      });
      return v;
    }
    case InitialData::Kind::RandomFourier: {
      if (!(data.decay_exponent > 0.5 * grid.dim + 1.0))
        throw InvalidParametersError("decay_exponent must exceed n/2 + 1");
      if (!(data.cutoff > 0.0)) throw InvalidParametersError("cutoff must be positive");
      const CounterRng rng(data.seed);
      const double cutoff_sq = data.cutoff * data.cutoff;
      std::vector<Complex> coeff(grid.size(), Complex{0.0, 0.0});
      for_each_site(grid, [&](std::size_t flat, const int* idx) {
        double msq = 0.0;
        double ksq = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
          const double m = grid.mode(idx[a]);
          msq += m * m;
          const double k = grid.wavenumber(idx[a]);
          ksq += k * k;
        }
        if (msq > cutoff_sq) return;
        coeff[flat] = rng.gaussian(flat) * std::pow(1.0 + ksq, -0.5 * data.decay_exponent);
      });
      // Unscaled inverse transform via conjugation, so the field is exactly
      // the stated mode sum.
      for (Complex& z : coeff) z = std::conj(z);
      fft_transform(grid, coeff, FftDirection::Forward);
      for (Complex& z : coeff) z = std::conj(z);
      return ComplexField(grid, std::move(coeff));
    }
  }
  throw InvalidParametersError("unknown initial data kind");
}

}  // namespace gpcq
