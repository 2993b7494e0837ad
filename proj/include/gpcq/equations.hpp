#pragma once

#include <cmath>
#include <complex>

#include "gpcq/errors.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/parallel.hpp"

namespace gpcq {

enum class Variant { GP4, CQ3, EnergyCritical };

// Which evolution law applies. GP4 is the cubic law on n = 4 written in the
// excitation variable v = u - 1; CQ3 the cubic-quintic law on n = 3 with
// gamma = 1 - r1_sq; EnergyCritical the scale-invariant comparison law
// i w_t + Lap w = |w|^{4/(n-2)} w on n in {3,4}.
struct EquationSpec {
  Variant variant = Variant::GP4;
  int dim = 4;
  double r1_sq = 0.0;  // CQ3 only

  double gamma() const { return 1.0 - r1_sq; }

  static EquationSpec gp4() { return {Variant::GP4, 4, 0.0}; }

  static EquationSpec cq3(double r1_sq_) {
    if (!(r1_sq_ > 0.0 && r1_sq_ < 1.0))
      throw InvalidParametersError("cubic-quintic r1_sq must lie in (0,1)");
    return {Variant::CQ3, 3, r1_sq_};
  }

  static EquationSpec energy_critical(int n) {
    if (n != 3 && n != 4) throw InvalidParametersError("energy-critical dim must be 3 or 4");
    return {Variant::EnergyCritical, n, 0.0};
  }
};

// Coefficients of the general cubic-quintic law
// i u_t + Lap u = a1 u - a3 |u|^2 u + a5 |u|^4 u.
struct GeneralCQParams {
  double alpha1 = 0.0;
  double alpha3 = 0.0;
  double alpha5 = 0.0;

  double discriminant() const { return alpha3 * alpha3 - 4.0 * alpha1 * alpha5; }
};

// Deviation of the cubic-quintic excitation nonlinearity from its
// energy-critical part: the nine-term expansion of
// (|1+v|^2 - 1)(|1+v|^2 - (1-gamma))(1+v) - |v|^4 v, kept term-by-term so the
// factored form can be checked against it independently.
inline Complex remainder_R(Complex z, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw InvalidParametersError("remainder gamma must lie in (0,1)");
  const double s = std::norm(z);
  const double x = z.real();
  return s * s + 4.0 * s * z * x + 4.0 * s * x + gamma * s * z + 4.0 * z * x * x +
         gamma * s + 4.0 * x * x + 2.0 * gamma * z * x + 2.0 * gamma * x;
}

// Pointwise right-hand side of the evolution law at excitation value z.
inline Complex nonlinearity(const EquationSpec& spec, Complex z) {
  const double s = std::norm(z);
  switch (spec.variant) {
    case Variant::GP4: {
      const double x = z.real();
      return s * z + 2.0 * x * z + s + 2.0 * x;
    }
    case Variant::CQ3:
      return s * s * z + remainder_R(z, spec.gamma());
    case Variant::EnergyCritical:
      return spec.dim == 4 ? s * z : s * s * z;
  }
  return {};
}

// Result of reducing the general cubic-quintic law to the normalized one
// with boundary modulus 1: substituting
//   u(t,x) = amplitude_scale * u~(time_scale * t, space_scale * x)
// turns the general law into the normalized law with parameter r1_sq_reduced.
struct ReducedCQ {
  double r0_sq = 0.0;
  double r1_sq_reduced = 0.0;
  double amplitude_scale = 0.0;
  double time_scale = 0.0;
  double space_scale = 0.0;
};

inline ReducedCQ reduce_general(const GeneralCQParams& p) {
  const double disc = p.discriminant();
  if (!(disc > 0.0))
    throw NoRealRootsError("discriminant nonpositive: no two distinct real roots");
  // Roots of a5 s^2 - a3 s + a1; the larger via the stable form, the smaller
  // via Vieta's product.
  const double root_big = (p.alpha3 + std::sqrt(disc)) / (2.0 * p.alpha5);
  const double root_small = p.alpha1 / (p.alpha5 * root_big);
  if (!(root_small > 0.0) || !(root_big > 0.0))
    throw InvalidParametersError("quadratic roots must both be positive");
  ReducedCQ out;
  out.r0_sq = root_big;
  out.r1_sq_reduced = root_small / root_big;
  out.amplitude_scale = std::sqrt(root_big);
  out.time_scale = p.alpha5 * root_big * root_big;
  out.space_scale = std::sqrt(out.time_scale);
  return out;
}

// Right-hand side of the general law, used by the reduction oracle.
inline Complex general_cq_rhs(const GeneralCQParams& p, Complex u) {
  const double s = std::norm(u);
  return p.alpha1 * u - p.alpha3 * s * u + p.alpha5 * s * s * u;
}

// Right-hand side of the normalized cubic-quintic law in the u variable.
inline Complex normalized_cq_rhs(double r1_sq, Complex u) {
  const double s = std::norm(u);
  return (s - 1.0) * (s - r1_sq) * u;
}

// Rotates the boundary phase alpha (|alpha| = 1) to 1 and shifts to the
// excitation variable: returns conj(alpha) * u - 1.
inline ComplexField gauge_reduce(const ComplexField& u, Complex alpha) {
  if (std::abs(std::abs(alpha) - 1.0) > 1e-12)
    throw InvalidParametersError("gauge phase must have unit modulus");
  const Complex rot = std::conj(alpha);
  ComplexField v(u.grid);
  parallel_for(u.size(), [&](std::size_t i) { v[i] = rot * u[i] - 1.0; });
  return v;
}

}  // namespace gpcq
