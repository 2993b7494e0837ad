#pragma once

#include <cmath>
#include <complex>

#include "gpcq/equations.hpp"
#include "gpcq/errors.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/spectral.hpp"

namespace gpcq {

// Energy evaluated together with the real-part mass and the modified energy
// M = E + c0 * int |Re v|^2.
struct EnergyReport {
  double energy = 0.0;
  double re_l2_sq = 0.0;
  double m_value = 0.0;
  double c0 = 0.0;
};

namespace detail {

inline void require_cq_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InvalidParametersError("gamma must lie in (0,1]");
}

inline double grad_sq_integral(const ComplexField& f) {
  const double h1 = h1dot_norm(f);
  return h1 * h1;
}

}  // namespace detail

// Hamiltonian in the u variable: kinetic term plus the density
// (|u|^2 - 1)^2 (and its cube for the cubic-quintic form), by grid quadrature
// with the spectral gradient. Exists for identity testing against the
// excitation form below.
inline double energy_gl(const ComplexField& u, const EquationSpec& spec) {
  const double kinetic = 0.5 * detail::grad_sq_integral(u);
  const double h_n = u.grid.cell_volume();
  if (spec.variant == Variant::GP4) {
    const double quartic = deterministic_sum(u.size(), [&](std::size_t i) {
      const double d = std::norm(u[i]) - 1.0;
      return d * d;
    });
    return kinetic + 0.25 * h_n * quartic;
  }
  if (spec.variant == Variant::CQ3) {
    const double g = spec.gamma();
    const double pot = deterministic_sum(u.size(), [&](std::size_t i) {
      const double d = std::norm(u[i]) - 1.0;
      return (0.25 * g + d / 6.0) * d * d;
    });
    return kinetic + h_n * pot;
  }
  throw InvalidParametersError("energy_gl requires the GP4 or CQ3 form");
}

// Same Hamiltonian in the excitation variable, expanded through
// q = |v|^2 + 2 Re v. Boundary-exact: the default form used on trajectories.
inline double energy_excitation(const ComplexField& v, const EquationSpec& spec) {
  const double kinetic = 0.5 * detail::grad_sq_integral(v);
  const double h_n = v.grid.cell_volume();
  if (spec.variant == Variant::GP4) {
    const double quartic = deterministic_sum(v.size(), [&](std::size_t i) {
      const double q = std::norm(v[i]) + 2.0 * v[i].real();
      return q * q;
    });
    return kinetic + 0.25 * h_n * quartic;
  }
  if (spec.variant == Variant::CQ3) {
    const double g = spec.gamma();
    const double pot = deterministic_sum(v.size(), [&](std::size_t i) {
      const double q = std::norm(v[i]) + 2.0 * v[i].real();
      return (0.25 * g + q / 6.0) * q * q;
    });
    return kinetic + h_n * pot;
  }
  throw InvalidParametersError("energy_excitation requires the GP4 or CQ3 form");
}

// Conserved energy of the energy-critical comparison law (diagnostics only).
inline double energy_critical_energy(const ComplexField& w, int n) {
  const double kinetic = 0.5 * detail::grad_sq_integral(w);
  const double h_n = w.grid.cell_volume();
  if (n == 4) {
    const double p = deterministic_sum(w.size(), [&](std::size_t i) {
      const double s = std::norm(w[i]);
      return s * s;
    });
    return kinetic + 0.25 * h_n * p;
  }
  const double p = deterministic_sum(w.size(), [&](std::size_t i) {
    const double s = std::norm(w[i]);
    return s * s * s;
  });
  return kinetic + h_n * p / 6.0;
}

// The constant c0(gamma) = 3 + gamma/6 making
//   int |grad v|^2 + int |v|^6 + gamma int |v|^4 <= 48 (E(v) + c0 int |Re v|^2).
// Combining the two pointwise bounds below with 48 E = 24 int |grad v|^2
// + 12 gamma int q^2 + 8 int q^3: the q^3 budgets cancel exactly and the
// Re-coefficient requirement is 48 c0 >= 144 + 8 gamma.
inline double coercivity_constant(double gamma) {
  detail::require_cq_gamma(gamma);
  return 3.0 + gamma / 6.0;
}

// Pointwise coercivity bounds with q = |z|^2 + 2 Re z:
//   gamma |z|^4 <= 2 gamma q^2 + 8 gamma (Re z)^2   (quartic)
//   |z|^6 <= 8 q^3 + 144 (Re z)^2                   (sextic)
struct PointwiseCoercivity {
  bool quartic_holds = false;
  bool sextic_holds = false;
  double slack_quartic = 0.0;  // RHS - LHS
  double slack_sextic = 0.0;
};

inline PointwiseCoercivity coercivity_pointwise(Complex z, double gamma) {
  detail::require_cq_gamma(gamma);
  const double s = std::norm(z);
  const double x = z.real();
  const double q = s + 2.0 * x;
  PointwiseCoercivity out;
  const double lhs4 = gamma * s * s;
  const double rhs4 = 2.0 * gamma * q * q + 8.0 * gamma * x * x;
  const double lhs6 = s * s * s;
  const double rhs6 = 8.0 * q * q * q + 144.0 * x * x;
  out.slack_quartic = rhs4 - lhs4;
  out.slack_sextic = rhs6 - lhs6;
  // Ties on the equality manifolds are broken with a rounding guard.
  const double guard4 = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(rhs4));
  const double guard6 = 32.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(rhs6));
  out.quartic_holds = lhs4 <= rhs4 + guard4;
  out.sextic_holds = lhs6 <= rhs6 + guard6;
  return out;
}

struct IntegratedCoercivity {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// The integrated bound with the explicit constants 48 and c0(gamma).
inline IntegratedCoercivity coercivity_integrated(const ComplexField& v, double gamma) {
  detail::require_cq_gamma(gamma);
  const double l4 = lp_norm(v, 4.0);
  const double l6 = lp_norm(v, 6.0);
  const double re_sq = v.grid.cell_volume() * deterministic_sum(v.size(), [&](std::size_t i) {
    const double x = v[i].real();
    return x * x;
  });
  IntegratedCoercivity out;
  out.lhs = detail::grad_sq_integral(v) + std::pow(l6, 6) + gamma * std::pow(l4, 4);
  out.rhs = 48.0 * (energy_excitation(v, EquationSpec::cq3(1.0 - gamma)) +
                    coercivity_constant(gamma) * re_sq);
  out.holds = out.lhs <= out.rhs + 1e-9 * std::abs(out.rhs);
  return out;
}

// Modified energy M(v) = E(v) + c0(gamma) int |Re v|^2.
inline EnergyReport m_functional(const ComplexField& v, double gamma) {
  detail::require_cq_gamma(gamma);
  EnergyReport rep;
  rep.c0 = coercivity_constant(gamma);
  rep.energy = energy_excitation(v, EquationSpec::cq3(1.0 - gamma));
  rep.re_l2_sq = v.grid.cell_volume() * deterministic_sum(v.size(), [&](std::size_t i) {
    const double x = v[i].real();
    return x * x;
  });
  rep.m_value = rep.energy + rep.c0 * rep.re_l2_sq;
  return rep;
}

// Exact time derivative of int |Re v|^2 along the flow, evaluated on a single
// field: -2 int Re(v) Im(Lap v) + 2 int Re(v) Im(N(v)), with the Laplacian as
// a spectral multiplier. Holds exactly for the semi-discrete flow, so the
// finite-difference comparison isolates the time-splitting error.
inline double mass_identity_rhs(const ComplexField& v, const EquationSpec& spec) {
  if (spec.variant != Variant::GP4 && spec.variant != Variant::CQ3)
    throw InvalidParametersError("mass identity requires the GP4 or CQ3 law");
  const ComplexField lap = laplacian(v);
  const double g = spec.gamma();
  const bool cq = spec.variant == Variant::CQ3;
  const double total = deterministic_sum(v.size(), [&](std::size_t i) {
    const double x = v[i].real();
    const double y = v[i].imag();
    const double s = std::norm(v[i]);
    // Im of the nonlinearity: y*(s + 2x) for the cubic law,
    // y*(s^2 + 4sx + gamma*s + 4x^2 + 2*gamma*x) for the cubic-quintic one.
    const double im_nl = cq ? y * (s * s + 4.0 * s * x + g * s + 4.0 * x * x + 2.0 * g * x)
                            : y * (s + 2.0 * x);
    return -2.0 * x * lap[i].imag() + 2.0 * x * im_nl;
  });
  return v.grid.cell_volume() * total;
}

// Energy-space norm: ||Re f||_{H^1} + ||Im f||_{H^1-dot} (+ ||f||_{L^4} for
// the cubic-quintic space).
inline double energy_space_norm(const ComplexField& v, const EquationSpec& spec) {
  ComplexField re(v.grid), im(v.grid);
  parallel_for(v.size(), [&](std::size_t i) {
    re[i] = Complex{v[i].real(), 0.0};
    im[i] = Complex{v[i].imag(), 0.0};
  });
  const double re_l2 = lp_norm(re, 2.0);
  const double re_h1dot = h1dot_norm(re);
  const double re_h1 = std::sqrt(re_l2 * re_l2 + re_h1dot * re_h1dot);
  double total = re_h1 + h1dot_norm(im);
  if (spec.variant == Variant::CQ3) total += lp_norm(v, 4.0);
  return total;
}

// Explicit growth rate c1(gamma) with |d/dt M| <= c1 M along the
// cubic-quintic flow. Derivation, writing x = Re v, y = Im v, s = |v|^2,
// q = s + 2x, G = int |grad v|^2, S6 = int s^3, S4 = int s^2, R2 = int x^2:
//
//   d/dt int x^2 = -2 int x Im(Lap v) + 2 int x y (s^2 + 4sx + g s + 4x^2 + 2gx).
//
// Term bounds using |xy| <= s/2, |x| <= sqrt(s), |y| <= sqrt(s),
// x^4 <= x^2 + s^3, x^2 s <= (x^2 + s^3)/2 and sqrt(s) <= (1+s)/2:
//   |int x Im(Lap v)|*2 <= G          (integrate by parts, Cauchy-Schwarz)
//   2|x y s^2|   <= s^3
//   8|x^2 y s|   <= 4x^2 + 8s^3
//   2g|x y s|    <= g s^2
//   8|x^3 y|     <= 2x^2 + 2s^3
//   4g|x^2 y|    <= 3g x^2 + g s^3
// so |d/dt R2| <= G + (11+g) S6 + g S4 + (6+3g) R2
//             <= (11+g) * 48 M + (6+3g) R2,
// using the integrated coercivity bound G + S6 + g S4 <= 48 M (which also
// gives M >= 0). For R2 <= kappa M: q >= -1 gives q^3 >= -q^2, hence
// E >= G/2 - beta * int q^2 with beta = max(0, 1/6 - g/4), and
// int q^2 <= 2 S4 + 8 R2, S4 <= 48 M / g, so
//   kappa = (1 + 96 beta / g) / (c0 - 8 beta),   c0 - 8 beta >= 5/3.
// Finally c1 = c0 * (48 (11+g) + (6+3g) kappa).
inline double gronwall_rate(double gamma) {
  detail::require_cq_gamma(gamma);
  const double c0 = coercivity_constant(gamma);
  const double beta = std::max(0.0, 1.0 / 6.0 - gamma / 4.0);
  const double kappa = (1.0 + 96.0 * beta / gamma) / (c0 - 8.0 * beta);
  return c0 * (48.0 * (11.0 + gamma) + (6.0 + 3.0 * gamma) * kappa);
}

// A-priori bound on sup_{[0,tau]} ||v||_{H^1-dot} implied by the growth rate:
// G(t) <= 48 M(t) <= 48 M(0) e^{c1 t}. Returns +inf when the exponential
// overflows; the bound is still valid.
inline double gronwall_h1_bound(const EnergyReport& at_start, double gamma, double tau) {
  const double c1 = gronwall_rate(gamma);
  const double log_bound = 0.5 * (std::log(48.0 * std::max(at_start.m_value, 0.0)) + c1 * tau);
  return std::exp(log_bound);
}

}  // namespace gpcq
