#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gpcq/errors.hpp"
#include "gpcq/integrator.hpp"
#include "gpcq/spectral.hpp"

namespace gpcq {

// Exact rational exponent; den == 0 encodes +infinity. The admissibility
// relation 2/q + n/r = n/2 is an exact identity, so it is tested without
// floating point.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational infinity() { return Rational{1, 0}; }

  static Rational of(long long n, long long d) {
    if (d == 0) throw InvalidParametersError("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return Rational{g ? n / g : n, g ? d / g : d};
  }

  bool is_inf() const { return den == 0; }

  double value() const {
    return is_inf() ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(num) / static_cast<double>(den);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (a.is_inf() || b.is_inf()) return a.is_inf() && b.is_inf();
    return a.num * b.den == b.num * a.den;
  }

  // a < b; infinity compares greater than any finite value.
  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.is_inf()) return false;
    if (b.is_inf()) return true;
    return a.num * b.den < b.num * a.den;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_inf() || b.is_inf()) return infinity();
    return of(a.num * b.den + b.num * a.den, a.den * b.den);
  }

  // Reciprocal scaled by c: c / a (zero when a is infinite).
  Rational reciprocal_times(long long c) const {
    if (is_inf()) return Rational{0, 1};
    if (num == 0) throw InvalidParametersError("division by zero exponent");
    return of(c * den, num);
  }
};

struct LebesguePair {
  Rational q;
  Rational r;
};

// Exact test of 2/q + n/r = n/2 with 2 <= q, r <= inf, excluding (2, inf, 2).
inline bool is_admissible(const Rational& q, const Rational& r, int n) {
  if (n < 1) throw InvalidParametersError("dimension must be >= 1");
  const Rational two = Rational::of(2, 1);
  if (q < two || r < two) return false;
  if (n == 2 && q == two && r.is_inf()) return false;
  const Rational lhs = q.reciprocal_times(2) + r.reciprocal_times(n);
  return lhs == Rational::of(n, 2);
}

// The finite admissible families used for the S^1 norms.
inline std::vector<LebesguePair> admissible_pairs(int n) {
  if (n == 4)
    return {{Rational::of(2, 1), Rational::of(4, 1)},
            {Rational::of(6, 1), Rational::of(12, 5)},
            {Rational::infinity(), Rational::of(2, 1)}};
  if (n == 3)
    return {{Rational::of(2, 1), Rational::of(6, 1)},
            {Rational::of(8, 3), Rational::of(4, 1)},
            {Rational::of(20, 7), Rational::of(30, 8)},
            {Rational::of(5, 1), Rational::of(30, 11)},
            {Rational::of(10, 1), Rational::of(30, 13)},
            {Rational::of(20, 1), Rational::of(15, 7)},
            {Rational::infinity(), Rational::of(2, 1)}};
  throw InvalidParametersError("admissible pair family defined for n in {3,4}");
}

// The dimension-specific pair defining the X^1 norm of the gradient.
inline LebesguePair x1_pair(int n) {
  if (n == 4) return {Rational::of(6, 1), Rational::of(12, 5)};
  if (n == 3) return {Rational::of(10, 1), Rational::of(30, 13)};
  throw InvalidParametersError("X^1 pair defined for n in {3,4}");
}

// Running trapezoid accumulator for int ||f(t)||^q dt along increasing
// timestamps; immutable once the samples are all appended.
class MixedNormAccumulator {
 public:
  MixedNormAccumulator(LebesguePair pair) : pair_(pair) {}

  void append(double t, double spatial_norm) {
    if (!times_.empty() && !(t > times_.back()))
      throw IntervalError("timestamps must be strictly increasing");
    if (!times_.empty() && !pair_.q.is_inf()) {
      const double qv = pair_.q.value();
      integrated_ += 0.5 * (t - times_.back()) *
                     (std::pow(values_.back(), qv) + std::pow(spatial_norm, qv));
    }
    times_.push_back(t);
    values_.push_back(spatial_norm);
  }

  double integrated() const { return integrated_; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }
  const LebesguePair& pair() const { return pair_; }

 private:
  LebesguePair pair_;
  std::vector<double> times_;
  std::vector<double> values_;
  double integrated_ = 0.0;
};

enum class FieldSelector { Value, Gradient };

namespace detail {

inline double interval_eps(double a, double b) { return 1e-12 * (std::abs(a) + std::abs(b) + 1.0); }

// Time-Lebesgue norm of per-snapshot spatial norms over [a, b], with the
// integrand phi = s^q interpolated linearly at non-snapshot endpoints.
inline double time_lq(const std::vector<double>& times, const std::vector<double>& snorm,
                      const Rational& q, double a, double b) {
  const double eps = interval_eps(a, b);
  if (a < times.front() - eps || b > times.back() + eps || a > b)
    throw IntervalError("interval outside the trajectory range");
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= a - eps && times[i] <= b + eps) inside.push_back(i);
  if (q.is_inf()) {
    double m = 0.0;
    for (std::size_t i : inside) m = std::max(m, snorm[i]);
    return m;
  }
  if (inside.size() < 2)
    throw InsufficientSamplingError("fewer than 2 snapshots inside the interval");
  const double qv = q.value();
  auto phi_at = [&](double t) {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t hi = std::min<std::size_t>(times.size() - 1, it - times.begin());
    std::size_t lo = hi == 0 ? 0 : hi - 1;
    if (hi == lo) return std::pow(snorm[lo], qv);
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - w) * std::pow(snorm[lo], qv) + w * std::pow(snorm[hi], qv);
  };
  std::vector<double> ts, phis;
  if (times[inside.front()] > a + eps) {
    ts.push_back(a);
    phis.push_back(phi_at(a));
  }
  for (std::size_t i : inside) {
    ts.push_back(times[i]);
    phis.push_back(std::pow(snorm[i], qv));
  }
  if (times[inside.back()] < b - eps) {
    ts.push_back(b);
    phis.push_back(phi_at(b));
  }
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    integral += 0.5 * (ts[i + 1] - ts[i]) * (phis[i] + phis[i + 1]);
  return std::pow(integral, 1.0 / qv);
}

inline std::vector<double> spatial_norm_samples(const Trajectory& traj, FieldSelector sel,
                                                const Rational& r) {
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (sel == FieldSelector::Value) {
      out[i] = lp_norm(traj.snapshots[i], r.value());
    } else {
      const std::vector<double> mag = gradient_magnitude(traj.snapshots[i]);
      out[i] = lp_norm(traj.grid, mag, r.value());
    }
  }
  return out;
}

}  // namespace detail

// Mixed space-time norm (int_a^b ||f(t)||_{L^r}^q dt)^{1/q} by trapezoid over
// snapshots; q = inf takes the max of per-snapshot spatial norms.
inline double mixed_norm(const Trajectory& traj, FieldSelector sel, const LebesguePair& pair,
                         double a, double b) {
  if (Rational::of(1, 1) < pair.q == false && !(pair.q == Rational::of(1, 1)))
    throw InvalidExponentError("q must satisfy q >= 1");
  return detail::time_lq(traj.times, detail::spatial_norm_samples(traj, sel, pair.r), pair.q, a, b);
}

// The X^1 norm: mixed norm of the gradient in the dimension-specific pair.
inline double x1_norm(const Trajectory& traj, double a, double b) {
  return mixed_norm(traj, FieldSelector::Gradient, x1_pair(traj.grid.dim), a, b);
}

// The finite-family S^1 norm: max over the listed admissible pairs of the
// gradient mixed norm. Gradient magnitudes are computed once per snapshot.
inline double s1_finite_norm(const Trajectory& traj, double a, double b) {
  const std::vector<LebesguePair> pairs = admissible_pairs(traj.grid.dim);
  std::vector<std::vector<double>> mags(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) mags[i] = gradient_magnitude(traj.snapshots[i]);
  double best = 0.0;
  for (const LebesguePair& p : pairs) {
    std::vector<double> snorm(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i)
      snorm[i] = lp_norm(traj.grid, mags[i], p.r.value());
    best = std::max(best, detail::time_lq(traj.times, snorm, p.q, a, b));
  }
  return best;
}

// Upper-bound proxy for the dual-space size of the perturbation forcing,
// using exactly the Hoelder decomposition the well-posedness argument uses:
// for the cubic law the quadratic terms contribute |v| |grad v| in the dual
// pair (6/5, 12/7); for the cubic-quintic law the terms of degree 2..4
// contribute |v|^{l-1} |grad v| in their dual pairs; the linear part
// contributes |grad v| in (1, 2) either way.
inline double n0_proxy(const Trajectory& traj, double a, double b, const EquationSpec& spec) {
  if (spec.variant == Variant::EnergyCritical) return 0.0;
  struct Term {
    int power;  // l-1: power of |v| multiplying |grad v|
    Rational q, r;
  };
  std::vector<Term> terms;
  if (spec.variant == Variant::GP4) {
    terms = {{1, Rational::of(6, 5), Rational::of(12, 7)}, {0, Rational::of(1, 1), Rational::of(2, 1)}};
  } else {
    terms = {{1, Rational::of(20, 19), Rational::of(30, 16)},
             {2, Rational::of(5, 4), Rational::of(30, 19)},
             {3, Rational::of(20, 13), Rational::of(30, 22)},
             {0, Rational::of(1, 1), Rational::of(2, 1)}};
  }
  std::vector<std::vector<double>> mags(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) mags[i] = gradient_magnitude(traj.snapshots[i]);
  double total = 0.0;
  for (const Term& term : terms) {
    std::vector<double> snorm(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const ComplexField& v = traj.snapshots[i];
      std::vector<double> prod(v.size());
      parallel_for(v.size(), [&](std::size_t j) {
        double amp = 1.0;
        const double m = std::abs(v[j]);
        for (int p = 0; p < term.power; ++p) amp *= m;
        prod[j] = amp * mags[i][j];
      });
      snorm[i] = lp_norm(traj.grid, prod, term.r.value());
    }
    total += detail::time_lq(traj.times, snorm, term.q, a, b);
  }
  return total;
}

struct Partition {
  double eta = 0.0;
  std::vector<double> breakpoints;  // right endpoints of the chunks
  std::vector<double> chunk_x1;     // X^1 value of each chunk
};

// Greedy scan accumulating int ||grad w(t)||^q dt: a breakpoint is emitted
// each time the running chunk integral reaches eta^q, locating the crossing
// inside a segment by inverting the (quadratic) trapezoid integral. Every
// non-final chunk has X^1 norm exactly eta up to quadrature tolerance; the
// final chunk is kept separate and its (smaller) value reported.
inline Partition partition_by_x1(const Trajectory& traj, double eta) {
  if (!(eta > 0.0)) throw InvalidParametersError("eta must be positive");
  if (traj.size() < 2) throw InsufficientSamplingError("partition needs at least 2 snapshots");
  const LebesguePair pair = x1_pair(traj.grid.dim);
  const double qv = pair.q.value();
  const std::vector<double> snorm =
      detail::spatial_norm_samples(traj, FieldSelector::Gradient, pair.r);
  const double budget = std::pow(eta, qv);

  Partition out;
  out.eta = eta;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    double t0 = traj.times[i];
    const double t1 = traj.times[i + 1];
    double phi0 = std::pow(snorm[i], qv);
    const double phi1 = std::pow(snorm[i + 1], qv);
    const double slope = (phi1 - phi0) / (t1 - t0);
    while (t0 < t1) {
      const double seg = 0.5 * (phi0 + (phi0 + slope * (t1 - t0))) * (t1 - t0);
      if (acc + seg < budget) {
        acc += seg;
        break;
      }
      // Crossing inside [t0, t1]: solve phi0 d + slope d^2 / 2 = rem.
      const double rem = budget - acc;
      double d;
      if (std::abs(slope) < 1e-300) {
        d = phi0 > 0.0 ? rem / phi0 : (t1 - t0);
      } else {
        d = (-phi0 + std::sqrt(phi0 * phi0 + 2.0 * slope * rem)) / slope;
      }
      d = std::clamp(d, 0.0, t1 - t0);
      t0 += d;
      phi0 += slope * d;
      out.breakpoints.push_back(t0);
      out.chunk_x1.push_back(eta);
      acc = 0.0;
      if (t0 >= t1) break;
    }
  }
  const double t_end = traj.times.back();
  if (out.breakpoints.empty() || out.breakpoints.back() < t_end - detail::interval_eps(0, t_end)) {
    out.breakpoints.push_back(t_end);
    out.chunk_x1.push_back(std::pow(acc, 1.0 / qv));
  }
  return out;
}

}  // namespace gpcq
