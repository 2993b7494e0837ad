#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gpcq/energy.hpp"
#include "gpcq/equations.hpp"
#include "gpcq/errors.hpp"
#include "gpcq/fft.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/spectral.hpp"

namespace gpcq {

struct StepConfig {
  double dt = 1e-3;
  long n_steps = 1;
  long snapshot_stride = 1;
  bool dealias = false;
  double blowup_guard = 1e6;
};

struct SnapshotDiagnostics {
  EnergyReport energy;
  double h1dot = 0.0;
  double l2 = 0.0;
  double l4 = 0.0;
  double l6 = 0.0;
  double linf = 0.0;
  double boundary_shell_max = 0.0;
};

// Time-stamped excitation snapshots with per-snapshot energy and norm records.
struct Trajectory {
  EquationSpec spec;
  Grid grid;
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<SnapshotDiagnostics> diagnostics;

  std::size_t size() const { return times.size(); }
  double start_time() const { return times.front(); }
  double end_time() const { return times.back(); }
  const ComplexField& final_field() const { return snapshots.back(); }
};

struct BlowUpError : std::runtime_error {
  BlowUpError(const std::string& what, Trajectory partial_)
      : std::runtime_error(what), partial(std::move(partial_)) {}
  Trajectory partial;
};

namespace detail {

// Phase-rotation rate F(|u|^2) of the stiff substep; each law multiplies its
// state by exp(-i F dt), conserving |u| pointwise.
inline double phase_rate(const EquationSpec& spec, double s) {
  switch (spec.variant) {
    case Variant::GP4:
      return s - 1.0;
    case Variant::CQ3:
      return (s - 1.0) * (s - spec.r1_sq);
    case Variant::EnergyCritical:
      return spec.dim == 4 ? s : s * s;
  }
  return 0.0;
}

// Half-step nonlinear phase rotation, acting on u = 1 + v for the shifted
// laws and on the state directly for the energy-critical one.
inline void nonlinear_phase(const EquationSpec& spec, std::vector<Complex>& state, double dt) {
  const bool shifted = spec.variant != Variant::EnergyCritical;
  parallel_for(state.size(), [&](std::size_t i) {
    const Complex u = shifted ? state[i] + 1.0 : state[i];
    const double phase = -phase_rate(spec, std::norm(u)) * dt;
    const Complex rotated = u * Complex{std::cos(phase), std::sin(phase)};
    state[i] = shifted ? rotated - 1.0 : rotated;
  });
}

// Full linear substep in spectral space with a precomputed multiplier.
inline void linear_substep(const Grid& g, std::vector<Complex>& state,
                           const std::vector<Complex>& multiplier, bool dealias) {
  fft_transform(g, state, FftDirection::Forward);
  parallel_for(state.size(), [&](std::size_t i) { state[i] *= multiplier[i]; });
  if (dealias) spectral_truncate_half_radius(g, state);
  fft_transform(g, state, FftDirection::Inverse);
}

inline std::vector<Complex> propagator_multiplier(const Grid& g, double dt) {
  std::vector<Complex> mult(g.size());
  apply_modes(g, [&](std::size_t i, double ksq, const double*) {
    const double phase = -ksq * dt;
    mult[i] = Complex{std::cos(phase), std::sin(phase)};
  });
  return mult;
}

inline SnapshotDiagnostics snapshot_diagnostics(const ComplexField& v, const EquationSpec& spec) {
  SnapshotDiagnostics d;
  switch (spec.variant) {
    case Variant::CQ3:
      d.energy = m_functional(v, spec.gamma());
      break;
    case Variant::GP4:
    case Variant::EnergyCritical: {
      d.energy.c0 = 0.0;
      d.energy.energy = spec.variant == Variant::GP4 ? energy_excitation(v, spec)
                                                     : energy_critical_energy(v, spec.dim);
      d.energy.re_l2_sq = v.grid.cell_volume() * deterministic_sum(v.size(), [&](std::size_t i) {
        const double x = v[i].real();
        return x * x;
      });
      d.energy.m_value = d.energy.energy;
      break;
    }
  }
  d.h1dot = h1dot_norm(v);
  d.l2 = lp_norm(v, 2.0);
  d.l4 = lp_norm(v, 4.0);
  d.l6 = lp_norm(v, 6.0);
  d.linf = lp_norm(v, kInfExponent);
  // Outermost shell: sites with any axis index in {0, N-1}, i.e. adjacent to
  // the wrap-around seam for data centred in the box.
  double shell = 0.0;
  const int last = v.grid.points_per_axis - 1;
  for_each_site(v.grid, [&](std::size_t flat, const int* idx) {
    for (int a = 0; a < v.grid.dim; ++a) {
      if (idx[a] == 0 || idx[a] == last) {
        shell = std::max(shell, std::abs(v[flat]));
        return;
      }
    }
  });
  d.boundary_shell_max = shell;
  return d;
}

}  // namespace detail

// One Strang step: half nonlinear phase, full free flight, half nonlinear
// phase. Both substeps are exact flows of their parts, so spatially constant
// data integrates exactly.
inline ComplexField strang_step(const EquationSpec& spec, const ComplexField& v, double dt) {
  if (!(dt != 0.0)) throw InvalidParametersError("strang_step requires dt != 0");
  std::vector<Complex> state = v.values;
  const std::vector<Complex> mult = detail::propagator_multiplier(v.grid, dt);
  detail::nonlinear_phase(spec, state, 0.5 * dt);
  detail::linear_substep(v.grid, state, mult, false);
  detail::nonlinear_phase(spec, state, 0.5 * dt);
  return ComplexField(v.grid, std::move(state));
}

// Applies n_steps Strang steps, recording a snapshot (with diagnostics) at
// t = 0 and after every snapshot_stride steps. Aborts when the sup norm
// exceeds the blow-up guard or a value goes non-finite.
inline Trajectory evolve(const EquationSpec& spec, const ComplexField& v0, const StepConfig& cfg) {
  if (!(cfg.dt != 0.0)) throw InvalidParametersError("evolve requires dt != 0");
  if (cfg.n_steps < 1) throw InvalidParametersError("evolve requires n_steps >= 1");
  if (cfg.snapshot_stride < 1) throw InvalidParametersError("snapshot_stride must be >= 1");
  if (v0.grid.dim != spec.dim)
    throw InvalidParametersError("initial data dimension does not match the equation");
  if (!v0.is_finite()) throw NumericalFailureError("initial data contains non-finite values");

  Trajectory traj;
  traj.spec = spec;
  traj.grid = v0.grid;
  const std::vector<Complex> mult = detail::propagator_multiplier(v0.grid, cfg.dt);

  auto record = [&](double t, const ComplexField& v) {
    traj.times.push_back(t);
    traj.snapshots.push_back(v);
    traj.diagnostics.push_back(detail::snapshot_diagnostics(v, spec));
  };

  record(0.0, v0);
  std::vector<Complex> state = v0.values;
  for (long step = 1; step <= cfg.n_steps; ++step) {
    detail::nonlinear_phase(spec, state, 0.5 * cfg.dt);
    detail::linear_substep(v0.grid, state, mult, cfg.dealias);
    detail::nonlinear_phase(spec, state, 0.5 * cfg.dt);

    double sup = 0.0;
    bool finite = true;
    for (const Complex& z : state) {
      const double m = std::norm(z);
      if (!std::isfinite(m)) {
        finite = false;
        break;
      }
      sup = std::max(sup, m);
    }
    if (!finite)
      throw NumericalFailureError("non-finite value produced during evolution");
    if (std::sqrt(sup) > cfg.blowup_guard)
      throw BlowUpError("blow-up guard exceeded", std::move(traj));

    if (step % cfg.snapshot_stride == 0 || step == cfg.n_steps)
      record(cfg.dt * static_cast<double>(step), ComplexField(v0.grid, state));
  }
  return traj;
}

struct ConvergenceResult {
  bool exact_integration = false;
  double order = 0.0;
  std::vector<double> diffs;
};

// Richardson estimate of the splitting order from final-time solutions on a
// halving dt ladder.
inline ConvergenceResult convergence_order(const EquationSpec& spec, const ComplexField& v0,
                                           double total_time, const std::vector<double>& dt_list) {
  if (dt_list.size() < 3)
    throw InvalidParametersError("convergence_order needs at least 3 dt values");
  for (std::size_t i = 1; i < dt_list.size(); ++i)
    if (std::abs(dt_list[i] - 0.5 * dt_list[i - 1]) > 1e-12 * dt_list[i - 1])
      throw InvalidParametersError("each dt must halve the previous one");

  std::vector<ComplexField> finals;
  for (double dt : dt_list) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.n_steps = std::lround(total_time / dt);
    cfg.snapshot_stride = cfg.n_steps;
    if (std::abs(cfg.n_steps * dt - total_time) > 1e-9 * total_time)
      throw InvalidParametersError("total_time must be an integer multiple of every dt");
    finals.push_back(evolve(spec, v0, cfg).final_field());
  }

  ConvergenceResult res;
  double scale = lp_norm(finals.back(), 2.0);
  for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
    ComplexField d(v0.grid);
    parallel_for(d.size(), [&](std::size_t j) { d[j] = finals[i][j] - finals[i + 1][j]; });
    res.diffs.push_back(lp_norm(d, 2.0));
  }
  const double floor = 1e-12 * std::max(1.0, scale);
  if (*std::max_element(res.diffs.begin(), res.diffs.end()) <= floor) {
    res.exact_integration = true;
    return res;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < res.diffs.size(); ++i) {
    if (res.diffs[i + 1] >= res.diffs[i])
      throw InconclusiveOrderError("successive differences are not decreasing");
    sum += std::log2(res.diffs[i] / res.diffs[i + 1]);
  }
  res.order = sum / static_cast<double>(res.diffs.size() - 1);
  return res;
}

}  // namespace gpcq
