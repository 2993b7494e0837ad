#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "gpcq/energy.hpp"
#include "gpcq/equations.hpp"
#include "gpcq/errors.hpp"
#include "gpcq/integrator.hpp"
#include "gpcq/strichartz.hpp"

namespace gpcq {

// Every hypothesis and conclusion quantity of the perturbation comparison:
// the full run (the perturbed solution) against the energy-critical
// comparison run from related data on the same interval.
struct PerturbationReport {
  double interval_a = 0.0;
  double interval_b = 0.0;
  double L_value = 0.0;       // critical spacetime norm of the full run
  double E0_value = 0.0;      // sup-in-time H^1-dot of the full run
  double Eprime_value = 0.0;  // H^1-dot distance of the initial data
  double eps_free = 0.0;      // critical norm of the free flow of the initial difference
  double eps_e = 0.0;         // dual-norm proxy of the perturbation forcing
  double diff_crit = 0.0;     // critical spacetime norm of the difference
  double diff_s1 = 0.0;       // finite-family S^1 norm of the difference
  double w_s1 = 0.0;          // finite-family S^1 norm of the comparison run
};

struct ComparisonSetup {
  EquationSpec spec;  // GP4 or CQ3 (EnergyCritical compares the law to itself)
  ComplexField v0;
  ComplexField w0;
  StepConfig cfg;
};

// Exponent of the scale-critical spacetime norm, 2(n+2)/(n-2).
inline LebesguePair critical_pair(int n) {
  const long long e = n == 4 ? 6 : 10;
  return {Rational::of(e, 1), Rational::of(e, 1)};
}

// Evolves the full law and the energy-critical comparison law from v0 and w0
// over [0, n_steps*dt] and assembles the quantity ledger.
inline PerturbationReport compare_runs(const ComparisonSetup& setup) {
  if (!(setup.v0.grid == setup.w0.grid))
    throw InvalidParametersError("comparison data must share one grid");
  if (setup.v0.grid.dim != setup.spec.dim)
    throw InvalidParametersError("grid dimension does not match the equation");

  const Trajectory vtraj = evolve(setup.spec, setup.v0, setup.cfg);
  const Trajectory wtraj = evolve(EquationSpec::energy_critical(setup.spec.dim), setup.w0, setup.cfg);

  const double a = vtraj.start_time();
  const double b = vtraj.end_time();
  const LebesguePair crit = critical_pair(setup.spec.dim);

  PerturbationReport rep;
  rep.interval_a = a;
  rep.interval_b = b;
  rep.L_value = mixed_norm(vtraj, FieldSelector::Value, crit, a, b);

  for (const ComplexField& snap : vtraj.snapshots)
    rep.E0_value = std::max(rep.E0_value, h1dot_norm(snap));

  ComplexField delta0(setup.v0.grid);
  bool zero_delta = true;
  for (std::size_t i = 0; i < delta0.size(); ++i) {
    delta0[i] = setup.v0[i] - setup.w0[i];
    zero_delta = zero_delta && delta0[i] == Complex{0.0, 0.0};
  }
  rep.Eprime_value = zero_delta ? 0.0 : h1dot_norm(delta0);

  if (zero_delta) {
    rep.eps_free = 0.0;
  } else {
    Trajectory free_traj;
    free_traj.spec = setup.spec;
    free_traj.grid = setup.v0.grid;
    for (std::size_t i = 0; i < vtraj.size(); ++i) {
      free_traj.times.push_back(vtraj.times[i]);
      free_traj.snapshots.push_back(free_propagator(delta0, vtraj.times[i]));
    }
    rep.eps_free = mixed_norm(free_traj, FieldSelector::Value, crit, a, b);
  }

  rep.eps_e = n0_proxy(vtraj, a, b, setup.spec);

  Trajectory diff;
  diff.spec = setup.spec;
  diff.grid = setup.v0.grid;
  for (std::size_t i = 0; i < vtraj.size(); ++i) {
    ComplexField d(setup.v0.grid);
    parallel_for(d.size(), [&](std::size_t j) { d[j] = wtraj.snapshots[i][j] - vtraj.snapshots[i][j]; });
    diff.times.push_back(vtraj.times[i]);
    diff.snapshots.push_back(std::move(d));
  }
  rep.diff_crit = mixed_norm(diff, FieldSelector::Value, crit, a, b);
  rep.diff_s1 = s1_finite_norm(diff, a, b);
  rep.w_s1 = s1_finite_norm(wtraj, a, b);
  return rep;
}

// One compare_runs per amplitude with v0 = w0 = amplitude * base; amplitudes
// must be positive and decreasing.
inline std::vector<std::pair<double, PerturbationReport>> scaling_study(
    const EquationSpec& spec, const ComplexField& base_v0, const std::vector<double>& amplitudes,
    const StepConfig& cfg) {
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    if (!(amplitudes[i] >= 0.0)) throw InvalidParametersError("amplitudes must be nonnegative");
    if (i > 0 && !(amplitudes[i] < amplitudes[i - 1]))
      throw InvalidParametersError("amplitudes must be decreasing");
  }
  std::vector<std::pair<double, PerturbationReport>> table;
  for (double amp : amplitudes) {
    ComplexField scaled(base_v0.grid);
    parallel_for(scaled.size(), [&](std::size_t j) { scaled[j] = amp * base_v0[j]; });
    ComparisonSetup setup{spec, scaled, scaled, cfg};
    table.emplace_back(amp, compare_runs(setup));
  }
  return table;
}

struct UniquenessProbe {
  double l2_gap_final = 0.0;
  std::optional<double> order;  // empty when both runs integrate exactly
};

// Evolves the same data at a coarse and a fine step (the fine step dividing
// the coarse one), then once more with the ratio applied again, and infers
// the convergence order from the two successive final-time gaps. Agreement
// under refinement realizes uniqueness of the underlying solution.
inline UniquenessProbe uniqueness_probe(const EquationSpec& spec, const ComplexField& v0,
                                        const StepConfig& cfg_coarse, const StepConfig& cfg_fine) {
  const double ratio = cfg_coarse.dt / cfg_fine.dt;
  const long iratio = std::lround(ratio);
  if (iratio < 2 || std::abs(ratio - static_cast<double>(iratio)) > 1e-9)
    throw InvalidParametersError("fine dt must divide the coarse dt");
  const double t_coarse = cfg_coarse.dt * static_cast<double>(cfg_coarse.n_steps);
  const double t_fine = cfg_fine.dt * static_cast<double>(cfg_fine.n_steps);
  if (std::abs(t_coarse - t_fine) > 1e-9 * std::max(t_coarse, 1.0))
    throw InvalidParametersError("both configs must cover the same total time");

  StepConfig cfg_finest = cfg_fine;
  cfg_finest.dt = cfg_fine.dt / static_cast<double>(iratio);
  cfg_finest.n_steps = cfg_fine.n_steps * iratio;

  auto final_of = [&](const StepConfig& cfg) {
    StepConfig c = cfg;
    c.snapshot_stride = c.n_steps;
    return evolve(spec, v0, c).final_field();
  };
  const ComplexField u_c = final_of(cfg_coarse);
  const ComplexField u_f = final_of(cfg_fine);
  const ComplexField u_ff = final_of(cfg_finest);

  auto l2_gap = [](const ComplexField& x, const ComplexField& y) {
    ComplexField d(x.grid);
    parallel_for(d.size(), [&](std::size_t j) { d[j] = x[j] - y[j]; });
    return lp_norm(d, 2.0);
  };
  const double gap1 = l2_gap(u_c, u_f);
  const double gap2 = l2_gap(u_f, u_ff);

  UniquenessProbe probe;
  probe.l2_gap_final = gap2;
  const double floor = 1e-13 * std::max(1.0, lp_norm(u_ff, 2.0));
  if (gap1 > floor && gap2 > floor)
    probe.order = std::log(gap1 / gap2) / std::log(static_cast<double>(iratio));
  return probe;
}

}  // namespace gpcq
