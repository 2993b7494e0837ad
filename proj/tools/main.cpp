#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpcq/gpcq.hpp"

namespace {

namespace fs = std::filesystem;
using gpcq::Json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitGuard = 2;

struct GlobalOpts {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

std::string joined(const GlobalOpts& g, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(g.out_dir) / path).string();
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

gpcq::ComplexField make_initial(const gpcq::RunConfig& cfg) {
  gpcq::InitialData data = cfg.initial_data;
  return gpcq::generate_initial(data, cfg.grid);
}

Json config_echo(const std::string& config_path) {
  std::ifstream in(config_path);
  Json j;
  in >> j;
  return j;
}

int run_simulate(const std::string& config_path, const GlobalOpts& g) {
  gpcq::RunConfig cfg = gpcq::load_config(config_path);
  if (g.seed) cfg.seed = *g.seed;
  const gpcq::EquationSpec spec = cfg.resolved_spec();
  const gpcq::ComplexField v0 = make_initial(cfg);

  const auto t_start = std::chrono::steady_clock::now();
  gpcq::Trajectory traj;
  bool guard_tripped = false;
  try {
    traj = gpcq::evolve(spec, v0, cfg.stepping);
  } catch (const gpcq::BlowUpError& e) {
    traj = e.partial;
    guard_tripped = true;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (!cfg.csv_path.empty()) gpcq::write_diagnostics_csv(joined(g, cfg.csv_path), traj);
  if (!cfg.trajectory_path.empty()) gpcq::save_trajectory(joined(g, cfg.trajectory_path), traj);

  if (!cfg.json_path.empty()) {
    const auto& diag = traj.diagnostics;
    double drift = 0.0;
    const double e0 = diag.front().energy.energy;
    for (const auto& d : diag)
      drift = std::max(drift, std::abs(d.energy.energy - e0) /
                                  std::max(std::abs(e0), 1e-300));
    Json gronwall = nullptr;
    if (spec.variant == gpcq::Variant::CQ3 && traj.size() >= 3) {
      const double c1 = gpcq::gronwall_rate(spec.gamma());
      double margin = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double dm = (diag[i + 1].energy.m_value - diag[i - 1].energy.m_value) /
                          (traj.times[i + 1] - traj.times[i - 1]);
        margin = std::min(margin, c1 * diag[i].energy.m_value - dm);
      }
      gronwall = Json{{"c1", c1}, {"min_margin", margin}};
    }
    const auto& last = diag.back();
    Json summary = {
        {"config", config_echo(config_path)},
        {"status", guard_tripped ? "blowup_guard" : "ok"},
        {"final_time", traj.times.back()},
        {"final_norms",
         {{"h1dot", last.h1dot},
          {"l2", last.l2},
          {"l4", last.l4},
          {"l6", last.l6},
          {"linf", last.linf},
          {"boundary_shell_max", last.boundary_shell_max}}},
        {"energy_initial", e0},
        {"energy_final", last.energy.energy},
        {"max_energy_drift", drift},
        {"gronwall", gronwall},
        {"wall_seconds", wall},
    };
    write_json(joined(g, cfg.json_path), summary);
  }
  return guard_tripped ? kExitGuard : kExitOk;
}

int run_verify(const std::string& suite, long samples, std::uint64_t seed, const GlobalOpts& g) {
  long violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  const gpcq::CounterRng rng(seed);

  if (suite == "identities") {
    // Factored-form identities of the two excitation nonlinearities.
    for (long i = 0; i < samples; ++i) {
      const std::uint64_t c = static_cast<std::uint64_t>(i);
      const double mag = 100.0 * rng.uniform(4 * c);
      const double ang = 2.0 * gpcq::kPi * rng.uniform(4 * c + 1);
      const gpcq::Complex z = mag * gpcq::Complex{std::cos(ang), std::sin(ang)};
      const double gamma = std::min(1.0 - 1e-9, std::max(1e-9, rng.uniform(4 * c + 2)));
      const gpcq::Complex u = 1.0 + z;
      const double q = std::norm(u) - 1.0;
      const double scale3 = std::pow(1.0 + mag, 3);
      const double scale5 = std::pow(1.0 + mag, 5);

      const gpcq::Complex lhs_gp = gpcq::nonlinearity(gpcq::EquationSpec::gp4(), z);
      const gpcq::Complex rhs_gp = q * u;
      const double err_gp = std::abs(lhs_gp - rhs_gp) / scale3;

      const gpcq::Complex lhs_cq = std::norm(z) * std::norm(z) * z + gpcq::remainder_R(z, gamma);
      const gpcq::Complex rhs_cq = q * (q + gamma) * u;
      const double err_cq = std::abs(lhs_cq - rhs_cq) / scale5;

      const double err = std::max(err_gp, err_cq);
      if (err > 1e-12) ++violations;
      worst_slack = std::min(worst_slack, 1e-12 - err);
    }
  } else if (suite == "coercivity") {
    for (long i = 0; i < samples; ++i) {
      const std::uint64_t c = static_cast<std::uint64_t>(i);
      const double mag = std::pow(10.0, rng.uniform(4 * c, -3.0, 3.0));
      const double ang = 2.0 * gpcq::kPi * rng.uniform(4 * c + 1);
      const gpcq::Complex z = mag * gpcq::Complex{std::cos(ang), std::sin(ang)};
      const double gamma = std::min(1.0 - 1e-9, std::max(1e-9, rng.uniform(4 * c + 2)));
      const auto pc = gpcq::coercivity_pointwise(z, gamma);
      if (!pc.quartic_holds || !pc.sextic_holds) ++violations;
      worst_slack = std::min(worst_slack, std::min(pc.slack_quartic, pc.slack_sextic));
    }
  } else if (suite == "strichartz") {
    for (int n : {3, 4}) {
      for (const gpcq::LebesguePair& p : gpcq::admissible_pairs(n)) {
        if (!gpcq::is_admissible(p.q, p.r, n)) ++violations;
        // Perturbing the finite exponent must break the scaling identity.
        const gpcq::Rational delta = gpcq::Rational::of(1, 100);
        if (!p.q.is_inf()) {
          if (gpcq::is_admissible(p.q + delta, p.r, n)) ++violations;
        } else {
          if (gpcq::is_admissible(p.q, p.r + delta, n)) ++violations;
        }
      }
    }
    if (gpcq::is_admissible(gpcq::Rational::of(2, 1), gpcq::Rational::infinity(), 2)) ++violations;
    worst_slack = violations == 0 ? 0.0 : -1.0;
  } else {
    std::cerr << "unknown suite '" << suite << "'\n";
    return kExitConfig;
  }

  const Json report = {
      {"suite", suite}, {"samples", samples}, {"violations", violations}, {"worst_slack", worst_slack}};
  write_json(joined(g, "verify_" + suite + ".json"), report);
  std::cout << report.dump(2) << '\n';
  return violations == 0 ? kExitOk : kExitGuard;
}

int run_compare(const std::string& config_path, const GlobalOpts& g) {
  gpcq::RunConfig cfg = gpcq::load_config(config_path);
  if (!cfg.has_comparison) throw gpcq::ConfigError("comparison", "missing required key");
  const gpcq::EquationSpec spec = cfg.resolved_spec();
  const gpcq::ComplexField base = make_initial(cfg);

  const auto table = gpcq::scaling_study(spec, base, cfg.comparison_amplitudes, cfg.stepping);
  Json rows = Json::array();
  for (const auto& [amp, rep] : table) {
    Json row = gpcq::report_to_json(rep);
    row["amplitude"] = amp;
    rows.push_back(row);
  }
  const Json out = {{"config", config_echo(config_path)}, {"table", rows}};
  const std::string path = cfg.json_path.empty() ? "compare.json" : cfg.json_path;
  write_json(joined(g, path), out);
  std::cout << out["table"].dump(2) << '\n';
  return kExitOk;
}

int run_partition(const std::string& config_path, const GlobalOpts& g) {
  gpcq::RunConfig cfg = gpcq::load_config(config_path);
  if (!cfg.has_partition) throw gpcq::ConfigError("partition", "missing required key");
  gpcq::Trajectory traj;
  if (!cfg.partition_trajectory_path.empty()) {
    traj = gpcq::load_trajectory(cfg.partition_trajectory_path);
  } else {
    traj = gpcq::evolve(cfg.resolved_spec(), make_initial(cfg), cfg.stepping);
  }
  const gpcq::Partition part = gpcq::partition_by_x1(traj, cfg.partition_eta);
  const Json out = {{"eta", part.eta},
                    {"J", part.breakpoints.size()},
                    {"breakpoints", part.breakpoints},
                    {"chunk_x1", part.chunk_x1}};
  const std::string path = cfg.json_path.empty() ? "partition.json" : cfg.json_path;
  write_json(joined(g, path), out);
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_rescale(double a1, double a3, double a5) {
  gpcq::GeneralCQParams p{a1, a3, a5};
  gpcq::ReducedCQ red;
  try {
    red = gpcq::reduce_general(p);
  } catch (const gpcq::NoRealRootsError&) {
    std::cerr << "discriminant nonpositive\n";
    return kExitConfig;
  }
  const Json out = {{"r0_sq", red.r0_sq},
                    {"r1_sq_reduced", red.r1_sq_reduced},
                    {"gamma", 1.0 - red.r1_sq_reduced},
                    {"time_scale", red.time_scale},
                    {"space_scale", red.space_scale},
                    {"amplitude_scale", red.amplitude_scale}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulator and verification toolkit for "
               "Gross-Pitaevskii / cubic-quintic NLS excitations on a periodic box"};
  app.require_subcommand(1);

  GlobalOpts g;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  app.add_option("--out-dir", g.out_dir, "directory for output files");
  app.add_option("--threads", g.threads, "worker threads (speed only, never results)");
  auto* seed_opt = app.add_option("--seed", seed_flag, "override the config seed");

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "run an evolution and write diagnostics");
  sim->add_option("--config", config_path, "JSON config file")->required();

  std::string suite;
  long samples = 100000;
  std::uint64_t verify_seed = 1;
  auto* ver = app.add_subcommand("verify", "run a property suite");
  ver->add_option("suite", suite, "identities | coercivity | strichartz")->required();
  ver->add_option("--samples", samples, "sample count");

  auto* cmp = app.add_subcommand("compare", "paired runs against the energy-critical law");
  cmp->add_option("--config", config_path, "JSON config file")->required();

  auto* part = app.add_subcommand("partition", "partition a trajectory by X^1 budget");
  part->add_option("--config", config_path, "JSON config file")->required();

  double a1 = 0, a3 = 0, a5 = 0;
  auto* res = app.add_subcommand("rescale", "reduce general cubic-quintic coefficients");
  res->add_option("alpha1", a1)->required();
  res->add_option("alpha3", a3)->required();
  res->add_option("alpha5", a5)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }
  seed_set = seed_opt->count() > 0;
  if (seed_set) g.seed = seed_flag;
  gpcq::set_thread_count(static_cast<int>(g.threads));
  if (seed_set) verify_seed = seed_flag;

  try {
    if (sim->parsed()) return run_simulate(config_path, g);
    if (ver->parsed()) return run_verify(suite, samples, verify_seed, g);
    if (cmp->parsed()) return run_compare(config_path, g);
    if (part->parsed()) return run_partition(config_path, g);
    if (res->parsed()) return run_rescale(a1, a3, a5);
  } catch (const gpcq::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const gpcq::InvalidParametersError& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gpcq::BlowUpError& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const gpcq::NumericalFailureError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
