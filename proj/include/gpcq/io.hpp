#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpcq/energy.hpp"
#include "gpcq/equations.hpp"
#include "gpcq/errors.hpp"
#include "gpcq/grid.hpp"
#include "gpcq/initial_data.hpp"
#include "gpcq/integrator.hpp"
#include "gpcq/perturbation.hpp"

namespace gpcq {

using Json = nlohmann::json;

struct RunConfig {
  enum class EquationKind { GP4, CQ3, EC, GeneralCQ };
  EquationKind equation_kind = EquationKind::GP4;
  double gamma = 0.0;                   // CQ3
  int ec_dim = 4;                       // EC
  GeneralCQParams general{};            // GeneralCQ (reduced before running)
  Grid grid;
  StepConfig stepping;
  double total_time = 0.0;
  InitialData initial_data;
  std::string csv_path;
  std::string json_path;
  std::string trajectory_path;
  std::uint64_t seed = 0;

  // comparison block (cmd_compare)
  bool has_comparison = false;
  std::vector<double> comparison_amplitudes;

  // partition block (cmd_partition)
  bool has_partition = false;
  double partition_eta = 0.0;
  std::string partition_trajectory_path;

  EquationSpec resolved_spec() const {
    switch (equation_kind) {
      case EquationKind::GP4:
        return EquationSpec::gp4();
      case EquationKind::CQ3:
        return EquationSpec::cq3(1.0 - gamma);
      case EquationKind::EC:
        return EquationSpec::energy_critical(ec_dim);
      case EquationKind::GeneralCQ:
        return EquationSpec::cq3(reduce_general(general).r1_sq_reduced);
    }
    throw ConfigError("equation", "unknown equation kind");
  }
};

namespace detail {

template <class T>
T require_key(const Json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ConfigError(path + key, "missing required key");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(path + key, "wrong type");
  }
}

inline Complex complex_of(const Json& j, const std::string& path, const std::string& key) {
  const Json& v = j.at(key);
  if (v.is_number()) return Complex{v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex{v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path + key, "expected a number or [re, im]");
}

}  // namespace detail

inline RunConfig parse_config(const Json& j) {
  RunConfig cfg;

  const Json eq = detail::require_key<Json>(j, "", "equation");
  const std::string type = detail::require_key<std::string>(eq, "equation.", "type");
  if (type == "GP4") {
    cfg.equation_kind = RunConfig::EquationKind::GP4;
  } else if (type == "CQ3") {
    cfg.equation_kind = RunConfig::EquationKind::CQ3;
    cfg.gamma = detail::require_key<double>(eq, "equation.", "gamma");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0))
      throw ConfigError("equation.gamma", "must lie in (0,1)");
  } else if (type == "EC") {
    cfg.equation_kind = RunConfig::EquationKind::EC;
    cfg.ec_dim = detail::require_key<int>(eq, "equation.", "n");
  } else if (type == "GENERAL_CQ") {
    cfg.equation_kind = RunConfig::EquationKind::GeneralCQ;
    cfg.general.alpha1 = detail::require_key<double>(eq, "equation.", "alpha1");
    cfg.general.alpha3 = detail::require_key<double>(eq, "equation.", "alpha3");
    cfg.general.alpha5 = detail::require_key<double>(eq, "equation.", "alpha5");
  } else {
    throw ConfigError("equation.type", "expected GP4, CQ3, EC or GENERAL_CQ");
  }

  const Json grid = detail::require_key<Json>(j, "", "grid");
  const int n = detail::require_key<int>(grid, "grid.", "n");
  const int N = detail::require_key<int>(grid, "grid.", "N");
  const double L = detail::require_key<double>(grid, "grid.", "L");
  try {
    cfg.grid = Grid(n, N, L);
  } catch (const InvalidParametersError& e) {
    throw ConfigError("grid", e.what());
  }

  const Json step = detail::require_key<Json>(j, "", "stepping");
  cfg.stepping.dt = detail::require_key<double>(step, "stepping.", "dt");
  cfg.total_time = detail::require_key<double>(step, "stepping.", "T");
  if (!(cfg.stepping.dt > 0.0)) throw ConfigError("stepping.dt", "must be positive");
  if (!(cfg.total_time > 0.0)) throw ConfigError("stepping.T", "must be positive");
  cfg.stepping.n_steps = std::lround(cfg.total_time / cfg.stepping.dt);
  if (cfg.stepping.n_steps < 1 ||
      std::abs(cfg.stepping.n_steps * cfg.stepping.dt - cfg.total_time) > 1e-9 * cfg.total_time)
    throw ConfigError("stepping.T", "must be an integer multiple of dt");
  if (step.contains("snapshot_stride"))
    cfg.stepping.snapshot_stride = detail::require_key<long>(step, "stepping.", "snapshot_stride");
  if (cfg.stepping.snapshot_stride < 1)
    throw ConfigError("stepping.snapshot_stride", "must be >= 1");
  if (step.contains("dealias"))
    cfg.stepping.dealias = detail::require_key<bool>(step, "stepping.", "dealias");

  const Json init = detail::require_key<Json>(j, "", "initial_data");
  const std::string kind = detail::require_key<std::string>(init, "initial_data.", "kind");
  if (kind == "constant") {
    cfg.initial_data.kind = InitialData::Kind::Constant;
    cfg.initial_data.constant_value = detail::complex_of(init, "initial_data.", "c");
  } else if (kind == "gaussian") {
    cfg.initial_data.kind = InitialData::Kind::Gaussian;
    cfg.initial_data.amplitude = detail::complex_of(init, "initial_data.", "amplitude");
    cfg.initial_data.sigma = detail::require_key<double>(init, "initial_data.", "sigma");
    if (init.contains("center"))
      cfg.initial_data.center = detail::require_key<std::vector<double>>(init, "initial_data.", "center");
  } else if (kind == "random_fourier") {
    cfg.initial_data.kind = InitialData::Kind::RandomFourier;
    cfg.initial_data.seed = detail::require_key<std::uint64_t>(init, "initial_data.", "seed");
    cfg.initial_data.decay_exponent =
        detail::require_key<double>(init, "initial_data.", "decay_exponent");
    cfg.initial_data.cutoff = detail::require_key<double>(init, "initial_data.", "cutoff");
  } else {
    throw ConfigError("initial_data.kind", "expected constant, gaussian or random_fourier");
  }

  if (j.contains("outputs")) {
    const Json out = j.at("outputs");
    if (out.contains("csv_path")) cfg.csv_path = out.at("csv_path").get<std::string>();
    if (out.contains("json_path")) cfg.json_path = out.at("json_path").get<std::string>();
    if (out.contains("trajectory_path"))
      cfg.trajectory_path = out.at("trajectory_path").get<std::string>();
  }
  if (j.contains("seed")) cfg.seed = detail::require_key<std::uint64_t>(j, "", "seed");

  if (j.contains("comparison")) {
    cfg.has_comparison = true;
    const Json cmp = j.at("comparison");
    cfg.comparison_amplitudes =
        detail::require_key<std::vector<double>>(cmp, "comparison.", "amplitudes");
  }
  if (j.contains("partition")) {
    cfg.has_partition = true;
    const Json part = j.at("partition");
    cfg.partition_eta = detail::require_key<double>(part, "partition.", "eta");
    if (part.contains("trajectory_path"))
      cfg.partition_trajectory_path = part.at("trajectory_path").get<std::string>();
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

// Fixed CSV format: '.' decimal point, ',' separator, header row, 17
// significant digits so every double round-trips exactly.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline void write_diagnostics_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,E,reL2sq,M,C0,h1dot,l2,l4,l6,linf,boundary_shell_max\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const SnapshotDiagnostics& d = traj.diagnostics[i];
    out << format_double(traj.times[i]) << ',' << format_double(d.energy.energy) << ','
        << format_double(d.energy.re_l2_sq) << ',' << format_double(d.energy.m_value) << ','
        << format_double(d.energy.c0) << ',' << format_double(d.h1dot) << ','
        << format_double(d.l2) << ',' << format_double(d.l4) << ',' << format_double(d.l6) << ','
        << format_double(d.linf) << ',' << format_double(d.boundary_shell_max) << '\n';
  }
}

inline void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path, "cannot open CSV output");
  write_diagnostics_csv(out, traj);
}

// Snapshot container: self-describing header then raw little-endian complex
// doubles per snapshot.
inline void save_trajectory(const std::string& path, const Trajectory& traj) {
  static_assert(std::endian::native == std::endian::little,
                "trajectory files are little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path, "cannot open trajectory output");
  const char magic[8] = {'G', 'P', 'C', 'Q', 'T', 'R', 'J', '1'};
  out.write(magic, 8);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  put_u32(static_cast<std::uint32_t>(traj.spec.variant));
  put_u32(static_cast<std::uint32_t>(traj.spec.dim));
  put_f64(traj.spec.r1_sq);
  put_u32(static_cast<std::uint32_t>(traj.grid.dim));
  put_u32(static_cast<std::uint32_t>(traj.grid.points_per_axis));
  put_f64(traj.grid.box_length);
  const std::uint64_t count = traj.size();
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put_f64(traj.times[i]);
    out.write(reinterpret_cast<const char*>(traj.snapshots[i].values.data()),
              static_cast<std::streamsize>(traj.snapshots[i].size() * sizeof(Complex)));
  }
}

inline Trajectory load_trajectory(const std::string& path, bool recompute_diagnostics = false) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open trajectory file");
  char magic[8];
  in.read(magic, 8);
  if (std::string(magic, 8) != "GPCQTRJ1") throw ConfigError(path, "bad trajectory magic");
  auto get_u32 = [&] {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_f64 = [&] {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  Trajectory traj;
  traj.spec.variant = static_cast<Variant>(get_u32());
  traj.spec.dim = static_cast<int>(get_u32());
  traj.spec.r1_sq = get_f64();
  const int dim = static_cast<int>(get_u32());
  const int N = static_cast<int>(get_u32());
  const double L = get_f64();
  traj.grid = Grid(dim, N, L);
  std::uint64_t count;
  in.read(reinterpret_cast<char*>(&count), 8);
  for (std::uint64_t i = 0; i < count; ++i) {
    traj.times.push_back(get_f64());
    ComplexField f(traj.grid);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.size() * sizeof(Complex)));
    if (!in) throw ConfigError(path, "truncated trajectory file");
    if (recompute_diagnostics)
      traj.diagnostics.push_back(detail::snapshot_diagnostics(f, traj.spec));
    traj.snapshots.push_back(std::move(f));
  }
  return traj;
}

inline Json report_to_json(const PerturbationReport& rep) {
  // The interface contract labels every ledger quantity by its number.
  Json quantities = {
      {"2.5", rep.L_value},   {"2.6", rep.E0_value},  {"2.7", rep.Eprime_value},
      {"2.8", rep.eps_free},  {"2.9", rep.eps_e},     {"2.10", rep.diff_crit},
      {"2.11", rep.diff_s1},  {"2.12", rep.w_s1},
  };
  Json legend = {
      {"2.5", "L: critical spacetime norm of the full run"},
      {"2.6", "E0: sup-in-time H1dot of the full run"},
      {"2.7", "Eprime: H1dot distance of the initial data"},
      {"2.8", "eps_free: critical norm of the free flow of the initial difference"},
      {"2.9", "eps_e: dual-norm proxy of the perturbation forcing"},
      {"2.10", "diff_crit: critical spacetime norm of the difference"},
      {"2.11", "diff_s1: finite-family S1 norm of the difference"},
      {"2.12", "w_s1: finite-family S1 norm of the comparison run"},
  };
  return Json{{"interval", {rep.interval_a, rep.interval_b}},
              {"quantities", quantities},
              {"legend", legend}};
}

}  // namespace gpcq
