// Command-line front end: steady states, stability, variances, sweeps and
// reference-dataset reproduction for the squeezed-vacuum optomechanics
// library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "optosqueeze/optosqueeze.hpp"

namespace osq = optosqueeze;

namespace {

struct CliOptions {
  std::string config_file;
  std::string preset;
  bool hz = false;

  std::optional<double> wavelength, cavity_length, mass, kappa, omega_m,
      quality, power, temperature, squeeze_r, squeeze_phi, delta0;

  std::string coth;    // "", exact, hiT, zeroT
  double tol = 1e-7;
  std::string policy = "lowest";  // lowest | highest
  std::string output;             // "", csv, json
  int workers = 0;                // 0: env default

  // sweep / min
  std::string axis = "delta0";
  std::optional<double> sweep_from, sweep_to;
  int sweep_points = 400;
  std::string which = "varP";

  // stability-map
  std::optional<double> map_delta0_from, map_delta0_to;
  int map_delta0_points = 41;
  std::optional<double> map_power_from, map_power_to;
  int map_power_points = 11;

  // reproduce
  int figure = 0;  // 0: all
};

void add_common_options(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_file, "flat key = value config file");
  cmd->add_option("--preset", o.preset,
                  "built-in parameter set (groeblacher)");
  cmd->add_flag("--hz", o.hz,
                "interpret --kappa/--omega-m/--delta0 flag values as Hz "
                "(applies the 2*pi factor)");
  cmd->add_option("--wavelength", o.wavelength, "laser wavelength [m]");
  cmd->add_option("--cavity-length", o.cavity_length, "cavity length [m]");
  cmd->add_option("--mass", o.mass, "effective mirror mass [kg]");
  cmd->add_option("--kappa", o.kappa, "cavity amplitude decay rate [rad/s]");
  cmd->add_option("--omega-m", o.omega_m, "mechanical frequency [rad/s]");
  cmd->add_option("--quality", o.quality, "mechanical quality factor");
  cmd->add_option("--power,--P,-P", o.power, "laser power [W]");
  cmd->add_option("--temperature,--T,-T", o.temperature, "temperature [K]");
  cmd->add_option("--r", o.squeeze_r, "input squeezing magnitude");
  cmd->add_option("--phi", o.squeeze_phi, "input squeezing phase [rad]");
  cmd->add_option("--delta0", o.delta0, "bare detuning [rad/s]");
  cmd->add_option("--coth", o.coth, "thermal kernel model: exact|hiT|zeroT")
      ->check(CLI::IsMember({"exact", "hiT", "zeroT"}));
  cmd->add_option("--tol", o.tol, "quadrature relative tolerance")
      ->capture_default_str();
  cmd->add_option("--policy", o.policy, "branch policy: lowest|highest")
      ->check(CLI::IsMember({"lowest", "highest"}));
  cmd->add_option("--output", o.output, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", o.workers,
                  "worker threads for sweeps (default: OPTOSQUEEZE_WORKERS)");
}

osq::RunConfig make_run_config(const CliOptions& o) {
  osq::RunConfig cfg;
  if (!o.preset.empty()) {
    if (o.preset != "groeblacher") {
      throw osq::ConfigError("preset", "unknown preset '" + o.preset + "'");
    }
    cfg.params = osq::groeblacher_preset();
  }
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) {
      throw osq::ConfigError("config", "cannot open '" + o.config_file + "'");
    }
    osq::apply_config_text(cfg.params, in);
  }
  const double angular = o.hz ? 2.0 * std::numbers::pi : 1.0;
  if (o.wavelength) cfg.params.wavelength_lambda = *o.wavelength;
  if (o.cavity_length) cfg.params.cavity_length_L = *o.cavity_length;
  if (o.mass) cfg.params.mass_m = *o.mass;
  if (o.kappa) cfg.params.kappa = *o.kappa * angular;
  if (o.omega_m) cfg.params.omega_m = *o.omega_m * angular;
  if (o.quality) cfg.params.quality_Q = *o.quality;
  if (o.power) cfg.params.laser_power_P = *o.power;
  if (o.temperature) cfg.params.temperature_T = *o.temperature;
  if (o.squeeze_r) cfg.params.squeeze_r = *o.squeeze_r;
  if (o.squeeze_phi) cfg.params.squeeze_phi = *o.squeeze_phi;
  if (o.delta0) cfg.params.detuning_Delta0 = *o.delta0 * angular;

  if (o.coth == "exact") cfg.coth = osq::CothModel{osq::CothModel::Variant::exact};
  if (o.coth == "hiT") cfg.coth = osq::CothModel{osq::CothModel::Variant::high_t_approx};
  if (o.coth == "zeroT") cfg.coth = osq::CothModel{osq::CothModel::Variant::zero_t};
  cfg.tol = o.tol;
  cfg.branch_policy = o.policy == "highest"
                          ? osq::BranchPolicy::highest_qs_stable
                          : osq::BranchPolicy::lowest_qs_stable;
  cfg.workers = o.workers > 0 ? o.workers : osq::default_workers_from_env();
  if (o.output == "csv") cfg.output = osq::OutputFormat::csv;
  if (o.output == "json") cfg.output = osq::OutputFormat::json;
  return cfg;
}

osq::CothModel coth_for(const osq::RunConfig& cfg) {
  return cfg.coth.value_or(
      osq::CothModel::for_temperature(cfg.params.temperature_T));
}

std::string opt_number(const std::optional<double>& v) {
  return v ? osq::format_g12(*v) : std::string();
}

int cmd_steady(const CliOptions& o, bool csv_default) {
  const osq::RunConfig cfg = make_run_config(o);
  const osq::DerivedParams d = osq::derive_params(cfg.params);
  const auto branches =
      osq::solve_steady_state(d, cfg.params.detuning_Delta0);
  const bool csv = o.output.empty() ? csv_default
                                    : cfg.output == osq::OutputFormat::csv;
  if (csv) {
    std::cout << "delta0,root_index,Q_s,Delta,re_cs,im_cs,photon_number,stable\n";
    for (const auto& b : branches) {
      std::cout << osq::csv_row({osq::format_g12(cfg.params.detuning_Delta0),
                                 std::to_string(b.index),
                                 osq::format_g12(b.Qs),
                                 osq::format_g12(b.Delta),
                                 osq::format_g12(b.cs.real()),
                                 osq::format_g12(b.cs.imag()),
                                 osq::format_g12(b.photon_number),
                                 b.stable ? "true" : "false"})
                << "\n";
    }
  } else {
    std::cout << "[";
    for (std::size_t k = 0; k < branches.size(); ++k) {
      const auto& b = branches[k];
      if (k > 0) std::cout << ",";
      std::cout << osq::json_object(
          {{"delta0", osq::format_g12(cfg.params.detuning_Delta0)},
           {"root_index", std::to_string(b.index)},
           {"Q_s", osq::format_g12(b.Qs)},
           {"Delta", osq::format_g12(b.Delta)},
           {"re_cs", osq::format_g12(b.cs.real())},
           {"im_cs", osq::format_g12(b.cs.imag())},
           {"photon_number", osq::format_g12(b.photon_number)},
           {"residual", osq::format_g12(b.residual)},
           {"degenerate", osq::json_bool(b.degenerate)},
           {"stable", osq::json_bool(b.stable)}});
    }
    std::cout << "]\n";
  }
  return 0;
}

int cmd_stability(const CliOptions& o) {
  const osq::RunConfig cfg = make_run_config(o);
  const osq::DerivedParams d = osq::derive_params(cfg.params);
  const auto branches =
      osq::solve_steady_state(d, cfg.params.detuning_Delta0);
  // Report the branch the policy would pick; else the least unstable root.
  const osq::SteadyBranch* b = nullptr;
  try {
    b = &osq::select_branch(branches, cfg.branch_policy);
  } catch (const osq::NoStableBranchError&) {
    b = &branches.front();
  }
  osq::StabilityVerdict v = b->verdict;
  v.max_eig_real = osq::eigenvalue_check(osq::build_drift_matrix(d, *b));
  std::cout << osq::json_object(
                   {{"delta0", osq::format_g12(cfg.params.detuning_Delta0)},
                    {"root_index", std::to_string(b->index)},
                    {"Q_s", osq::format_g12(b->Qs)},
                    {"stable", osq::json_bool(v.stable)},
                    {"marginal", osq::json_bool(v.marginal)},
                    {"rh_margin_1", osq::format_g12(v.rh_margin_1)},
                    {"rh_margin_2", osq::format_g12(v.rh_margin_2)},
                    {"max_eig_real", osq::format_g12(v.max_eig_real)}})
            << "\n";
  return 0;
}

int cmd_stability_map(const CliOptions& o) {
  const osq::RunConfig cfg = make_run_config(o);
  const double wm = cfg.params.omega_m;
  const double d_from = o.map_delta0_from.value_or(0.1 * wm);
  const double d_to = o.map_delta0_to.value_or(3.0 * wm);
  const double p_from = o.map_power_from.value_or(0.1 * cfg.params.laser_power_P);
  const double p_to = o.map_power_to.value_or(2.0 * cfg.params.laser_power_P);
  std::cout << "delta0,power,root_count,any_stable\n";
  for (int ip = 0; ip < o.map_power_points; ++ip) {
    osq::SystemParams p = cfg.params;
    p.laser_power_P =
        p_from + (p_to - p_from) * ip / std::max(1, o.map_power_points - 1);
    const osq::DerivedParams d = osq::derive_params(p);
    for (int id = 0; id < o.map_delta0_points; ++id) {
      const double delta0 =
          d_from + (d_to - d_from) * id / std::max(1, o.map_delta0_points - 1);
      const auto branches = osq::solve_steady_state(d, delta0);
      bool any = false;
      for (const auto& b : branches) any = any || b.stable;
      std::cout << osq::csv_row({osq::format_g12(delta0),
                                 osq::format_g12(p.laser_power_P),
                                 std::to_string(branches.size()),
                                 any ? "true" : "false"})
                << "\n";
    }
  }
  return 0;
}

int cmd_variance(const CliOptions& o) {
  const osq::RunConfig cfg = make_run_config(o);
  const osq::DerivedParams d = osq::derive_params(cfg.params);
  const auto branches =
      osq::solve_steady_state(d, cfg.params.detuning_Delta0);
  const auto& b = osq::select_branch(branches, cfg.branch_policy);
  const osq::VarianceResult v = osq::variance_QP(d, b, coth_for(cfg), cfg.tol);
  std::cout << osq::json_object(
                   {{"delta0", osq::format_g12(cfg.params.detuning_Delta0)},
                    {"branch_index", std::to_string(b.index)},
                    {"branch_Qs", osq::format_g12(b.Qs)},
                    {"varQ", osq::format_g12(v.varQ)},
                    {"varP", osq::format_g12(v.varP)},
                    {"imag_residual_Q", osq::format_g12(v.imag_residual_Q)},
                    {"imag_residual_P", osq::format_g12(v.imag_residual_P)},
                    {"quad_error_Q", osq::format_g12(v.quad_error_Q)},
                    {"quad_error_P", osq::format_g12(v.quad_error_P)},
                    {"trunc_error_Q", osq::format_g12(v.trunc_error_Q)},
                    {"trunc_error_P", osq::format_g12(v.trunc_error_P)},
                    {"omega_max", osq::format_g12(v.omega_max)},
                    {"evaluations", std::to_string(v.evaluations)}})
            << "\n";
  return 0;
}

osq::SweepSpec make_sweep_spec(const CliOptions& o, const osq::RunConfig& cfg) {
  osq::SweepSpec spec;
  if (o.axis == "delta0") spec.axis = osq::SweepAxis::detuning0;
  else if (o.axis == "r") spec.axis = osq::SweepAxis::squeeze_r;
  else if (o.axis == "T") spec.axis = osq::SweepAxis::temperature;
  else if (o.axis == "P") spec.axis = osq::SweepAxis::power;
  else throw osq::ConfigError("axis", "unknown axis '" + o.axis + "'");
  double from = o.sweep_from.value_or(
      spec.axis == osq::SweepAxis::detuning0 ? 0.1 * cfg.params.omega_m : 0.0);
  double to = o.sweep_to.value_or(
      spec.axis == osq::SweepAxis::detuning0 ? 3.0 * cfg.params.omega_m : 0.0);
  if (!(from < to)) {
    throw osq::ConfigError("from/to", "need --from < --to for this axis");
  }
  const int n = std::max(2, o.sweep_points);
  spec.grid.reserve(n);
  for (int k = 0; k < n; ++k) {
    spec.grid.push_back(from + (to - from) * k / (n - 1));
  }
  spec.fixed = cfg.params;
  spec.branch_policy = cfg.branch_policy;
  spec.coth = cfg.coth;
  spec.tol = cfg.tol;
  spec.workers = cfg.workers;
  return spec;
}

int cmd_sweep(const CliOptions& o) {
  const osq::RunConfig cfg = make_run_config(o);
  const osq::SweepSpec spec = make_sweep_spec(o, cfg);
  const auto records = osq::run_sweep(spec);
  const bool csv =
      o.output.empty() ? true : cfg.output == osq::OutputFormat::csv;
  if (csv) {
    std::cout << "coordinate,Q_s,stable,varQ,varP\n";
    for (const auto& r : records) {
      std::cout << osq::csv_row({osq::format_g12(r.coordinate),
                                 opt_number(r.branch_Qs),
                                 r.stable ? "true" : "false",
                                 opt_number(r.varQ), opt_number(r.varP)})
                << "\n";
    }
  } else {
    for (const auto& r : records) {
      std::cout << osq::json_object(
                       {{"coordinate", osq::format_g12(r.coordinate)},
                        {"Q_s", r.branch_Qs ? osq::format_g12(*r.branch_Qs)
                                            : osq::json_null()},
                        {"stable", osq::json_bool(r.stable)},
                        {"varQ", r.varQ ? osq::format_g12(*r.varQ)
                                        : osq::json_null()},
                        {"varP", r.varP ? osq::format_g12(*r.varP)
                                        : osq::json_null()}})
                << "\n";
    }
  }
  return 0;
}

int cmd_min(const CliOptions& o) {
  const osq::RunConfig cfg = make_run_config(o);
  const osq::SweepSpec spec = make_sweep_spec(o, cfg);
  const osq::VarianceKind kind =
      o.which == "varQ" ? osq::VarianceKind::varQ : osq::VarianceKind::varP;
  const osq::MinSearchResult m = osq::find_min_variance(spec, kind);
  std::cout << osq::json_object({{"which", osq::json_string(o.which)},
                                 {"coordinate", osq::format_g12(m.coordinate)},
                                 {"value", osq::format_g12(m.value)}})
            << "\n";
  return 0;
}

int cmd_reproduce(const CliOptions& o) {
  osq::RunConfig cfg_in = make_run_config(o);
  if (o.preset.empty() && o.config_file.empty()) {
    // Reference datasets are defined for the built-in cavity parameters.
    CliOptions with_preset = o;
    with_preset.preset = "groeblacher";
    cfg_in = make_run_config(with_preset);
  }
  bool all_ok = true;
  std::printf("%-6s %-8s %-12s %-14s %-10s %s\n", "figure", "label",
              "expected", "computed", "rel_err", "status");
  for (const auto& fig : osq::reference_figures()) {
    if (o.figure != 0 && o.figure != fig.figure) continue;
    for (const auto& rc : fig.cases) {
      osq::SystemParams p = cfg_in.params;
      p.laser_power_P = fig.power;
      p.squeeze_r = rc.squeeze_r;
      p.temperature_T = rc.temperature;
      osq::SweepSpec spec;
      spec.axis = osq::SweepAxis::detuning0;
      const int n = osq::kReferenceSweepPoints;
      spec.grid.reserve(n);
      for (int k = 0; k < n; ++k) {
        spec.grid.push_back(
            (osq::kReferenceSweepLo +
             (osq::kReferenceSweepHi - osq::kReferenceSweepLo) * k / (n - 1)) *
            p.omega_m);
      }
      spec.fixed = p;
      spec.branch_policy = cfg_in.branch_policy;
      spec.coth = cfg_in.coth;
      spec.tol = cfg_in.tol;
      spec.workers = cfg_in.workers;
      const osq::MinSearchResult m =
          osq::find_min_variance(spec, osq::VarianceKind::varP);
      const double rel =
          (m.value - rc.expected_min_varP) / rc.expected_min_varP;
      const bool ok = std::abs(rel) <= osq::kReferenceRelTol;
      all_ok = all_ok && ok;
      std::printf("%-6d %-8s %-12.6g %-14.8g %+-10.2e %s\n", fig.figure,
                  rc.label, rc.expected_min_varP, m.value, rel,
                  ok ? "PASS" : "FAIL");
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Squeezing of a driven optomechanical mirror fed with broadband "
      "squeezed vacuum: steady states, stability, interaction-picture "
      "variances, sweeps."};
  app.require_subcommand(1);
  CliOptions o;

  CLI::App* steady = app.add_subcommand("steady", "all steady-state branches");
  CLI::App* stability =
      app.add_subcommand("stability", "stability verdict and margins");
  CLI::App* map = app.add_subcommand("stability-map",
                                     "stability grid over (delta0, power)");
  CLI::App* variance =
      app.add_subcommand("variance", "interaction-picture variances");
  CLI::App* sweep = app.add_subcommand("sweep", "variance sweep over an axis");
  CLI::App* minimum =
      app.add_subcommand("min", "refined variance minimum over an axis");
  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "check the built-in reference figure datasets");

  for (CLI::App* cmd :
       {steady, stability, map, variance, sweep, minimum, reproduce}) {
    add_common_options(cmd, o);
  }
  for (CLI::App* cmd : {sweep, minimum}) {
    cmd->add_option("--axis", o.axis, "sweep axis: delta0|r|T|P")
        ->check(CLI::IsMember({"delta0", "r", "T", "P"}));
    cmd->add_option("--from", o.sweep_from, "axis start (axis units)");
    cmd->add_option("--to", o.sweep_to, "axis end (axis units)");
    cmd->add_option("--points", o.sweep_points, "grid size")
        ->capture_default_str();
  }
  minimum->add_option("--which", o.which, "variance to minimize: varQ|varP")
      ->check(CLI::IsMember({"varQ", "varP"}));
  map->add_option("--delta0-from", o.map_delta0_from, "map delta0 start [rad/s]");
  map->add_option("--delta0-to", o.map_delta0_to, "map delta0 end [rad/s]");
  map->add_option("--delta0-points", o.map_delta0_points, "map delta0 grid")
      ->capture_default_str();
  map->add_option("--power-from", o.map_power_from, "map power start [W]");
  map->add_option("--power-to", o.map_power_to, "map power end [W]");
  map->add_option("--power-points", o.map_power_points, "map power grid")
      ->capture_default_str();
  reproduce->add_option("--figure", o.figure,
                        "restrict to one figure dataset (2..5; default all)")
      ->check(CLI::Range(2, 5));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (steady->parsed()) return cmd_steady(o, /*csv_default=*/false);
    if (stability->parsed()) return cmd_stability(o);
    if (map->parsed()) return cmd_stability_map(o);
    if (variance->parsed()) return cmd_variance(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (minimum->parsed()) return cmd_min(o);
    if (reproduce->parsed()) return cmd_reproduce(o);
  } catch (const osq::ValidationError& e) {
    std::cerr << "error: "
              << osq::json_object(
                     {{"type", osq::json_string("validation")},
                      {"field", osq::json_string(e.field())},
                      {"message", osq::json_string(e.what())}})
              << "\n";
    return 2;
  } catch (const osq::ConfigError& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("config")},
                                   {"key", osq::json_string(e.key())},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 2;
  } catch (const osq::NoStableBranchError& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("no-stable-branch")},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 3;
  } catch (const osq::UnstableBranchError& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("unstable-branch")},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 3;
  } catch (const osq::TailNotConvergedError& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("tail-not-converged")},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 3;
  } catch (const osq::QuadratureError& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("quadrature")},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: "
              << osq::json_object({{"type", osq::json_string("internal")},
                                   {"message", osq::json_string(e.what())}})
              << "\n";
    return 3;
  }
  return 0;
}
