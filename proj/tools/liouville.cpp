#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "liouville/io.hpp"
#include "liouville/solve.hpp"
#include "liouville/verify.hpp"

using namespace liouville;
namespace fs = std::filesystem;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitSolver = 2;
constexpr int kExitValidation = 3;
constexpr int kExitIo = 4;
constexpr int kExitOracle = 5;

constexpr double kCrossCheckLimit = 1e-3;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::TopologyViolation:
    case ErrorCode::InvalidWeight:
    case ErrorCode::CoincidentSources:
    case ErrorCode::InvalidConfiguration:
    case ErrorCode::ParabolicMassExcess:
    case ErrorCode::Parse:
      return kExitValidation;
    case ErrorCode::Io:
      return kExitIo;
    default:
      return kExitSolver;
  }
}

struct Overrides {
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<double> damping;
  std::optional<std::uint64_t> seed;

  void add(CLI::App* app) {
    app->add_option("--grid", grid, "cells per axis");
    app->add_option("--tol", tol, "solver tolerance");
    app->add_option("--damping", damping, "initial Picard relaxation");
    app->add_option("--seed", seed, "seed for the uniqueness probe starts");
  }
  [[nodiscard]] SolverSettings apply(SolverSettings s) const {
    if (grid) s.grid = *grid;
    if (tol) s.tolerance = *tol;
    if (damping) s.damping = *damping;
    if (seed) s.seed = *seed;
    return s;
  }
};

struct Run {
  SourceConfiguration config;
  SolverSettings settings;
};

Run load_run(const fs::path& path, const Overrides& over) {
  const json j = io::read_json(path);
  // a manifest carries the config and the resolved settings
  const json& cfg = j.contains("config") && j["config"].is_object() ? j["config"] : j;
  Run r;
  r.config = io::config_from_json(cfg);
  if (cfg.contains("settings")) r.settings = io::settings_from_json(cfg["settings"]);
  if (j.contains("settings") && &cfg != &j) r.settings = io::settings_from_json(j["settings"]);
  r.settings = over.apply(r.settings);
  validate_topology(r.config);
  validate_settings(r.settings);
  return r;
}

std::string joined(int argc, char** argv) {
  std::string s;
  for (int k = 0; k < argc; ++k) s += (k ? " " : "") + std::string(argv[k]);
  return s;
}

void write_manifest(const fs::path& out, const std::string& command, const std::string& config_path, const Run& run,
                    const std::string& method, double seconds, int status) {
  json cfg = io::to_json(run.config);
  io::write_json_atomic(out / "manifest.json", {{"command", command},
                                                {"config_path", config_path},
                                                {"config", cfg},
                                                {"settings", io::to_json(run.settings)},
                                                {"method", method},
                                                {"output_directory", out.string()},
                                                {"tool_version", LIOUVILLE_VERSION},
                                                {"wall_seconds", seconds},
                                                {"exit_status", status}});
}

json meta_json(const Solution& sol) {
  return {{"method", io::to_string(sol.method)}, {"c1", sol.c1}, {"diagnostics", io::to_json(sol.diagnostics)}};
}

// solve, write grids and (optionally) the report; returns the exit status
int solve_into(const Run& run, const std::string& method_name, bool run_verify, int probe, const fs::path& out,
               std::ostream& log) {
  const bool torus = run.config.genus == 1;
  Method method = torus ? Method::Variational : Method::Picard;
  const bool both = method_name == "both";
  if (method_name == "picard") method = Method::Picard;
  if (method_name == "variational") method = Method::Variational;
  if (!both && method_name != "picard" && method_name != "variational" && !method_name.empty()) {
    throw Error(ErrorCode::InvalidConfiguration, "unknown method '" + method_name + "'");
  }

  const auto bg = make_background(run.config, run.settings);
  int status = kExitOk;
  std::optional<Solution> sol;
  try {
    sol = solve(bg, run.settings, method);
  } catch (const NoConvergenceError& e) {
    sol = e.best();
    status = kExitSolver;
    log << e.what() << '\n';
  }
  json cfg = io::to_json(run.config);
  cfg["settings"] = io::to_json(run.settings);
  io::write_json_atomic(out / "config.json", cfg);
  io::write_csv(out / "solution.csv", sol->U);
  io::write_csv(out / "phi.csv", sol->phi());
  json meta = meta_json(*sol);

  std::optional<CrossCheck> cc;
  json comparison;
  if (both) {
    if (torus) {
      comparison = {{"applicable", false}, {"reason", "the Picard map needs a bounded chart"}};
    } else if (status == kExitOk) {
      cc = cross_check(*sol, run.settings);
      io::write_csv(out / "variational.csv", cc->variational.U);
      comparison = {{"applicable", true},
                    {"sup_difference", cc->sup_difference},
                    {"threshold", kCrossCheckLimit},
                    {"pass", cc->sup_difference < kCrossCheckLimit},
                    {"variational", io::to_json(cc->variational.diagnostics)}};
    }
  }

  if (status == kExitOk && run_verify) {
    std::optional<UniquenessProbe> up;
    if (probe > 0) up = uniqueness_probe(bg, run.settings, probe);
    auto rep = verify(*sol, run.settings, up ? &*up : nullptr);
    if (cc) {
      rep.checks.push_back({"cross_check", cc->sup_difference, kCrossCheckLimit,
                            cc->sup_difference < kCrossCheckLimit, "Dirichlet-box variational vs Picard"});
    }
    json report = io::to_json(rep);
    if (!comparison.is_null()) report["comparison"] = comparison;
    io::write_json_atomic(out / "report.json", report);
    meta["area"] = rep.area.area;
    meta["area_target"] = rep.area.target;
    if (!rep.pass()) status = kExitVerify;
  } else if (!comparison.is_null()) {
    io::write_json_atomic(out / "report.json", {{"comparison", comparison}});
  }
  io::write_json_atomic(out / "meta.json", meta);
  log << "method " << io::to_string(sol->method) << ", iterations " << sol->diagnostics.iterations << ", residual "
      << sol->diagnostics.residual << ", c1 " << sol->c1 << '\n';
  return status;
}

struct Loaded {
  Run run;
  Solution sol;
};

Loaded load_solution(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, "no solution directory " + dir.string());
  Loaded l;
  const json cfg = io::read_json(dir / "config.json");
  l.run.config = io::config_from_json(cfg);
  if (cfg.contains("settings")) l.run.settings = io::settings_from_json(cfg["settings"]);
  const auto bg = make_background(l.run.config, l.run.settings);
  l.sol.background = bg;
  l.sol.U = io::read_csv(dir / "solution.csv", bg->grid().periodic);
  if (!(l.sol.U.grid() == bg->grid())) throw Error(ErrorCode::Parse, "solution.csv does not match the configured grid");
  const json meta = io::read_json(dir / "meta.json");
  l.sol.method = meta.value("method", std::string("picard")) == "picard" ? Method::Picard : Method::Variational;
  l.sol.c1 = meta.value("c1", 0.0);
  if (meta.contains("diagnostics")) {
    const auto& d = meta["diagnostics"];
    l.sol.diagnostics.iterations = d.value("iterations", 0);
    l.sol.diagnostics.residual = d.value("residual", 0.0);
    l.sol.diagnostics.bound_violations = d.value("bound_violations", 0);
    l.sol.diagnostics.clamps = d.value("clamps", 0);
  }
  return l;
}

int cmd_solve(const std::string& config_path, const std::string& out, const std::string& method, bool no_verify,
              int probe, const Overrides& over, const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  const Run run = load_run(config_path, over);
  const fs::path dir(out);
  const int status = solve_into(run, method, !no_verify, probe, dir, std::cout);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(dir, command, config_path, run, method, secs, status);
  return status;
}

int cmd_verify(const std::string& dir, int probe) {
  const Loaded l = load_solution(dir);
  std::optional<UniquenessProbe> up;
  if (probe > 0) up = uniqueness_probe(l.sol.background, l.run.settings, probe);
  const auto rep = verify(l.sol, l.run.settings, up ? &*up : nullptr);
  std::cout << io::to_json(rep).dump(2) << '\n';
  return rep.pass() ? kExitOk : kExitVerify;
}

int cmd_oracle(double mu, bool as_json) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::InvalidConfiguration, "mu must satisfy 0 < mu <= 1");
  constexpr double kLow = 3.2, kHigh = 4.8;
  bool ok = true;
  json rows = json::array();
  double prev = 0.0;
  if (!as_json) std::printf("%6s  %14s  %8s\n", "n", "residual", "ratio");
  for (int n : {64, 128, 256, 512}) {
    const double r = cone_oracle(mu, n);
    json row = {{"n", n}, {"residual", r}};
    if (prev > 0.0) {
      const double ratio = prev / r;
      ok = ok && ratio >= kLow && ratio <= kHigh;
      row["ratio"] = ratio;
      if (!as_json) std::printf("%6d  %14.6e  %8.4f\n", n, r, ratio);
    } else if (!as_json) {
      std::printf("%6d  %14.6e  %8s\n", n, r, "-");
    }
    rows.push_back(row);
    prev = r;
  }
  if (as_json) {
    std::cout << json{{"mu", mu}, {"rows", rows}, {"window", {kLow, kHigh}}, {"pass", ok}}.dump(2) << '\n';
  } else {
    std::printf("ratios %s [%.1f, %.1f]\n", ok ? "within" : "OUTSIDE", kLow, kHigh);
  }
  return ok ? kExitOk : kExitOracle;
}

int cmd_export(const std::string& dir, const std::string& out, bool ppm) {
  const Loaded l = load_solution(dir);
  const fs::path target = out.empty() ? fs::path(dir) / "export" : fs::path(out);
  const auto phi = l.sol.phi();
  io::write_csv(target / "phi.csv", phi);
  io::write_csv(target / "U.csv", l.sol.U);
  io::write_csv(target / "v.csv", l.sol.background->v);
  if (ppm) io::write_ppm(target / "phi.ppm", phi);
  std::cout << "wrote " << target.string() << '\n';
  return kExitOk;
}

int cmd_export_background(const std::string& config_path, const std::string& out, const Overrides& over) {
  const Run run = load_run(config_path, over);
  const auto bg = make_background(run.config, run.settings);
  const fs::path dir(out);
  io::write_csv(dir / "beta.csv", bg->beta_cells());
  io::write_csv(dir / "v.csv", bg->v);
  io::write_csv(dir / "r.csv", bg->r);
  io::write_json_atomic(dir / "background.json", {{"lambda1", bg->lambda1},
                                                  {"lambda2", bg->lambda2},
                                                  {"L", bg->L},
                                                  {"plateau", bg->beta->plateau},
                                                  {"mass", bg->beta->mass}});
  std::cout << "wrote " << dir.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out, const std::vector<int>& grids,
              const std::string& method, bool no_verify, bool parallel, const Overrides& over,
              const std::string& command) {
  const auto start = std::chrono::steady_clock::now();
  const Run base = load_run(config_path, over);
  std::vector<int> status(grids.size(), kExitOk);
  std::vector<std::string> logs(grids.size());
  auto one = [&](std::size_t k) {
    Run run = base;
    run.settings.grid = grids[k];
    const fs::path dir = fs::path(out) / ("grid_" + std::to_string(grids[k]));
    std::ostringstream log;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      status[k] = solve_into(run, method, !no_verify, 0, dir, log);
      write_manifest(dir, command, config_path, run, method,
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), status[k]);
    } catch (const Error& e) {
      log << e.what() << '\n';
      status[k] = exit_code(e.code());
    }
    logs[k] = log.str();
  };
  if (parallel) {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < grids.size(); ++k) pool.emplace_back(one, k);
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t k = 0; k < grids.size(); ++k) one(k);
  }
  json rows = json::array();
  int worst = kExitOk;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    std::cout << "grid " << grids[k] << ": " << logs[k];
    rows.push_back({{"grid", grids[k]}, {"exit_status", status[k]}});
    worst = std::max(worst, status[k]);
  }
  write_manifest(out, command, config_path, base, method,
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), worst);
  io::write_json_atomic(fs::path(out) / "sweep.json", {{"runs", rows}});
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Liouville metrics with conical and cusp singularities"};
  app.require_subcommand(1);
  const std::string command = joined(argc, argv);

  std::string config, out, method, solution_dir, export_out;
  bool no_verify = false, ppm = false, as_json = false, parallel = false;
  int probe = 0;
  double mu = 0.6;
  std::vector<int> grids{64, 128, 256};
  Overrides over;

  auto* solve_cmd = app.add_subcommand("solve", "solve a configuration and verify the result");
  solve_cmd->add_option("--config", config, "JSON configuration or manifest")->required();
  solve_cmd->add_option("--out", out, "output directory")->required();
  solve_cmd->add_option("--method", method, "picard | variational | both")
      ->check(CLI::IsMember({"picard", "variational", "both"}));
  solve_cmd->add_flag("--no-verify", no_verify, "skip the verification report");
  solve_cmd->add_option("--probe", probe, "uniqueness probe starts (0 skips)");
  over.add(solve_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "verify a solution directory");
  verify_cmd->add_option("--solution", solution_dir, "solution directory")->required();
  verify_cmd->add_option("--probe", probe, "uniqueness probe starts (0 skips)");

  auto* oracle_cmd = app.add_subcommand("oracle", "cone-metric convergence study");
  oracle_cmd->add_option("--mu", mu, "cone exponent, 0 < mu <= 1");
  oracle_cmd->add_flag("--json", as_json, "print JSON instead of a table");

  auto* export_cmd = app.add_subcommand("export", "CSV grids and a PPM heatmap of phi");
  export_cmd->add_option("--solution", solution_dir, "solution directory")->required();
  export_cmd->add_option("--out", export_out, "target directory (default <solution>/export)");
  export_cmd->add_flag("--ppm", ppm, "also write phi.ppm");

  auto* bg_cmd = app.add_subcommand("export-background", "CSV grids of beta, v and r");
  bg_cmd->add_option("--config", config, "JSON configuration")->required();
  bg_cmd->add_option("--out", out, "output directory")->required();
  over.add(bg_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "solve one configuration on several grids");
  sweep_cmd->add_option("--config", config, "JSON configuration")->required();
  sweep_cmd->add_option("--out", out, "output directory")->required();
  sweep_cmd->add_option("--grids", grids, "grid sizes")->delimiter(',');
  sweep_cmd->add_option("--method", method, "picard | variational | both")
      ->check(CLI::IsMember({"picard", "variational", "both"}));
  sweep_cmd->add_flag("--no-verify", no_verify, "skip verification");
  sweep_cmd->add_flag("--parallel", parallel, "run the grids concurrently");
  over.add(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*solve_cmd) return cmd_solve(config, out, method, no_verify, probe, over, command);
    if (*verify_cmd) return cmd_verify(solution_dir, probe);
    if (*oracle_cmd) return cmd_oracle(mu, as_json);
    if (*export_cmd) return cmd_export(solution_dir, export_out, ppm);
    if (*bg_cmd) return cmd_export_background(config, out, over);
    if (*sweep_cmd) return cmd_sweep(config, out, grids, method, no_verify, parallel, over, command);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitValidation;
}
