// Command-line front end: every library computation exposed as a
// reproducible, self-describing data file (CSV or JSON), plus a one-shot
// validation runner.  Exit codes: 0 success, 1 validation failure, 2 bad
// arguments, 3 numerical or I/O failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wigosc/eigensystem.hpp"
#include "wigosc/flow.hpp"
#include "wigosc/output.hpp"
#include "wigosc/thermal.hpp"
#include "wigosc/validate.hpp"
#include "wigosc/version.hpp"
#include "wigosc/wigner_states.hpp"

namespace {

struct RunConfig {
  std::string subcommand;
  std::string state = "eigen";  // eigen | qg | thermal
  double alpha = 1.5;
  int n = 0;
  double gamma = 0.8;
  double tau = 0.0;
  double beta = 1.0;
  std::vector<double> beta_list;
  double x_min = 0.0, x_max = 6.0;
  int nx = 128;
  double k_min = -6.0, k_max = 6.0;
  int nk = 128;
  int eta_max = 6;
  double tol = 1e-8;
  double energy = 2.0;
  int steps = 64;
  double t0 = 0.0;
  int samples = 256;
  std::string format = "csv";
  std::string out_path;
};

std::unique_ptr<wigosc::WignerKernel> make_kernel(const RunConfig& cfg) {
  const wigosc::OscillatorParams p(cfg.alpha);
  if (cfg.state == "eigen")
    return std::make_unique<wigosc::EigenstateKernel>(p, cfg.n);
  if (cfg.state == "qg")
    return std::make_unique<wigosc::QuasiGaussianKernel>(
        p, wigosc::QuasiGaussianParams(cfg.gamma, cfg.tau));
  return std::make_unique<wigosc::ThermalKernel>(p, wigosc::ThermalParams(cfg.beta));
}

void add_common_meta(wigosc::io::Table& table, const RunConfig& cfg) {
  table.add_meta("generator", std::string(wigosc::version_string));
  table.add_meta("subcommand", cfg.subcommand);
  table.add_meta("tol", cfg.tol);
}

void add_state_meta(wigosc::io::Table& table, const RunConfig& cfg) {
  table.add_meta("state", cfg.state);
  table.add_meta("alpha", cfg.alpha);
  if (cfg.state == "eigen") table.add_meta("n", cfg.n);
  if (cfg.state == "qg") {
    table.add_meta("gamma", cfg.gamma);
    table.add_meta("tau", cfg.tau);
  }
  if (cfg.state == "thermal") table.add_meta("beta", cfg.beta);
}

void add_grid_meta(wigosc::io::Table& table, const RunConfig& cfg) {
  table.add_meta("x_min", cfg.x_min);
  table.add_meta("x_max", cfg.x_max);
  table.add_meta("nx", cfg.nx);
  table.add_meta("k_min", cfg.k_min);
  table.add_meta("k_max", cfg.k_max);
  table.add_meta("nk", cfg.nk);
}

int emit(const RunConfig& cfg, const wigosc::io::Table& table) {
  const std::string text =
      cfg.format == "json" ? wigosc::io::to_json(table) : wigosc::io::to_csv(table);
  if (cfg.out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return 0;
  }
  wigosc::io::write_atomic(cfg.out_path, text);
  return 0;
}

int run_grid(const RunConfig& cfg) {
  const auto kern = make_kernel(cfg);
  const wigosc::PhaseGrid grid = wigosc::fill_grid(
      [&](double x, double k) { return kern->value(x, k, cfg.tol); }, cfg.x_min, cfg.x_max,
      cfg.nx, cfg.k_min, cfg.k_max, cfg.nk);
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  add_state_meta(table, cfg);
  add_grid_meta(table, cfg);
  table.columns = {"x", "k", "w"};
  table.rows.reserve(static_cast<std::size_t>(cfg.nx) * cfg.nk);
  for (int ix = 0; ix < cfg.nx; ++ix)
    for (int ik = 0; ik < cfg.nk; ++ik)
      table.rows.push_back({grid.x_at(ix), grid.k_at(ik), grid.at(ix, ik)});
  return emit(cfg, table);
}

int run_flow(const RunConfig& cfg) {
  const auto kern = make_kernel(cfg);
  const wigosc::OscillatorParams p(cfg.alpha);
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  add_state_meta(table, cfg);
  add_grid_meta(table, cfg);
  table.add_meta("eta_max", cfg.eta_max);
  table.columns = {"x", "k", "w", "jx", "jk", "residual"};
  const double dx = (cfg.x_max - cfg.x_min) / cfg.nx;
  const double dk = (cfg.k_max - cfg.k_min) / cfg.nk;
  for (int ix = 0; ix < cfg.nx; ++ix) {
    const double x = cfg.x_min + (ix + 0.5) * dx;
    for (int ik = 0; ik < cfg.nk; ++ik) {
      const double k = cfg.k_min + (ik + 0.5) * dk;
      if (x <= 0.0) {
        table.rows.push_back({x, k, 0.0, 0.0, 0.0, 0.0});
        continue;
      }
      const wigosc::FlowField field = wigosc::flow_field(*kern, p, x, k, cfg.tol, cfg.eta_max);
      const double residual = wigosc::continuity_residual(*kern, p, x, k, cfg.tol, cfg.eta_max);
      table.rows.push_back({x, k, field.w, field.jx, field.jk, residual});
    }
  }
  return emit(cfg, table);
}

int run_orbit(const RunConfig& cfg) {
  const wigosc::OscillatorParams p(cfg.alpha);
  const wigosc::ClassicalOrbit orbit = wigosc::classical_orbit(p, cfg.energy);
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  table.add_meta("alpha", cfg.alpha);
  table.add_meta("energy", cfg.energy);
  table.add_meta("amplitude", orbit.amplitude);
  table.add_meta("period", orbit.period());
  table.add_meta("samples", cfg.samples);
  table.columns = {"t", "x", "k"};
  for (int i = 0; i <= cfg.samples; ++i) {
    const double t = orbit.period() * i / cfg.samples;
    table.rows.push_back({t, orbit.position(t), orbit.momentum(t)});
  }
  return emit(cfg, table);
}

int run_flux(const RunConfig& cfg) {
  const auto kern = make_kernel(cfg);
  const wigosc::OscillatorParams p(cfg.alpha);
  const wigosc::ClassicalOrbit orbit = wigosc::classical_orbit(p, cfg.energy);
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  add_state_meta(table, cfg);
  table.add_meta("energy", cfg.energy);
  table.add_meta("eta_max", cfg.eta_max);
  table.add_meta("steps", cfg.steps);
  table.add_meta("t0", cfg.t0);
  // One row per contour revolution: the closed orbit has period pi, and the
  // two-revolution integral doubles the one-revolution value exactly.
  table.columns = {"periods", "flux"};
  for (int periods : {1, 2})
    table.rows.push_back(
        {static_cast<double>(periods),
         wigosc::purity_flux(*kern, p, orbit, cfg.eta_max, cfg.tol, cfg.steps, cfg.t0, periods)});
  return emit(cfg, table);
}

int run_purity_sweep(const RunConfig& cfg) {
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  table.add_meta("alpha", cfg.alpha);
  table.columns = {"beta", "purity", "tanh_beta", "abs_difference"};
  const wigosc::OscillatorParams p(cfg.alpha);
  for (double beta : cfg.beta_list) {
    const double purity = wigosc::thermal_purity(p, wigosc::ThermalParams(beta), cfg.tol);
    table.rows.push_back({beta, purity, std::tanh(beta), std::abs(purity - std::tanh(beta))});
  }
  return emit(cfg, table);
}

int run_partition(const RunConfig& cfg) {
  wigosc::io::Table table;
  add_common_meta(table, cfg);
  table.add_meta("alpha", cfg.alpha);
  table.columns = {"beta", "z_numeric", "z_closed", "rel_difference"};
  const wigosc::OscillatorParams p(cfg.alpha);
  for (double beta : cfg.beta_list) {
    const wigosc::ThermalKernel bare{p, wigosc::ThermalParams(beta), /*normalized=*/false};
    const double z_numeric = wigosc::normalization(bare, cfg.tol);
    const double z_closed = wigosc::partition_function(beta);
    table.rows.push_back({beta, z_numeric, z_closed, std::abs(z_numeric / z_closed - 1.0)});
  }
  return emit(cfg, table);
}

int run_validate(double tol) {
  const auto results = wigosc::run_acceptance(tol);
  const int failures = wigosc::print_acceptance_report(std::cout, results);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  double validate_tol = 1e-9;

  CLI::App app{"Phase-space toolkit for the one-dimensional singular oscillator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(wigosc::version_string));

  const auto alpha_ok = CLI::Validator(
      [](std::string& s) {
        return std::stod(s) > -1.0 ? std::string() : std::string("alpha must exceed -1");
      },
      "ALPHA>-1");

  auto add_state_flags = [&](CLI::App* cmd) {
    cmd->add_option("--state", cfg.state, "State family: eigen | qg | thermal")
        ->check(CLI::IsMember({"eigen", "qg", "thermal"}));
    cmd->add_option("--alpha", cfg.alpha, "Singularity strength alpha")->check(alpha_ok);
    cmd->add_option("--n", cfg.n, "Eigenstate index")->check(CLI::NonNegativeNumber);
    cmd->add_option("--gamma", cfg.gamma, "Quasi-Gaussian width parameter (> 0)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tau", cfg.tau, "Quasi-Gaussian phase parameter");
    cmd->add_option("--beta", cfg.beta, "Inverse temperature (> 0)")->check(CLI::PositiveNumber);
  };
  auto add_grid_flags = [&](CLI::App* cmd) {
    cmd->add_option("--x-min", cfg.x_min, "Lower x bound");
    cmd->add_option("--x-max", cfg.x_max, "Upper x bound");
    cmd->add_option("--nx", cfg.nx, "Cells along x")->check(CLI::PositiveNumber);
    cmd->add_option("--k-min", cfg.k_min, "Lower k bound");
    cmd->add_option("--k-max", cfg.k_max, "Upper k bound");
    cmd->add_option("--nk", cfg.nk, "Cells along k")->check(CLI::PositiveNumber);
  };
  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tol", cfg.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--format", cfg.format, "Output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", cfg.out_path, "Output path (stdout when omitted)");
  };

  CLI::App* grid = app.add_subcommand("grid", "Tabulate W(x, k) on a rectangular grid");
  add_state_flags(grid);
  add_grid_flags(grid);
  add_output_flags(grid);

  CLI::App* flow = app.add_subcommand("flow", "Tabulate W, currents, and continuity residual");
  add_state_flags(flow);
  add_grid_flags(flow);
  add_output_flags(flow);
  flow->add_option("--eta-max", cfg.eta_max, "Moyal truncation order")
      ->check(CLI::NonNegativeNumber);

  CLI::App* orbit = app.add_subcommand("orbit", "Sample the closed classical orbit x_C, k_C");
  orbit->add_option("--alpha", cfg.alpha, "Singularity strength alpha")->check(alpha_ok);
  orbit->add_option("--energy", cfg.energy, "Orbit energy E >= sqrt(g)");
  orbit->add_option("--samples", cfg.samples, "Samples over one period")
      ->check(CLI::Range(2, 1 << 20));
  add_output_flags(orbit);

  CLI::App* flux = app.add_subcommand("flux", "Purity flux through a classical energy contour");
  add_state_flags(flux);
  flux->add_option("--energy", cfg.energy, "Contour energy E >= sqrt(g)");
  flux->add_option("--eta-max", cfg.eta_max, "Moyal truncation order")
      ->check(CLI::NonNegativeNumber);
  flux->add_option("--steps", cfg.steps, "Orbit discretization steps (>= 4)")
      ->check(CLI::Range(4, 1 << 20));
  flux->add_option("--t0", cfg.t0, "Starting phase on the orbit");
  add_output_flags(flux);

  CLI::App* sweep = app.add_subcommand("purity-sweep", "Thermal purity versus tanh(beta)");
  sweep->add_option("--alpha", cfg.alpha, "Singularity strength alpha")->check(alpha_ok);
  sweep
      ->add_option("--beta", cfg.beta_list,
                   "Inverse temperatures (repeatable), each in [0.01, 50]")
      ->required()
      ->check(CLI::Range(0.01, 50.0));
  add_output_flags(sweep);

  CLI::App* partition =
      app.add_subcommand("partition", "Partition function: phase-space integral vs closed form");
  partition->add_option("--alpha", cfg.alpha, "Singularity strength alpha")->check(alpha_ok);
  partition->add_option("--beta", cfg.beta_list, "Inverse temperatures (repeatable, > 0)")
      ->required()
      ->check(CLI::PositiveNumber);
  add_output_flags(partition);

  CLI::App* validate = app.add_subcommand("validate", "Run the acceptance criteria suite");
  validate->add_option("--tol", validate_tol,
                       "Quadrature tolerance (loosen to verify failure detection)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; bad arguments exit 2
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (grid->parsed()) return run_grid(cfg);
    if (flow->parsed()) return run_flow(cfg);
    if (orbit->parsed()) return run_orbit(cfg);
    if (flux->parsed()) return run_flux(cfg);
    if (sweep->parsed()) return run_purity_sweep(cfg);
    if (partition->parsed()) return run_partition(cfg);
    if (validate->parsed()) return run_validate(validate_tol);
  } catch (const std::domain_error& e) {
    std::cerr << "wigosc: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "wigosc: invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "wigosc: " << e.what() << "\n";
    return 3;
  }
  return 2;  // unreachable with require_subcommand(1)
}
