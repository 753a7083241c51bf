// Command-line front end: identity suites, plane-mode trajectory runs and
// packet runs with CSV/SVG output.
//
// Exit codes: 0 success, 2 configuration error, 3 numeric-convergence
// failure, 4 identity failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kleinflow/kleinflow.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_convergence = 3;
constexpr int exit_identity = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  unsigned threads = kleinflow::default_thread_count();
  std::uint64_t seed = 0;  // quantile starts are deterministic; reserved
};

kleinflow::ScenarioConfig load(const CommonOpts& opts) {
  kleinflow::ScenarioConfig cfg = kleinflow::load_config(opts.config_path);
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kleinflow: 1+1-d Dirac step scattering and Bohmian trajectories"};
  app.require_subcommand(1);

  // identities
  auto* identities = app.add_subcommand("identities", "run the closed-identity suites");
  kleinflow::IdentitySuiteConfig id_cfg;
  identities->add_option("--kappa", id_cfg.kappa, "inverse Compton length (default 1)");
  identities->add_option("--V", id_cfg.V, "fix the step height (default: sample)");
  identities->add_option("--samples", id_cfg.samples, "parameter samples per identity");
  identities->add_option("--seed", id_cfg.seed, "sampling seed");
  identities->add_option("--perturb-r", id_cfg.perturb_r,
                         "fault injection: offset added to r in the continuity checks");

  // plane / packet
  CommonOpts plane_opts, packet_opts;
  auto* plane = app.add_subcommand("plane", "plane-mode trajectory run (closed form vs ODE)");
  plane->add_option("--config", plane_opts.config_path, "config file")->required();
  plane->add_option("--out-dir", plane_opts.out_dir, "output directory override");
  plane->add_option("--threads", plane_opts.threads, "worker threads");
  plane->add_option("--seed", plane_opts.seed, "reserved; recorded in output metadata");

  auto* packet = app.add_subcommand("packet", "packet run: densities, ensemble, reports");
  packet->add_option("--config", packet_opts.config_path, "config file")->required();
  packet->add_option("--out-dir", packet_opts.out_dir, "output directory override");
  packet->add_option("--threads", packet_opts.threads, "worker threads");
  packet->add_option("--seed", packet_opts.seed, "reserved; recorded in output metadata");

  CLI11_PARSE(app, argc, argv);

  try {
    if (identities->parsed()) {
      const bool ok = kleinflow::run_identities(id_cfg, std::cout);
      return ok ? exit_ok : exit_identity;
    }
    if (plane->parsed()) {
      const auto res = kleinflow::run_plane(load(plane_opts), plane_opts.threads,
                                            plane_opts.seed);
      std::cout << "wrote " << res.csv_path << " and " << res.svg_path << "\n"
                << "max |x0_ode - x0_closed| = " << res.max_x0_deviation << " over "
                << res.n_samples << " samples\n";
      return exit_ok;
    }
    const auto res = kleinflow::run_packet(load(packet_opts), packet_opts.threads,
                                           packet_opts.seed);
    std::cout << "wrote " << res.densities_path;
    if (!res.trajectories_path.empty()) std::cout << ", " << res.trajectories_path;
    std::cout << ", " << res.reports_path << ", " << res.svg_path << "\n"
              << "R = " << res.budget.R << "  T = " << res.budget.T << "  transmitted "
              << res.transmitted << "/" << res.trajectories.size() << "\n";
    return exit_ok;
  } catch (const kleinflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const kleinflow::DomainError& e) {
    std::cerr << "config error (domain): " << e.what() << "\n";
    return exit_config;
  } catch (const kleinflow::QuadratureNotConverged& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return exit_convergence;
  } catch (const kleinflow::WindowTooSmall& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return exit_convergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
