#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cslheat/cli.hpp"

namespace {

std::optional<cslheat::Vec3> parse_direction(const std::string& text)
{
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  if (v.size() != 3) return std::nullopt;
  return cslheat::Vec3{v[0], v[1], v[2]};
}

}  // namespace

int main(int argc, char** argv)
{
  namespace cli = cslheat::cli;
  CLI::App app{"Collapse-noise heating rates of solid test masses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("cslheat 1.0 (constants ") + cslheat::PhysicalConstants::version + ")");

  cli::CommandOptions opt;
  std::string spec, out, k_dir;
  std::uint64_t seed = 0;
  double k_min = 0.0, k_max = 0.0;
  std::size_t points = 0;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"mu", "Normalised geometry factor mu(k)/M on a k-grid"},
      {"heat", "Total, centre-of-mass and internal heating rates"},
      {"scan", "Gamma_cm / lambda and reduction factor over an r_c grid"},
      {"optimize", "Best alternating-layer design at fixed mass and mass ratio"},
      {"discriminate", "Gamma_cm spread across designs versus thermal leakage"},
      {"bound", "Upper bound on lambda from an observed heating power"},
      {"lattice-check", "Self-check of the discrete-lattice oracles"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", spec, "Experiment spec (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Write the payload here instead of stdout");
    sub->add_flag("--csv", opt.csv, "Tabular output as CSV");
    sub->add_option("--seed", seed, "Override quadrature.rng_seed");
    sub->add_option("--threads", opt.threads, "Worker threads (default: $CSL_MASSMODEL_THREADS or all cores)");
    if (std::string(name) == "heat") {
      sub->add_flag("--table", opt.table, "Also print a readable table on stderr");
      sub->add_flag("--mc", opt.monte_carlo, "Add the Monte-Carlo estimate of Gamma_cm");
    }
    if (std::string(name) == "mu") {
      sub->add_option("--k-dir", k_dir, "Direction of the k sweep, e.g. 1,0,0");
      sub->add_option("--k-min", k_min, "First |k| of the sweep (1/m)");
      sub->add_option("--k-max", k_max, "Last |k| of the sweep (1/m)");
      sub->add_option("--points", points, "Number of k points")->check(CLI::PositiveNumber);
    }
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::exit_spec;
  }

  for (CLI::App* sub : subs) {
    if (!sub->parsed()) continue;
    opt.command = sub->get_name();
    if (!spec.empty()) opt.spec_path = spec;
    if (sub->count("--seed") > 0) opt.seed = seed;
    if (opt.command == "mu") {
      if (sub->count("--k-dir") > 0) {
        opt.k_direction = parse_direction(k_dir);
        if (!opt.k_direction) {
          std::cerr << "error: --k-dir expects three comma-separated numbers\n";
          return cli::exit_spec;
        }
      }
      if (sub->count("--k-min") > 0) opt.k_min = k_min;
      if (sub->count("--k-max") > 0) opt.k_max = k_max;
      if (sub->count("--points") > 0) opt.k_points = points;
    }
  }

  const cli::CommandResult r = cli::run_command(opt);
  std::cerr << r.diagnostics;
  if (!r.payload.empty()) {
    if (out.empty()) {
      std::cout << r.payload;
    } else {
      std::ofstream f(out, std::ios::binary);
      f << r.payload;
      if (!f) {
        std::cerr << "error: cannot write " << out << "\n";
        return cli::exit_compute;
      }
    }
  }
  return r.exit_code;
}
