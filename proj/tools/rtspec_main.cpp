#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "rtspec/cli_commands.hpp"

namespace {

bool parse_grid(const std::string& spec, rtspec::GridSpec* grid) {
  int n1 = 0, n2 = 0, n3 = 0;
  if (std::sscanf(spec.c_str(), "%dx%dx%d", &n1, &n2, &n3) != 3) return false;
  if (n1 < 2 || n2 < 2 || n3 < 2) return false;
  grid->n1 = n1;
  grid->n2 = n2;
  grid->n3 = n3;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rtspec: linear growth-rate spectrum of two superposed viscous fluid "
      "layers (dispersion scans, stability classification, sharp rates, "
      "growing-mode field export)"};
  app.require_subcommand(1);

  rtspec::CliOptions opt;
  std::string grid_spec = "8x8x17";
  std::vector<int> xi_pair;

  auto add_common = [&](CLI::App* sub, bool with_out_format) {
    sub->add_option("--config", opt.config_path, "config JSON path")
        ->required();
    sub->add_option("--mesh", opt.mesh, "elements per layer (default 128)");
    sub->add_option("--tol", opt.tol, "relative root tolerance");
    sub->add_option("--threads", opt.threads,
                    "worker threads (0 = machine default)");
    if (with_out_format) {
      sub->add_option("--out", opt.out, "output path (default stdout)");
      sub->add_option("--format", opt.format, "csv or json");
    }
  };

  CLI::App* classify = app.add_subcommand(
      "classify", "stability regime, critical tension and frequency");
  add_common(classify, true);

  CLI::App* dispersion = app.add_subcommand(
      "dispersion", "growth rate per lattice frequency up to --xi-max");
  add_common(dispersion, true);
  dispersion->add_option("--xi-max", opt.xi_max, "lattice magnitude cutoff")
      ->required();

  CLI::App* sharp = app.add_subcommand(
      "sharp-rate", "largest growth rate over sub-critical frequencies");
  add_common(sharp, true);

  CLI::App* mode = app.add_subcommand(
      "mode", "reconstruct a growing mode and export field samples");
  add_common(mode, true);
  mode->add_option("--xi", xi_pair, "lattice index n1 n2")
      ->expected(2)
      ->required();
  mode->add_option("--time", opt.time, "evaluation time (default 0)");
  mode->add_option("--grid", grid_spec, "samples as N1xN2xN3 (default 8x8x17)");
  mode->add_flag("--physical", opt.physical,
                 "map samples through the flattening coordinates");
  mode->add_option("--normalize", opt.normalize,
                   "amplitude convention: L2 (unit combined L2 norm of "
                   "(u, eta)) or J (variational J(psi) = 1)");
  mode->add_option("--amplitude", opt.amplitude,
                   "extra scalar factor on the exported mode");

  CLI::App* convergence = app.add_subcommand(
      "convergence", "growth rate vs mesh size with Richardson order");
  add_common(convergence, true);
  convergence->add_option("--xi", xi_pair, "lattice index n1 n2")
      ->expected(2)
      ->required();
  convergence
      ->add_option("--meshes", opt.meshes, "mesh sizes, e.g. 16,32,64")
      ->delimiter(',')
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return rtspec::kExitInput;
  }

  if (xi_pair.size() == 2) {
    opt.n1 = xi_pair[0];
    opt.n2 = xi_pair[1];
  }
  if (!parse_grid(grid_spec, &opt.grid)) {
    std::cerr << "error: bad --grid spec (need N1xN2xN3, each >= 2)\n";
    return rtspec::kExitInput;
  }

  if (classify->parsed()) {
    return rtspec::cmd_classify(opt, std::cout, std::cerr);
  }
  if (dispersion->parsed()) {
    return rtspec::cmd_dispersion(opt, std::cout, std::cerr);
  }
  if (sharp->parsed()) {
    return rtspec::cmd_sharp_rate(opt, std::cout, std::cerr);
  }
  if (mode->parsed()) {
    return rtspec::cmd_mode(opt, std::cout, std::cerr);
  }
  if (convergence->parsed()) {
    return rtspec::cmd_convergence(opt, std::cout, std::cerr);
  }
  return rtspec::kExitInput;
}
