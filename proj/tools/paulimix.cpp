// Command-line front end: sweeps, boundary data, classification, and the
// analytic-vs-scan cross-check, emitting CSV or JSON for plotting.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "paulimix/paulimix.hpp"

namespace {

using namespace paulimix;

const std::vector<std::string> kFormats = {"csv", "json"};
const std::vector<std::string> kMethods = {"quadrature", "monte_carlo", "both"};
const std::vector<std::string> kConventions = {"unit_side", "area_preserving"};

template <typename F>
int guarded(F&& run) {
  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex Pauli-channel mixtures: non-Markovian region analysis"};
  app.require_subcommand(1);

  SweepConfig sweep;
  std::string sweep_method = "quadrature";
  std::string sweep_format = "csv";
  CLI::App* ms = app.add_subcommand(
      "measure-sweep", "Non-Markovian region measure over an n grid");
  ms->add_option("--n-min", sweep.n_min, "Lower end of the n grid (>= 2)")
      ->capture_default_str();
  ms->add_option("--n-max", sweep.n_max, "Upper end of the n grid")
      ->capture_default_str();
  ms->add_option("--n-step", sweep.n_step, "Grid step")->capture_default_str();
  ms->add_option("--method", sweep_method, "Measure evaluation method")
      ->check(CLI::IsMember(kMethods))
      ->capture_default_str();
  ms->add_option("--samples", sweep.samples, "Monte Carlo sample count")
      ->capture_default_str();
  ms->add_option("--seed", sweep.seed, "Monte Carlo seed")->capture_default_str();
  ms->add_option("--tolerance", sweep.tolerance,
                 "Absolute quadrature tolerance")
      ->capture_default_str();
  ms->add_option("--format", sweep_format, "Output format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  ms->add_option("--out", sweep.out_path, "Output file (default: stdout)");

  BoundaryConfig boundary;
  std::string boundary_convention = "unit_side";
  std::string boundary_format = "csv";
  CLI::App* bd = app.add_subcommand(
      "boundary", "Region boundary curves plus the simplex outline");
  bd->add_option("--n", boundary.n, "Decoherence degree (>= 2)")
      ->capture_default_str();
  bd->add_option("--samples", boundary.samples, "Points per curve branch")
      ->capture_default_str();
  bd->add_option("--convention", boundary_convention,
                 "Equilateral-triangle scaling convention")
      ->check(CLI::IsMember(kConventions))
      ->capture_default_str();
  bd->add_option("--format", boundary_format, "Output format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  bd->add_option("--out", boundary.out_path, "Output file (default: stdout)");

  ZetaSweepConfig zeta;
  std::string zeta_format = "csv";
  CLI::App* zs = app.add_subcommand(
      "zeta-sweep", "Semigroup-deviation measure zeta over an n grid");
  zs->add_option("--n-min", zeta.n_min, "Lower end of the n grid (>= 2)")
      ->capture_default_str();
  zs->add_option("--n-max", zeta.n_max, "Upper end of the n grid")
      ->capture_default_str();
  zs->add_option("--n-step", zeta.n_step, "Grid step")->capture_default_str();
  zs->add_option("--r", zeta.r, "Rate constant r")->capture_default_str();
  zs->add_option("--format", zeta_format, "Output format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  zs->add_option("--out", zeta.out_path, "Output file (default: stdout)");

  ClassifyConfig cls;
  CLI::App* cl = app.add_subcommand(
      "classify", "Classify one mixture and run the divisibility oracle");
  cl->add_option("x", cls.x, "Mixing fraction of the x channel")->required();
  cl->add_option("y", cls.y, "Mixing fraction of the y channel")->required();
  cl->add_option("--n", cls.n, "Decoherence degree (>= 2)")->required();
  cl->add_option("--r", cls.r, "Rate constant r")->capture_default_str();

  OracleCompareConfig oracle;
  std::string oracle_format = "csv";
  CLI::App* oc = app.add_subcommand(
      "oracle-compare",
      "Cross-validate the analytic classifier against the CP-divisibility scan");
  oc->add_option("--n-min", oracle.n_min, "Lower end of the n grid (>= 2)")
      ->capture_default_str();
  oc->add_option("--n-max", oracle.n_max, "Upper end of the n grid")
      ->capture_default_str();
  oc->add_option("--n-step", oracle.n_step, "Grid step")->capture_default_str();
  oc->add_option("--samples", oracle.samples, "Random mixtures per n (>= 1000)")
      ->capture_default_str();
  oc->add_option("--seed", oracle.seed, "Sampling seed")->capture_default_str();
  oc->add_option("--tolerance", oracle.tolerance,
                 "Boundary-margin exclusion radius")
      ->capture_default_str();
  oc->add_option("--format", oracle_format, "Output format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  oc->add_option("--out", oracle.out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*ms) {
    sweep.method = *parse_method(sweep_method);
    sweep.format = *parse_format(sweep_format);
    return guarded([&] { return cmd_measure_sweep(sweep); });
  }
  if (*bd) {
    boundary.convention = *parse_convention(boundary_convention);
    boundary.format = *parse_format(boundary_format);
    return guarded([&] { return cmd_boundary(boundary); });
  }
  if (*zs) {
    zeta.format = *parse_format(zeta_format);
    return guarded([&] { return cmd_zeta_sweep(zeta); });
  }
  if (*cl) return guarded([&] { return cmd_classify(cls); });
  if (*oc) {
    oracle.format = *parse_format(oracle_format);
    return guarded([&] { return cmd_oracle_compare(oracle); });
  }
  return 2;
}
