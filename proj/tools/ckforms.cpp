// ckforms: spectral numbers on flat tori, form classification and identity
// checks from the command line.
//
// Exit codes: 0 all checks passed, 1 some check failed, 2 configuration or
// parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ckforms/report.hpp"

namespace {

void add_common(CLI::App* sub, ckforms::RunConfig& cfg, std::string& out, std::optional<double>& tol) {
  sub->add_option("--manifold", cfg.manifold, "torus | sphere | ball | conformal | custom");
  sub->add_option("--dim", cfg.dim, "dimension n");
  sub->add_option("--curvature", cfg.curvature, "sectional curvature C (sphere, ball)");
  sub->add_option("--exponent", cfg.exponent, "conformal exponent f, metric e^{2f} delta");
  sub->add_option("--chart", cfg.chart, "chart fixture file (custom manifold)");
  sub->add_option("--seed", cfg.seed, "sample-point seed");
  sub->add_option("--points", cfg.points, "number of sample points");
  sub->add_option("--tol", tol, "tolerance");
  sub->add_option("--format", cfg.format, "json | csv");
  sub->add_option("--out", out, "output file (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformal Killing forms: Tachibana numbers, classification and identity checks"};
  app.require_subcommand(1);
  ckforms::RunConfig cfg;
  std::string out_path;
  std::optional<double> tol;

  auto* numbers = app.add_subcommand("numbers", "Betti, Tachibana, Killing and planarity numbers of a flat torus");
  add_common(numbers, cfg, out_path, tol);
  numbers->add_option("--r", cfg.r, "form degree");
  numbers->add_option("--band", cfg.band, "Fourier band limit B");

  auto* classify = app.add_subcommand("classify", "place a form in the inclusion diagram of form classes");
  add_common(classify, cfg, out_path, tol);
  classify->add_option("--form", cfg.form, "form spec (e.g. closedck:3) or form fixture file")->required();

  auto* verify = app.add_subcommand("verify", "run the identity catalogue");
  add_common(verify, cfg, out_path, tol);
  verify->add_option("--catalogue", cfg.catalogue, "catalogue file (default: built-in)");

  auto* report = app.add_subcommand("report", "aggregate numbers, classifications and identity checks");
  add_common(report, cfg, out_path, tol);
  report->add_option("--band", cfg.band, "Fourier band limit B");
  report->add_option("--catalogue", cfg.catalogue, "catalogue file (default: built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.tol = tol;

  try {
    const ckforms::CommandResult res = ckforms::run_command(cfg);
    const std::string text = cfg.format == "csv" ? res.csv : ckforms::to_json_text(res.doc);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw ckforms::ConfigError("cannot write '" + out_path + "'");
      f << text;
    }
    return res.pass ? 0 : 1;
  } catch (const ckforms::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
  } catch (const ckforms::HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << '\n';
    return 1;
  } catch (const ckforms::IndeterminateGap& e) {
    std::cerr << "indeterminate spectral gap: " << e.what() << '\n';
    return 1;
  } catch (const ckforms::InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  } catch (const ckforms::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
