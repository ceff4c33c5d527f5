#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "freegamma/cli.hpp"

int main(int argc, char** argv) {
  using namespace freegamma::cli;
  std::ios::sync_with_stdio(false);

  CLI::App app{"Free Gamma distributions: parameters, density, moments, checks"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string grid = "uniform";
  double xi_min = 0.0, xi_max = 0.0, quad_tol = 0.0;
  int points = 0;

  const std::map<std::string, Command> commands = {
      {"params", Command::params}, {"density", Command::density}, {"moments", Command::moments},
      {"mode", Command::mode},     {"verify", Command::verify},   {"limit", Command::limit}};
  const std::map<std::string, std::string> blurbs = {
      {"params", "derived constants per alpha"},
      {"density", "density table f(xi)"},
      {"moments", "free cumulants and moments"},
      {"mode", "location and height of the mode"},
      {"verify", "property battery, one PASS/FAIL line per check"},
      {"limit", "small-alpha profile f/alpha against e^-x/x"}};

  std::map<std::string, CLI::Option*> min_opt, max_opt, pts_opt, tol_opt;
  for (const auto& [name, cmd] : commands) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--alpha", cfg.alpha, "shape parameter(s), comma separated")->required()->delimiter(',');
    min_opt[name] = sub->add_option("--min", xi_min, "lower end of the grid");
    max_opt[name] = sub->add_option("--max", xi_max, "upper end of the grid");
    pts_opt[name] = sub->add_option("--points", points, "number of grid points");
    sub->add_option("--max-order", cfg.max_order, "highest moment order")->capture_default_str();
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--precision", cfg.precision, "significant digits")->capture_default_str();
    sub->add_option("--grid", grid, "uniform or log-edge")->check(CLI::IsMember({"uniform", "log-edge"}));
    tol_opt[name] = sub->add_option("--quad-tol", quad_tol, "absolute and relative quadrature tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalidInput;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  cfg.command = commands.at(name);
  cfg.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.grid = grid == "log-edge" ? freegamma::GridKind::log_edge : freegamma::GridKind::uniform;
  if (min_opt[name]->count()) cfg.xi_min = xi_min;
  if (max_opt[name]->count()) cfg.xi_max = xi_max;
  if (pts_opt[name]->count()) cfg.points = points;
  if (tol_opt[name]->count()) cfg.quad_tol = quad_tol;

  const int rc = run(cfg, std::cout, std::cerr);
  std::cout.flush();
  return rc;
}
