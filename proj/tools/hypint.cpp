#include "hypint/cli_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::size_t> parse_base(const std::string &text)
{
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long k = -1;
    try {
      k = std::stoll(item, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used != item.size() || k < 0) throw std::invalid_argument("--base expects comma-separated member indices, got \"" + text + "\"");
    out.push_back(static_cast<std::size_t>(k));
  }
  if (out.empty()) throw std::invalid_argument("--base is empty");
  return out;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"GG-functions and Euler integrals: systems, series, quadrature, verification"};
  app.require_subcommand(1, 1);

  std::string problem_path, out_path, base_text;
  int order = -1;
  double tol = 0.0;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("problem", problem_path, "problem JSON file")->required();
    sub->add_option("--order", order, "series truncation order M")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", tol, "quadrature tolerance (eval) or residual tolerance (verify)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--base", base_text, "base member indices, e.g. 0,2");
    sub->add_option("--out", out_path, "write the JSON report here");
  };
  auto *system = app.add_subcommand("system", "print the differential system");
  auto *series = app.add_subcommand("series", "expand the Gamma-series around a base");
  auto *eval = app.add_subcommand("eval", "evaluate the integral by quadrature");
  auto *verify = app.add_subcommand("verify", "check the system on the integral by finite differences");
  for (auto *sub : {system, series, eval, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    hypint::ProblemFile p = hypint::load_problem(problem_path);
    if (order >= 0) p.order = order;
    if (!base_text.empty()) p.base = parse_base(base_text);
    if (tol > 0.0) {
      if (eval->parsed()) p.tolerances.quadrature = tol;
      if (verify->parsed()) p.tolerances.residual = tol;
    }

    hypint::CommandOutput out;
    if (system->parsed())
      out = hypint::cmd_system(p);
    else if (series->parsed())
      out = hypint::cmd_series(p);
    else if (eval->parsed())
      out = hypint::cmd_eval(p);
    else
      out = hypint::cmd_verify(p);

    std::cout << out.text;
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw std::invalid_argument("cannot write " + out_path);
      f << out.report.dump(2) << "\n";
    }
    return out.exit_code;
  } catch (const std::invalid_argument &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const hypint::NumericError &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::overflow_error &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}
