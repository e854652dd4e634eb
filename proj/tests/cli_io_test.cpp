#include "hypint/cli_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace hypint;

namespace {

const std::string problems = HYPINT_PROBLEMS;

int run_cli(const std::string &args)
{
  const std::string cmd = std::string(HYPINT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string expect_invalid(const std::string &text)
{
  try {
    parse_problem_text(text);
  } catch (const std::invalid_argument &e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_SUITE("cli")
{
  TEST_CASE("problem files round-trip")
  {
    for (const char *name : {"gaussian.json", "gaussian_gg.json", "beta.json", "euler_2f1.json",
                             "gaussian_gg_perturbed.json", "airy.json"}) {
      const ProblemFile p = load_problem(problems + "/" + name);
      const ProblemFile q = parse_problem(emit_problem(p));
      CHECK_MESSAGE(p == q, name);
      CHECK(emit_problem(q).dump() == emit_problem(p).dump());
    }
  }

  TEST_CASE("every leg kind round-trips")
  {
    ProductContour c;
    c.chains = {{ContourLeg::ray(Complex(0, 1), 2.0, -1), ContourLeg::segment(Complex(0, 1), Complex(1, 1)),
                 ContourLeg::arc(Complex(1, 0), 1.0, M_PI / 2, -M_PI / 2), ContourLeg::segment(Complex(2, 0), 3.0),
                 ContourLeg::ray(3.0, 0.0)},
                {ContourLeg::line(0.25, Complex(0, 1))}};
    c.branch = {0.5, std::nullopt};
    const ProductContour d = parse_contour(contour_json(c), "/contour");
    CHECK(d.chains == c.chains);
  }

  TEST_CASE("errors name the offending field")
  {
    const std::string base = R"({"dimension": 1, "exponents": [[[1], [2]]])";
    CHECK(expect_invalid("{").find("malformed JSON") != std::string::npos);
    CHECK(expect_invalid(R"({"exponents": [[[1]]]})").find("/dimension") != std::string::npos);
    CHECK(expect_invalid(base + R"(, "u": [[1, 0, 3]]})").find("/u/0") != std::string::npos);
    CHECK(expect_invalid(base + R"(, "coefficients": [[[1, 0]]]})").find("/coefficients/0") != std::string::npos);
    CHECK(expect_invalid(R"({"dimension": 1, "exponents": [[[1], [1, 2]]]})").find("/exponents/0/1") !=
          std::string::npos);
    CHECK(expect_invalid(base + R"(, "contour": [[{"kind": "spiral"}]]})").find("/contour/0/0/kind") !=
          std::string::npos);
    CHECK(expect_invalid(base + R"(, "tolerances": {"residual": -1}})").find("/tolerances/residual") !=
          std::string::npos);
    CHECK(expect_invalid(R"({"schema": 9, "dimension": 1, "exponents": [[[1]]]})").find("/schema") !=
          std::string::npos);
  }

  TEST_CASE("complex values")
  {
    CHECK(complex_json(Complex(1.5, -2)).dump() == "[1.5,-2.0]");
    CHECK(parse_complex(Json::parse("[0.25, 3]"), "/x") == Complex(0.25, 3));
    CHECK(parse_complex(Json::parse("2"), "/x") == Complex(2, 0));
    CHECK_THROWS_AS(parse_complex(Json::parse("[1]"), "/x"), std::invalid_argument);
  }

  TEST_CASE("system command lists the quadratic operators")
  {
    const CommandOutput out = cmd_system(load_problem(problems + "/gaussian_gg.json"));
    CHECK(out.exit_code == 0);
    CHECK(out.text.find("D[c2] - D[c1]^2") != std::string::npos);
    CHECK(out.text.find("c1*D[c1] + 2*c2*D[c2] + u1") != std::string::npos);
    CHECK(out.report["boxes"].size() == 1);
  }

  TEST_CASE("series command dumps exact terms")
  {
    ProblemFile p = load_problem(problems + "/gaussian_gg.json");
    p.base = std::vector<std::size_t>{0};
    p.order = 2;
    const CommandOutput out = cmd_series(p);
    REQUIRE(out.report["terms"].size() == 3);
    CHECK(out.report["terms"][1]["gamma_arguments"][0]["exact"] == "u1 + 2");
    CHECK(out.report["coordinates"][0]["coordinates"][0] == "2");
    p.order = 0;
    CHECK(cmd_series(p).report["terms"].size() == 1);

    p.base = std::vector<std::size_t>{1};
    p.u = {0.0};
    p.order = 1;
    const CommandOutput pole = cmd_series(p);
    CHECK(pole.report["terms"][0]["pole"] == true);
    CHECK(pole.text.find("POLE") != std::string::npos);
  }

  TEST_CASE("eval command")
  {
    const CommandOutput g = cmd_eval(load_problem(problems + "/gaussian.json"));
    CHECK(std::abs(g.report["value"][0].get<double>() - 1.8867673029765435732) < 1e-12);
    const CommandOutput b = cmd_eval(load_problem(problems + "/beta.json"));
    CHECK(std::abs(b.report["value"][0].get<double>() - 1.0 / 6) < 1e-13);
  }

  TEST_CASE("verify command")
  {
    CHECK(cmd_verify(load_problem(problems + "/gaussian_gg.json")).exit_code == 0);
    CHECK(cmd_verify(load_problem(problems + "/euler_2f1.json")).exit_code == 0);
    const CommandOutput bad = cmd_verify(load_problem(problems + "/gaussian_gg_perturbed.json"));
    CHECK(bad.exit_code == 1);
    double worst = 0;
    for (const auto &r : bad.report["residuals"]) worst = std::max(worst, r["relative"].get<double>());
    CHECK(worst > 1e-2);
  }

  TEST_CASE("exit codes of the binary")
  {
    const auto tmp = std::filesystem::temp_directory_path() / "hypint_cli_test";
    std::filesystem::create_directories(tmp);
    CHECK(run_cli("system " + problems + "/gaussian_gg.json") == 0);
    CHECK(run_cli("verify " + problems + "/gaussian_gg.json --out " + (tmp / "r.json").string()) == 0);
    CHECK(std::filesystem::exists(tmp / "r.json"));
    CHECK(run_cli("verify " + problems + "/gaussian_gg_perturbed.json") == 1);
    CHECK(run_cli("eval " + problems + "/does_not_exist.json") == 2);
    CHECK(run_cli("bogus " + problems + "/gaussian.json") == 2);
    CHECK(run_cli("series " + problems + "/gaussian_gg.json --base 7") == 2);

    {
      std::ofstream f(tmp / "no_contour.json");
      f << R"({"dimension": 1, "exponents": [[[1], [2]]], "coefficients": [[[0, 0], [-1, 0]]]})";
    }
    CHECK(run_cli("eval " + (tmp / "no_contour.json").string()) == 2);
    {
      std::ofstream f(tmp / "divergent.json");
      f << R"({"dimension": 1, "exponents": [[[1], [2]]], "coefficients": [[[0, 0], [1, 0]]],
               "contour": [[{"kind": "line", "angle": 0}]]})";
    }
    CHECK(run_cli("eval " + (tmp / "divergent.json").string()) == 3);
    {
      std::ofstream f(tmp / "linear.json");
      f << R"({"dimension": 1, "exponents": [[[1]]], "u": [[1, 0]]})";
    }
    CHECK(run_cli("system " + (tmp / "linear.json").string()) == 0);
    CHECK(run_cli("series " + (tmp / "linear.json").string() + " --order 3") == 0);
    std::filesystem::remove_all(tmp);
  }

  TEST_CASE("json reports are deterministic")
  {
    const ProblemFile p = load_problem(problems + "/gaussian_gg.json");
    CHECK(cmd_series(p).report.dump() == cmd_series(p).report.dump());
    CHECK(cmd_system(p).report.dump() == cmd_system(p).report.dump());
  }
}
