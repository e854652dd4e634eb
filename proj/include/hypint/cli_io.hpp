#pragma once

#include "hypint/exponent_lattice.hpp"
#include "hypint/gamma_series.hpp"
#include "hypint/quadrature.hpp"
#include "hypint/verification.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hypint {

using Json = nlohmann::ordered_json;

struct Tolerances
{
  double quadrature = 1e-9;
  double residual = 1e-4;
  double step = 1e-4;
  bool richardson = true;

  friend bool operator==(const Tolerances &, const Tolerances &) = default;
};

/// Problem description shared by all commands.
///
/// blocks == 0: one polynomial over exponents[0] (GG-function, alpha = t^{u-1},
/// or alpha = 1 when u is empty). blocks == k >= 1: polynomials P_1..P_k over
/// exponents[0..k-1] entering as prod P_i^{v_i} t^{u-1}.
struct ProblemFile
{
  int schema = 1;
  int dimension = 0;
  int blocks = 0;
  std::vector<ExponentSet> exponents;
  std::vector<std::vector<Complex>> coefficients;
  std::vector<Complex> u;
  std::vector<Complex> v;
  /// Parameters used by the Euler operators in `verify`; default to u and v.
  std::optional<std::vector<Complex>> euler_u;
  std::optional<std::vector<Complex>> euler_v;
  std::optional<std::vector<std::size_t>> base;
  std::optional<ProductContour> contour;
  int order = 12;
  Tolerances tolerances;

  friend bool operator==(const ProblemFile &, const ProblemFile &) = default;
};

/// Throws std::invalid_argument naming the offending field, e.g. "/u/0".
ProblemFile parse_problem(const Json &j);
ProblemFile parse_problem_text(const std::string &text);
ProblemFile load_problem(const std::string &path);
Json emit_problem(const ProblemFile &p);

Json complex_json(Complex z);
Complex parse_complex(const Json &j, const std::string &where);
Json contour_json(const ProductContour &c);
ProductContour parse_contour(const Json &j, const std::string &where);
Json residual_json(const ResidualReport &r);

/// Coefficient space of the problem: single set or Cayley layout.
CoeffSpacePtr problem_space(const ProblemFile &p);
/// Coefficients in the space's variable order.
Eigen::VectorXcd problem_coefficients(const ProblemFile &p);
/// Parameter values (u, then v) in the space's parameter order.
Eigen::VectorXcd problem_binding(const ProblemFile &p);

struct CommandOutput
{
  Json report;
  std::string text;
  int exit_code = 0;
};

CommandOutput cmd_system(const ProblemFile &p);
CommandOutput cmd_series(const ProblemFile &p);
CommandOutput cmd_eval(const ProblemFile &p);
CommandOutput cmd_verify(const ProblemFile &p);

} // namespace hypint
