#pragma once

#include "hypint/diff_operator.hpp"
#include "hypint/gamma_series.hpp"
#include "hypint/quadrature.hpp"

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

namespace hypint {

using VectorXcl = ComplexVector<long double>;

/// c -> value, with c listed in the variable order of a CoeffSpace.
/// Must be deterministic; it is evaluated concurrently.
struct CoeffFunction
{
  std::function<ComplexL(const VectorXcl &c)> fn;
  std::string description;
};

struct FdOptions
{
  double h = 1e-4;          // scaled per variable by max(1, |c|)
  bool richardson = true;   // one level, (4 D(h/2) - D(h)) / 3
  double tolerance = 1e-4;  // on the relative residual
};

/// Central-difference value of op f at the center. Parameter symbols in
/// op's scalars take their values from `binding` (u_1..u_n, v_1..v_k).
ComplexL fd_apply(const DiffOperator &op, const CoeffFunction &f, const VectorXcl &center,
                  const Eigen::VectorXcd &binding, const FdOptions &options = {});

struct ResidualReport
{
  std::string op;
  std::vector<Complex> center;
  double h = 0.0;
  Complex residual;
  double magnitude = 0.0;   // |residual|
  double value = 0.0;       // |f(center)|
  double largest_term = 0.0;
  double relative = 0.0;    // magnitude / max(value, largest_term)
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

/// Residual of op f at the center, relative to max(|f|, largest single term).
ResidualReport residual_report(const DiffOperator &op, const CoeffFunction &f, const VectorXcl &center,
                               const Eigen::VectorXcd &binding, const FdOptions &options = {});

/// Reports for several operators, evaluated in parallel.
std::vector<ResidualReport> residual_reports(const std::vector<DiffOperator> &ops, const CoeffFunction &f,
                                             const VectorXcl &center, const Eigen::VectorXcd &binding,
                                             const FdOptions &options = {});

/// Generators of the GG-system of A: the relations D[c_w] = D[c_e1]^w1 ... for
/// every nonlinear w (skipped, with a note, when linear exponents are
/// missing), the box operators of the kernel basis, and one Euler operator
/// per axis.
struct SystemListing
{
  std::vector<DiffOperator> relations;
  std::vector<DiffOperator> boxes;
  std::vector<DiffOperator> euler;
  std::vector<std::string> notes;

  std::vector<DiffOperator> all() const;
};

SystemListing gg_system(const CoeffSpacePtr &space);

/// Cayley layout: box operators of the joint set, Euler y per block, Euler t
/// per axis, and the constant-term relations of each block where defined.
SystemListing cayley_system(const CoeffSpacePtr &space);

/// e^{sum c_w t^w} t^{u-1} on the contour, as a function of c, in long double.
CoeffFunction gg_function(const CoeffSpacePtr &space, const Eigen::VectorXcd &u, const ProductContour &contour,
                          const QuadratureOptions &options = {});

/// prod_i P_i^{v_i} t^{u-1} on the contour, P_i read from the Cayley variables.
CoeffFunction euler_function(const CoeffSpacePtr &space, const Eigen::VectorXcd &v, const Eigen::VectorXcd &u,
                             const ProductContour &contour, const QuadratureOptions &options = {});

std::vector<ResidualReport> check_gg_system(const CoeffSpacePtr &space, const Eigen::VectorXcd &u,
                                            const CoeffFunction &f, const VectorXcl &center,
                                            const FdOptions &options = {});
std::vector<ResidualReport> check_gg_system(const ExponentSet &set, const Eigen::VectorXcd &u,
                                            const ProductContour &contour, const Eigen::VectorXcd &center,
                                            const FdOptions &options = {}, const QuadratureOptions &quad = {});

std::vector<ResidualReport> check_cayley_consistency(const std::vector<ExponentSet> &blocks, const Eigen::VectorXcd &v,
                                                     const Eigen::VectorXcd &u, const ProductContour &contour,
                                                     const Eigen::VectorXcd &center, const FdOptions &options = {},
                                                     const QuadratureOptions &quad = {});

/// Root of sum_w c_w x^w near x0, continued from `from` to `to` in
/// coefficient steps of at most `max_step`. Throws NumericError when the
/// derivative collapses (|P'| < 1e-8).
ComplexL continue_root(const std::vector<int> &exponents, const VectorXcl &from, const VectorXcl &to, ComplexL x0,
                       double max_step = 0.05);

struct RootCheck
{
  ComplexL root;  // at the center
  std::vector<ResidualReport> reports;
};

/// gamma(x(c)) and gamma(x(c))/P'(x(c)) for the root x of P - y0 near x0,
/// against the constant-term relations of the single Cayley block built
/// from supp(P - y0) together with the constant and linear exponents.
RootCheck check_root_theorems(const Polynomial &p, Complex y0, Complex x0,
                              const std::function<ComplexL(ComplexL)> &gamma_fn, const FdOptions &options = {});

struct JacobianCheck
{
  VectorXcl x;
  ComplexL jacobian;
  ComplexL quantity;  // gamma(x) / det L
  std::vector<ResidualReport> reports;
};

/// L x + b = 0. Reports the Euler y relations with v_i = -1 on the
/// coefficients of each affine P_i.
JacobianCheck check_jacobian_case(const Eigen::MatrixXcd &linear, const Eigen::VectorXcd &constant,
                                  const std::function<ComplexL(const VectorXcl &)> &gamma_fn,
                                  const FdOptions &options = {});

struct SeriesComparison
{
  Complex kappa;
  std::vector<double> deviations;  // per compared point after the first
  double max_deviation = 0.0;
  double kappa_spread = 0.0;       // max relative change of a refitted kappa
  std::vector<std::string> notices;
};

/// Fits kappa at the first point, then compares kappa * series with the
/// oracle. Points whose tail exceeds tail_limit * |value| are skipped.
SeriesComparison series_vs_oracle(const GammaSeries &s, const std::function<Complex(const Eigen::VectorXcd &)> &oracle,
                                  const std::vector<Eigen::VectorXcd> &points, double tail_limit = 1e-8);

} // namespace hypint
