#pragma once

#include "hypint/polynomial.hpp"

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypint {

/// Divergence, accuracy and branch failures. The CLI maps these to exit 3.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DivergenceError : public NumericError
{
public:
  using NumericError::NumericError;
};

class BranchError : public NumericError
{
public:
  using NumericError::NumericError;
};

/// Tolerance not met; carries the best estimate anyway.
class AccuracyError : public NumericError
{
public:
  AccuracyError(const std::string &what, Complex best, double error)
      : NumericError(what), best_(best), error_(error)
  {
  }
  Complex best() const { return best_; }
  double error() const { return error_; }

private:
  Complex best_;
  double error_;
};

/// One piece of a per-variable contour. Orientation -1 traverses it backwards.
struct ContourLeg
{
  enum class Kind
  {
    Segment,  // from a to b
    Ray,      // a + s e^{i angle}, s >= 0
    Arc,      // center + radius e^{i(start + s span)}, s in [0, 1]
    Line      // a + s e^{i angle}, s real
  };

  Kind kind = Kind::Segment;
  Complex a = 0.0;
  Complex b = 0.0;
  double angle = 0.0;
  double radius = 0.0;
  double start = 0.0;
  double span = 0.0;
  int orientation = 1;

  static ContourLeg segment(Complex from, Complex to, int orientation = 1);
  static ContourLeg ray(Complex origin, double angle, int orientation = 1);
  static ContourLeg arc(Complex center, double radius, double start, double span, int orientation = 1);
  static ContourLeg line(double angle, Complex through = 0.0, int orientation = 1);

  /// Throws std::invalid_argument on degenerate data.
  void validate() const;
  bool bounded() const { return kind == Kind::Segment || kind == Kind::Arc; }

  friend bool operator==(const ContourLeg &, const ContourLeg &) = default;
};

using ContourChain = std::vector<ContourLeg>;

/// One chain per integration variable. branch[k], when set, is the argument
/// of the k-th multivalued factor (t_1..t_n, then P_1..P_k) at the anchor
/// point, which sits near the finite start of each chain's first leg.
struct ProductContour
{
  std::vector<ContourChain> chains;
  std::vector<std::optional<double>> branch;

  int dimension() const { return static_cast<int>(chains.size()); }
  /// Throws std::invalid_argument on empty or disconnected chains.
  void validate() const;

  friend bool operator==(const ProductContour &, const ProductContour &) = default;
};

/// e^P alpha with alpha one of: 1, t^{u-1}, or prod_i P_i^{v_i} t^{u-1}.
template <typename Real>
struct IntegrandSpec
{
  enum class Alpha
  {
    One,
    Monomial,
    PowerProduct
  };

  SparsePolynomial<std::complex<Real>> kernel;
  Alpha alpha = Alpha::One;
  ComplexVector<Real> u;
  std::vector<SparsePolynomial<std::complex<Real>>> factors;
  ComplexVector<Real> v;

  explicit IntegrandSpec(SparsePolynomial<std::complex<Real>> p) : kernel(std::move(p)) {}
  int dimension() const { return kernel.dimension(); }
  void validate() const;
};

struct QuadratureOptions
{
  double rel_tol = 1e-9;
  double abs_floor = 1e-14;
  double tail_cutoff = 1e-18;  // truncate unbounded legs below this fraction of the on-leg maximum
  double decay_level = -50.0;  // Re P must fall below this on every unbounded leg
  int max_intervals = 4000;    // per one-dimensional integral
};

template <typename Real>
struct QuadratureResult
{
  std::complex<Real> value;
  Real error = 0;
  long evaluations = 0;
};

/// Iterated adaptive Gauss-Legendre quadrature over the product contour,
/// innermost variable last. Multivalued factors are continued along each
/// chain from the anchor point. Throws DivergenceError, BranchError, or
/// AccuracyError; std::invalid_argument for malformed input.
template <typename Real>
QuadratureResult<Real> integrate(const IntegrandSpec<Real> &spec, const ProductContour &contour,
                                 const QuadratureOptions &options = {});

extern template QuadratureResult<double> integrate(const IntegrandSpec<double> &, const ProductContour &,
                                                   const QuadratureOptions &);
extern template QuadratureResult<long double> integrate(const IntegrandSpec<long double> &, const ProductContour &,
                                                        const QuadratureOptions &);

/// e^P with alpha = 1.
QuadratureResult<double> proper_integral(const Polynomial &p, const ProductContour &contour,
                                         const QuadratureOptions &options = {});

/// GG-function: e^{sum_w c_w t^w} t^{u-1}.
QuadratureResult<double> gg_eval(const ExponentSet &set, const Eigen::VectorXcd &c, const Eigen::VectorXcd &u,
                                 const ProductContour &contour, const QuadratureOptions &options = {});

/// Generalized Euler integral prod_i P_i^{v_i} t^{u-1}, no exponential kernel.
QuadratureResult<double> euler_integral_eval(const std::vector<Polynomial> &factors, const Eigen::VectorXcd &v,
                                             const Eigen::VectorXcd &u, const ProductContour &contour,
                                             const QuadratureOptions &options = {});

} // namespace hypint
