#pragma once

#include "hypint/diff_operator.hpp"
#include "hypint/exponent_lattice.hpp"
#include "hypint/parameters.hpp"
#include "hypint/polynomial.hpp"

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <vector>

namespace hypint {

/// Which coefficients are series variables. With a base B the series runs
/// over a_w, w in A \ B, and the coefficient functions depend on a_1..a_n;
/// without a base (the standard expansion) every member of A is a series
/// variable. `center` holds c^0 per member, a_w = c_w - c^0_w.
class SeriesLayout
{
public:
  SeriesLayout(CoeffSpacePtr space, std::optional<Base> base, Eigen::VectorXcd center);
  /// P_0 = 0 layout for the Gamma-series of a GG-function.
  static SeriesLayout gg(CoeffSpacePtr space, const Base &base);

  const CoeffSpacePtr &space() const { return space_; }
  const ExponentSet &set() const { return space_->joint(); }
  const std::optional<Base> &base() const { return base_; }
  const std::vector<std::size_t> &series_indices() const { return series_; }
  const Eigen::VectorXcd &center() const { return center_; }
  bool zero_center() const { return center_.isZero(0.0); }
  int parameters() const { return space_->parameters().size(); }

  /// Position of member `member` among the series variables, or -1.
  int series_position(std::size_t member) const;
  /// Position of member `member` in the base, or -1.
  int base_position(std::size_t member) const;

private:
  CoeffSpacePtr space_;
  std::optional<Base> base_;
  std::vector<std::size_t> series_;
  Eigen::VectorXcd center_;
};

/// m -> C_m(a_1, ..., a_n). Must be deterministic.
struct CoefficientOracle
{
  std::function<Complex(const Eigen::VectorXi &m, const Eigen::VectorXcd &base_values)> fn;
  bool pure = true;
};

/// prefactor * prod_j Gamma(gamma_args_j) (-a_j)^{base_exponents_j} * prod_w a_w^{powers_w}
/// for closed-form terms, or prefactor * C_m(a) * prod_w a_w^{powers_w} for
/// oracle-backed ones.
struct SeriesTerm
{
  Eigen::VectorXi m;
  Eigen::VectorXi powers;
  ParamPoly prefactor;
  std::vector<AffineForm> gamma_args;
  std::vector<AffineForm> base_exponents;
  bool from_oracle = false;
  bool pole = false;

  int order() const { return powers.sum(); }
};

/// Numeric value of one Gamma-type coefficient C_m at a parameter binding.
struct TermValue
{
  Complex scalar;                  // prod_j Gamma(s_j(m))
  std::vector<Complex> exponents;  // rho_j = -s_j(m), the powers of (-a_j)
  std::vector<AffineForm> s;       // s_j(m), exact
  bool pole = false;
};

enum class GammaForm
{
  Direct,     // Gamma(s)
  Reciprocal  // (-1)^floor(offset) / Gamma(1 - s); drops a per-class constant
};

class GammaSeries
{
public:
  GammaSeries(SeriesLayout layout, int order, Eigen::VectorXcd binding);

  const SeriesLayout &layout() const { return layout_; }
  int order() const { return order_; }
  const Eigen::VectorXcd &binding() const { return binding_; }
  const std::vector<SeriesTerm> &terms() const { return terms_; }
  std::vector<SeriesTerm> &terms() { return terms_; }
  const std::optional<CoefficientOracle> &oracle() const { return oracle_; }
  void set_oracle(CoefficientOracle oracle) { oracle_ = std::move(oracle); }

  /// Orders above this are boundary terms: they miss contributions from
  /// orders past the truncation. Equals order() for a freshly expanded series.
  int exact_through() const { return exact_through_; }
  void set_exact_through(int k) { exact_through_ = k; }

  /// Recomputes pole flags under the current binding.
  void refresh_poles();

  GammaSeries &operator+=(const GammaSeries &o);
  friend GammaSeries operator+(GammaSeries a, const GammaSeries &b) { return a += b; }

private:
  SeriesLayout layout_;
  int order_;
  Eigen::VectorXcd binding_;
  std::vector<SeriesTerm> terms_;
  std::optional<CoefficientOracle> oracle_;
  int exact_through_;
};

/// All multi-indices of the given length with |m| <= order, graded lex.
std::vector<Eigen::VectorXi> multi_indices(int length, int order);

/// Affine weights of the Gamma arguments: u_j per t axis and, for a Cayley
/// space, -v_i for the lambda axes.
std::vector<AffineForm> gg_weights(const CoeffSpace &space);

/// Exact s(m) = s_0 + sum_w m_w l_w with B s_0 = weights.
std::vector<AffineForm> gg_gamma_arguments(const SeriesLayout &layout, const Eigen::VectorXi &m);

/// General expansion: coefficients come from the oracle, weights 1/prod m_w!.
GammaSeries expand_general(const SeriesLayout &layout, CoefficientOracle oracle, int order,
                           Eigen::VectorXcd binding = {});

/// Closed-form Gamma product coefficient for monomial alpha and P_0 = 0,
/// with the contour constant fixed to 1.
TermValue gg_gamma_coefficient(const Eigen::VectorXi &m, const Eigen::VectorXcd &binding, const SeriesLayout &layout);

/// Gamma-series of the GG-function to total order `order` (default 12).
GammaSeries gg_series(const SeriesLayout &layout, const Eigen::VectorXcd &binding, int order = 12);

/// sum_m prod a_w^{m_w}/m_w! * moment(m) over all of A, where moment(m) is
/// the integral with alpha multiplied by t^{sum m_w w} at P_0.
GammaSeries standard_expansion(const Polynomial &center, const ExponentSet &set,
                               std::function<Complex(const Eigen::VectorXi &m)> moment, int order);

struct SeriesValue
{
  Complex value;
  double tail = 0.0;  // magnitude of the highest stored order's contribution
};

/// Sums the series at a_w (one entry per member of A). Principal branch for
/// (-a_j)^rho. Throws on pole terms in the direct form and on a_j = 0 with
/// an exponent of negative real part.
SeriesValue evaluate_series(const GammaSeries &s, const Eigen::VectorXcd &a, GammaForm form = GammaForm::Direct);

/// Same, at coefficients c (a = c - c^0).
SeriesValue evaluate_at_coefficients(const GammaSeries &s, const Eigen::VectorXcd &c,
                                     GammaForm form = GammaForm::Direct);

/// Exact term-wise action of a differential operator in the coefficient
/// variables. Like terms are merged with the Gamma shift identity, so
/// cancellations are exact; orders past exact_through() are boundary terms.
GammaSeries apply_to_series(const DiffOperator &op, const GammaSeries &s);

} // namespace hypint
