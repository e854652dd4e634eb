#pragma once

#include "hypint/exponent_lattice.hpp"
#include "hypint/parameters.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypint {

/// Coefficient c_w (block 0) or c_w^{(i)} (block i >= 1) of the polynomial(s).
struct CoeffVar
{
  int block = 0;
  ExponentVector exponent;
};

/// Ordered list of coefficient variables. A single polynomial over A gives
/// one variable per member of A; k polynomials give the Cayley layout, in
/// the member order of cayley_set(A_1, ..., A_k).
class CoeffSpace
{
public:
  static std::shared_ptr<const CoeffSpace> single(ExponentSet set);
  static std::shared_ptr<const CoeffSpace> cayley(std::vector<ExponentSet> blocks);

  int size() const { return static_cast<int>(vars_.size()); }
  const CoeffVar &operator[](int i) const { return vars_[static_cast<std::size_t>(i)]; }
  /// 0 for a single polynomial, k otherwise.
  int blocks() const { return static_cast<int>(block_sets_.size()) - (is_cayley_ ? 0 : 1); }
  bool is_cayley() const { return is_cayley_; }
  /// Ambient dimension n of the t variables.
  int dimension() const { return dimension_; }
  /// Exponent set of a block (block 0 for a single polynomial, 1..k otherwise).
  const ExponentSet &block_set(int block) const;
  /// A for a single polynomial, the Cayley set otherwise.
  const ExponentSet &joint() const { return joint_; }

  std::optional<int> index_of(int block, const ExponentVector &w) const;
  std::vector<int> block_indices(int block) const;

  /// "c2", "c(1,1)", or "c1_2" when there are several blocks.
  std::string name(int var) const;

  ParameterSpace parameters() const { return ParameterSpace(dimension_, blocks()); }

  friend bool operator==(const CoeffSpace &a, const CoeffSpace &b);

private:
  CoeffSpace() = default;

  bool is_cayley_ = false;
  int dimension_ = 0;
  std::vector<ExponentSet> block_sets_;
  ExponentSet joint_;
  std::vector<CoeffVar> vars_;
};

using CoeffSpacePtr = std::shared_ptr<const CoeffSpace>;

/// scalar * c^monomial * D^derivative, coefficient monomial to the left.
struct OperatorTerm
{
  ParamPoly scalar;
  Eigen::VectorXi monomial;
  Eigen::VectorXi derivative;
};

/// Differential operator in the coefficient variables, kept in normal form
/// (coefficients left of derivatives). Scalars are exact polynomials in the
/// symbolic parameters u_j, v_i. Terms keep insertion order for rendering;
/// equal (monomial, derivative) keys are merged on insertion.
class DiffOperator
{
public:
  explicit DiffOperator(CoeffSpacePtr space);

  const CoeffSpacePtr &space() const { return space_; }
  const std::vector<OperatorTerm> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int parameters() const { return space_->parameters().size(); }

  void add_term(const ParamPoly &scalar, const Eigen::VectorXi &monomial, const Eigen::VectorXi &derivative);
  void add_term(const Rational &scalar, const Eigen::VectorXi &monomial, const Eigen::VectorXi &derivative);

  /// Highest total derivative order over the terms.
  int order() const;

  DiffOperator &operator+=(const DiffOperator &o);
  DiffOperator &operator-=(const DiffOperator &o);
  friend DiffOperator operator+(DiffOperator a, const DiffOperator &b) { return a += b; }
  friend DiffOperator operator-(DiffOperator a, const DiffOperator &b) { return a -= b; }
  friend DiffOperator operator*(const ParamPoly &s, const DiffOperator &op);
  DiffOperator operator-() const;

  /// Composition a(b(f)), renormalised with the Weyl commutation rule.
  friend DiffOperator operator*(const DiffOperator &a, const DiffOperator &b);

  /// Text form, e.g. "c1*D[c1] + 2*c2*D[c2] + u1".
  std::string str() const;

  /// Structural equality of the normal forms (term order ignored).
  friend bool operator==(const DiffOperator &a, const DiffOperator &b);

private:
  void check_space(const DiffOperator &o) const;

  CoeffSpacePtr space_;
  std::vector<OperatorTerm> terms_;
};

Eigen::VectorXi unit_multi_index(int size, int var, int power = 1);

/// D^{u+} - D^{u-} for a lattice relation over space->joint().
DiffOperator box_operator(const LatticeRelation &relation, const CoeffSpacePtr &space);

/// sum_w w^j c_w D[c_w] + shift; the shift defaults to the symbol u_{j+1}.
DiffOperator euler_t_operator(const CoeffSpacePtr &space, int axis);
DiffOperator euler_t_operator(const CoeffSpacePtr &space, int axis, const ParamPoly &shift);

/// sum_{w in A_i} c_w^{(i)} D[c_w^{(i)}] - shift; the shift defaults to v_i.
/// `block` counts from 1.
DiffOperator euler_y_operator(const CoeffSpacePtr &space, int block);
DiffOperator euler_y_operator(const CoeffSpacePtr &space, int block, const ParamPoly &shift);

/// For a single polynomial: D[c_w] - D[c_e1]^{w^1} ... D[c_en]^{w^n}.
/// For block i of a Cayley space: D[c_0]^{|w|-1} D[c_w] - the same right side.
/// Throws std::invalid_argument when the constant or linear exponents the
/// relation needs are missing.
DiffOperator gg_relation_operator(const CoeffSpacePtr &space, const ExponentVector &w, int block = 0);

} // namespace hypint
