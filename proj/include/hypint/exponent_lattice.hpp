#pragma once

#include "hypint/rational.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hypint {

/// Multi-degree (w^1, ..., w^n) of a monomial t^w.
using ExponentVector = Eigen::VectorXi;

ExponentVector exponent(std::initializer_list<int> entries);

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLexLess
{
  bool operator()(const ExponentVector &a, const ExponentVector &b) const;
};

bool lex_less(const ExponentVector &a, const ExponentVector &b);

/// Renders "2" for n = 1 and "(1,0,2)" otherwise.
std::string format_exponent(const ExponentVector &w);

/// Finite set A of non-negative exponent vectors in Z^n, in a fixed member
/// order. The order matters: coefficient variables, lattice relations and
/// bases all refer to members by position.
class ExponentSet
{
public:
  ExponentSet() = default;
  ExponentSet(int dimension, std::vector<ExponentVector> members);

  /// Convenience for tests and literals: ExponentSet::of(1, {{1}, {2}}).
  static ExponentSet of(int dimension, std::initializer_list<std::initializer_list<int>> members);

  int dimension() const { return dimension_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const ExponentVector &operator[](std::size_t i) const { return members_[i]; }
  const std::vector<ExponentVector> &members() const { return members_; }

  std::optional<std::size_t> index_of(const ExponentVector &w) const;
  bool contains(const ExponentVector &w) const { return index_of(w).has_value(); }

  /// n x |A| integer matrix whose columns are the members.
  Eigen::MatrixXi matrix() const;

  friend bool operator==(const ExponentSet &a, const ExponentSet &b);

private:
  int dimension_ = 0;
  std::vector<ExponentVector> members_;
};

/// n linearly independent members of an exponent set.
class Base
{
public:
  Base(ExponentSet parent, std::vector<std::size_t> indices);

  const ExponentSet &parent() const { return parent_; }
  const std::vector<std::size_t> &indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }

  /// n x n integer matrix with the base vectors as columns.
  const Eigen::MatrixXi &matrix() const { return matrix_; }
  /// Exact inverse of matrix().
  const RationalMatrix &inverse() const { return inverse_; }
  Rational determinant() const { return determinant_; }

  bool contains_index(std::size_t i) const;
  /// Member indices of A \ B in ascending order.
  std::vector<std::size_t> complement() const;

private:
  ExponentSet parent_;
  std::vector<std::size_t> indices_;
  Eigen::MatrixXi matrix_;
  RationalMatrix inverse_;
  Rational determinant_;
};

/// Integer relation sum_w coefficients[w] * w = 0 over the members of a set.
struct LatticeRelation
{
  Eigen::VectorXi coefficients;
  bool homogeneous = false;

  friend bool operator==(const LatticeRelation &, const LatticeRelation &) = default;
};

/// Throws if the relation does not hold exactly over `set` or is zero.
void validate_relation(const LatticeRelation &relation, const ExponentSet &set);

/// Coordinates l of w in the base: sum_j l^j w_j = w, exactly.
RationalVector base_coords(const Base &base, const ExponentVector &w);

/// Basis of the integer kernel lattice of the member matrix of A (with an
/// all-ones row appended when `homogeneous`). |A| - rank vectors, sign
/// normalised so the first nonzero entry is positive.
std::vector<LatticeRelation> kernel_basis(const ExponentSet &set, bool homogeneous);

/// Cayley set A_1 x {e_1} u ... u A_k x {e_k} in Z^{n+k}, block by block.
ExponentSet cayley_set(std::span<const ExponentSet> blocks);

/// All bases of A, lexicographic in the index tuple.
std::vector<Base> enumerate_bases(const ExponentSet &set);

/// Exact determinant by fraction-free elimination.
Rational determinant(const RationalMatrix &m);

/// Exact solve of m x = rhs; throws std::domain_error if m is singular.
RationalVector solve_exact(const RationalMatrix &m, const RationalVector &rhs);

RationalMatrix to_rational(const Eigen::MatrixXi &m);

} // namespace hypint
