#pragma once

#include "hypint/exponent_lattice.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hypint {

using Complex = std::complex<double>;
using ComplexL = std::complex<long double>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Sparse polynomial sum_w c_w t^w in `dimension` variables. Scalar is a
/// std::complex<Real>; the long double instantiation is what the finite
/// difference checks run on. Only exact zeros are dropped from the support.
template <typename Scalar>
class SparsePolynomial
{
public:
  using Terms = std::map<ExponentVector, Scalar, GradedLexLess>;

  SparsePolynomial() = default;
  explicit SparsePolynomial(int dimension) : dimension_(dimension)
  {
    if (dimension <= 0) throw std::invalid_argument("polynomial dimension must be positive");
  }
  SparsePolynomial(int dimension, std::initializer_list<std::pair<ExponentVector, Scalar>> terms)
      : SparsePolynomial(dimension)
  {
    for (const auto &[w, c] : terms) add(w, c);
  }

  /// Terms over `set` with coefficients listed in member order.
  static SparsePolynomial from_coefficients(const ExponentSet &set, std::span<const Scalar> coefficients)
  {
    if (coefficients.size() != set.size()) throw std::invalid_argument("coefficient count does not match exponent set");
    SparsePolynomial p(set.dimension());
    for (std::size_t i = 0; i < set.size(); ++i) p.add(set[i], coefficients[i]);
    return p;
  }

  int dimension() const { return dimension_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Scalar coefficient(const ExponentVector &w) const
  {
    const auto it = terms_.find(w);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add(const ExponentVector &w, const Scalar &c)
  {
    check_key(w);
    if (!std::isfinite(std::real(c)) || !std::isfinite(std::imag(c)))
      throw std::invalid_argument("non-finite polynomial coefficient");
    auto [it, inserted] = terms_.try_emplace(w, Scalar(0));
    it->second += c;
    if (it->second == Scalar(0)) terms_.erase(it);
  }

  void set(const ExponentVector &w, const Scalar &c)
  {
    terms_.erase(w);
    add(w, c);
  }

  /// Support in graded lexicographic order.
  ExponentSet support() const
  {
    std::vector<ExponentVector> ws;
    for (const auto &[w, c] : terms_) ws.push_back(w);
    return ExponentSet(dimension_, std::move(ws));
  }

  int degree(int axis) const
  {
    int d = 0;
    for (const auto &[w, c] : terms_) d = std::max(d, w[axis]);
    return d;
  }

  template <typename Other>
  SparsePolynomial<Other> cast() const
  {
    SparsePolynomial<Other> out(dimension_);
    for (const auto &[w, c] : terms_) out.add(w, Other(c));
    return out;
  }

  SparsePolynomial &operator+=(const SparsePolynomial &o)
  {
    check_dimension(o);
    for (const auto &[w, c] : o.terms_) add(w, c);
    return *this;
  }
  SparsePolynomial &operator-=(const SparsePolynomial &o)
  {
    check_dimension(o);
    for (const auto &[w, c] : o.terms_) add(w, -c);
    return *this;
  }
  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial &b) { return a += b; }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial &b) { return a -= b; }
  friend SparsePolynomial operator*(const Scalar &s, const SparsePolynomial &p)
  {
    SparsePolynomial out(p.dimension_);
    for (const auto &[w, c] : p.terms_) out.add(w, s * c);
    return out;
  }

  friend bool operator==(const SparsePolynomial &a, const SparsePolynomial &b)
  {
    return a.dimension_ == b.dimension_ && a.terms_ == b.terms_;
  }

private:
  void check_key(const ExponentVector &w) const
  {
    if (w.size() != dimension_) throw std::invalid_argument("exponent " + format_exponent(w) + " has wrong length");
    if ((w.array() < 0).any()) throw std::invalid_argument("negative exponent " + format_exponent(w));
  }
  void check_dimension(const SparsePolynomial &o) const
  {
    if (o.dimension_ != dimension_) throw std::invalid_argument("polynomial dimension mismatch");
  }

  int dimension_ = 0;
  Terms terms_;
};

using Polynomial = SparsePolynomial<Complex>;
using PolynomialL = SparsePolynomial<ComplexL>;

/// sum_w c_w t^w at the point t.
template <typename Scalar>
Scalar evaluate(const SparsePolynomial<Scalar> &p, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &t)
{
  if (t.size() != p.dimension()) throw std::invalid_argument("evaluate: point has wrong length");
  Scalar sum(0);
  for (const auto &[w, c] : p.terms()) {
    Scalar m = c;
    for (Eigen::Index j = 0; j < w.size(); ++j)
      for (int e = 0; e < w[j]; ++e) m *= t[j];
    sum += m;
  }
  return sum;
}

/// d/dt_axis, axis counted from zero.
template <typename Scalar>
SparsePolynomial<Scalar> partial_derivative(const SparsePolynomial<Scalar> &p, int axis)
{
  if (axis < 0 || axis >= p.dimension()) throw std::out_of_range("partial_derivative: axis out of range");
  SparsePolynomial<Scalar> out(p.dimension());
  for (const auto &[w, c] : p.terms()) {
    if (w[axis] == 0) continue;
    ExponentVector v = w;
    v[axis] -= 1;
    out.add(v, c * Scalar(static_cast<typename Scalar::value_type>(w[axis])));
  }
  return out;
}

/// lambda_1 P_1 + ... + lambda_k P_k in the variables (t_1..t_n, lambda_1..lambda_k).
template <typename Scalar>
SparsePolynomial<Scalar> cayley_polynomial(std::span<const SparsePolynomial<Scalar>> parts)
{
  if (parts.empty()) throw std::invalid_argument("cayley_polynomial needs at least one polynomial");
  const int n = parts.front().dimension();
  const int k = static_cast<int>(parts.size());
  SparsePolynomial<Scalar> out(n + k);
  for (int i = 0; i < k; ++i) {
    if (parts[i].dimension() != n) throw std::invalid_argument("cayley_polynomial: dimension mismatch");
    for (const auto &[w, c] : parts[i].terms()) {
      ExponentVector lifted = ExponentVector::Zero(n + k);
      lifted.head(n) = w;
      lifted[n + i] = 1;
      out.add(lifted, c);
    }
  }
  return out;
}

/// P = P_0 + sum_w a_w t^w over a declared exponent set.
template <typename Scalar>
struct Perturbation
{
  ExponentSet declared;
  SparsePolynomial<Scalar> center;
  std::map<ExponentVector, Scalar, GradedLexLess> deltas;

  Perturbation(ExponentSet set, SparsePolynomial<Scalar> p0, std::map<ExponentVector, Scalar, GradedLexLess> a = {})
      : declared(std::move(set)), center(std::move(p0)), deltas(std::move(a))
  {
    if (center.dimension() != declared.dimension()) throw std::invalid_argument("perturbation: dimension mismatch");
    for (const auto &[w, c] : center.terms())
      if (!declared.contains(w)) throw std::invalid_argument("center term " + format_exponent(w) + " outside A");
    for (const auto &[w, c] : deltas)
      if (!declared.contains(w)) throw std::invalid_argument("perturbation " + format_exponent(w) + " outside A");
  }
};

template <typename Scalar>
SparsePolynomial<Scalar> apply_perturbation(const Perturbation<Scalar> &pert)
{
  SparsePolynomial<Scalar> out = pert.center;
  for (const auto &[w, a] : pert.deltas) out.add(w, a);
  return out;
}

} // namespace hypint
