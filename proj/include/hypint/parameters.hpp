#pragma once

#include "hypint/exponent_lattice.hpp"
#include "hypint/polynomial.hpp"
#include "hypint/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace hypint {

/// Named symbolic parameters: u_1..u_n (monomial exponents of alpha) followed
/// by v_1..v_k (powers of the P_i in a generalized Euler integral).
class ParameterSpace
{
public:
  ParameterSpace() = default;
  ParameterSpace(int n_u, int n_v);

  int size() const { return n_u_ + n_v_; }
  int n_u() const { return n_u_; }
  int n_v() const { return n_v_; }
  /// Position of u_{j+1} / v_{i+1}.
  int u(int j) const;
  int v(int i) const;
  const std::vector<std::string> &names() const { return names_; }

  friend bool operator==(const ParameterSpace &, const ParameterSpace &) = default;

private:
  int n_u_ = 0, n_v_ = 0;
  std::vector<std::string> names_;
};

/// constant + sum_p coefficient[p] * param_p, exact.
class AffineForm
{
public:
  AffineForm() = default;
  explicit AffineForm(int parameters, Rational constant = Rational(0));

  static AffineForm parameter(int parameters, int index, Rational scale = Rational(1));

  int parameters() const { return static_cast<int>(linear_.size()); }
  const RationalVector &linear() const { return linear_; }
  const Rational &constant() const { return constant_; }
  bool is_constant() const;

  AffineForm &operator+=(const AffineForm &o);
  AffineForm &operator-=(const AffineForm &o);
  AffineForm &operator+=(const Rational &c)
  {
    constant_ += c;
    return *this;
  }
  friend AffineForm operator+(AffineForm a, const AffineForm &b) { return a += b; }
  friend AffineForm operator-(AffineForm a, const AffineForm &b) { return a -= b; }
  friend AffineForm operator+(AffineForm a, const Rational &c) { return a += c; }
  friend AffineForm operator-(AffineForm a, const Rational &c) { return a += -c; }
  friend AffineForm operator*(const Rational &s, const AffineForm &a);
  AffineForm operator-() const { return Rational(-1) * *this; }

  /// Same linear part; constants may differ.
  bool same_linear_part(const AffineForm &o) const;

  template <typename Real>
  std::complex<Real> evaluate(const ComplexVector<Real> &values) const
  {
    std::complex<Real> s(static_cast<Real>(constant_.to_long_double()));
    for (Eigen::Index p = 0; p < linear_.size(); ++p)
      if (!linear_[p].is_zero()) s += static_cast<Real>(linear_[p].to_long_double()) * values[p];
    return s;
  }

  std::string str(const std::vector<std::string> &names) const;

  friend bool operator==(const AffineForm &a, const AffineForm &b);
  /// Total order used to key maps: linear part, then constant.
  friend bool operator<(const AffineForm &a, const AffineForm &b);

private:
  RationalVector linear_;
  Rational constant_;
};

/// Polynomial in the parameters with exact rational coefficients.
class ParamPoly
{
public:
  using Terms = std::map<ExponentVector, Rational, GradedLexLess>;

  ParamPoly() = default;
  explicit ParamPoly(int parameters, Rational constant = Rational(0));
  static ParamPoly from_affine(const AffineForm &a);
  /// Rising factorial (a)_count = a (a+1) ... (a+count-1).
  static ParamPoly pochhammer(const AffineForm &a, int count);

  int parameters() const { return parameters_; }
  const Terms &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;

  ParamPoly &operator+=(const ParamPoly &o);
  ParamPoly &operator-=(const ParamPoly &o);
  ParamPoly &operator*=(const ParamPoly &o);
  ParamPoly &operator*=(const Rational &s);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly &b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly &b) { return a -= b; }
  friend ParamPoly operator*(ParamPoly a, const ParamPoly &b) { return a *= b; }
  friend ParamPoly operator*(const Rational &s, ParamPoly a) { return a *= s; }
  ParamPoly operator-() const { return Rational(-1) * *this; }

  template <typename Real>
  std::complex<Real> evaluate(const ComplexVector<Real> &values) const
  {
    std::complex<Real> sum(0);
    for (const auto &[e, c] : terms_) {
      std::complex<Real> m(static_cast<Real>(c.to_long_double()));
      for (Eigen::Index p = 0; p < e.size(); ++p)
        for (int k = 0; k < e[p]; ++k) m *= values[p];
      sum += m;
    }
    return sum;
  }

  std::string str(const std::vector<std::string> &names) const;

  friend bool operator==(const ParamPoly &, const ParamPoly &) = default;

private:
  void add_term(const ExponentVector &e, const Rational &c);

  int parameters_ = 0;
  Terms terms_;
};

} // namespace hypint
