#include "hypint/parameters.hpp"

#include <sstream>
#include <stdexcept>

namespace hypint {

ParameterSpace::ParameterSpace(int n_u, int n_v) : n_u_(n_u), n_v_(n_v)
{
  if (n_u < 0 || n_v < 0) throw std::invalid_argument("negative parameter count");
  for (int j = 0; j < n_u; ++j) names_.push_back("u" + std::to_string(j + 1));
  for (int i = 0; i < n_v; ++i) names_.push_back("v" + std::to_string(i + 1));
}

int ParameterSpace::u(int j) const
{
  if (j < 0 || j >= n_u_) throw std::out_of_range("u parameter index out of range");
  return j;
}

int ParameterSpace::v(int i) const
{
  if (i < 0 || i >= n_v_) throw std::out_of_range("v parameter index out of range");
  return n_u_ + i;
}

AffineForm::AffineForm(int parameters, Rational constant)
    : linear_(RationalVector::Constant(parameters, Rational(0))), constant_(constant)
{
}

AffineForm AffineForm::parameter(int parameters, int index, Rational scale)
{
  AffineForm a(parameters);
  if (index < 0 || index >= parameters) throw std::out_of_range("parameter index out of range");
  a.linear_[index] = scale;
  return a;
}

bool AffineForm::is_constant() const
{
  for (Eigen::Index p = 0; p < linear_.size(); ++p)
    if (!linear_[p].is_zero()) return false;
  return true;
}

AffineForm &AffineForm::operator+=(const AffineForm &o)
{
  if (o.parameters() != parameters()) throw std::invalid_argument("affine form parameter count mismatch");
  for (Eigen::Index p = 0; p < linear_.size(); ++p) linear_[p] += o.linear_[p];
  constant_ += o.constant_;
  return *this;
}

AffineForm &AffineForm::operator-=(const AffineForm &o) { return *this += -o; }

AffineForm operator*(const Rational &s, const AffineForm &a)
{
  AffineForm out = a;
  for (Eigen::Index p = 0; p < out.linear_.size(); ++p) out.linear_[p] *= s;
  out.constant_ *= s;
  return out;
}

bool AffineForm::same_linear_part(const AffineForm &o) const
{
  if (o.parameters() != parameters()) return false;
  for (Eigen::Index p = 0; p < linear_.size(); ++p)
    if (linear_[p] != o.linear_[p]) return false;
  return true;
}

bool operator==(const AffineForm &a, const AffineForm &b)
{
  return a.same_linear_part(b) && a.constant_ == b.constant_;
}

bool operator<(const AffineForm &a, const AffineForm &b)
{
  if (a.parameters() != b.parameters()) return a.parameters() < b.parameters();
  for (Eigen::Index p = 0; p < a.linear_.size(); ++p)
    if (a.linear_[p] != b.linear_[p]) return a.linear_[p] < b.linear_[p];
  return a.constant_ < b.constant_;
}

namespace {

// Appends "coef*name" style terms with sign handling; first term has no leading " + ".
void append_term(std::ostringstream &os, bool &first, const Rational &c, const std::string &body)
{
  const bool negative = c < Rational(0);
  const Rational mag = abs(c);
  if (first)
    os << (negative ? "-" : "");
  else
    os << (negative ? " - " : " + ");
  first = false;
  if (body.empty())
    os << mag.str();
  else if (mag == Rational(1))
    os << body;
  else
    os << mag.str() << "*" << body;
}

} // namespace

std::string AffineForm::str(const std::vector<std::string> &names) const
{
  std::ostringstream os;
  bool first = true;
  for (Eigen::Index p = 0; p < linear_.size(); ++p)
    if (!linear_[p].is_zero()) append_term(os, first, linear_[p], names.at(static_cast<std::size_t>(p)));
  if (!constant_.is_zero() || first) append_term(os, first, constant_, "");
  return os.str();
}

ParamPoly::ParamPoly(int parameters, Rational constant) : parameters_(parameters)
{
  if (!constant.is_zero()) terms_.emplace(ExponentVector::Zero(parameters), constant);
}

ParamPoly ParamPoly::from_affine(const AffineForm &a)
{
  ParamPoly out(a.parameters(), a.constant());
  for (Eigen::Index p = 0; p < a.linear().size(); ++p) {
    if (a.linear()[p].is_zero()) continue;
    ExponentVector e = ExponentVector::Zero(a.parameters());
    e[p] = 1;
    out.add_term(e, a.linear()[p]);
  }
  return out;
}

ParamPoly ParamPoly::pochhammer(const AffineForm &a, int count)
{
  if (count < 0) throw std::invalid_argument("negative pochhammer length");
  ParamPoly out(a.parameters(), Rational(1));
  for (int i = 0; i < count; ++i) out *= from_affine(a + Rational(i));
  return out;
}

bool ParamPoly::is_constant() const
{
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.sum() == 0);
}

Rational ParamPoly::constant_term() const
{
  const auto it = terms_.find(ExponentVector::Zero(parameters_));
  return it == terms_.end() ? Rational(0) : it->second;
}

void ParamPoly::add_term(const ExponentVector &e, const Rational &c)
{
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, Rational(0));
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

ParamPoly &ParamPoly::operator+=(const ParamPoly &o)
{
  if (o.parameters_ != parameters_) throw std::invalid_argument("parameter polynomial size mismatch");
  for (const auto &[e, c] : o.terms_) add_term(e, c);
  return *this;
}

ParamPoly &ParamPoly::operator-=(const ParamPoly &o)
{
  if (o.parameters_ != parameters_) throw std::invalid_argument("parameter polynomial size mismatch");
  for (const auto &[e, c] : o.terms_) add_term(e, -c);
  return *this;
}

ParamPoly &ParamPoly::operator*=(const ParamPoly &o)
{
  if (o.parameters_ != parameters_) throw std::invalid_argument("parameter polynomial size mismatch");
  ParamPoly out(parameters_);
  for (const auto &[e1, c1] : terms_)
    for (const auto &[e2, c2] : o.terms_) out.add_term(e1 + e2, c1 * c2);
  terms_ = std::move(out.terms_);
  return *this;
}

ParamPoly &ParamPoly::operator*=(const Rational &s)
{
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto &[e, c] : terms_) c *= s;
  return *this;
}

std::string ParamPoly::str(const std::vector<std::string> &names) const
{
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest degree first reads more naturally
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto &[e, c] = *it;
    std::string body;
    for (Eigen::Index p = 0; p < e.size(); ++p) {
      if (e[p] == 0) continue;
      if (!body.empty()) body += "*";
      body += names.at(static_cast<std::size_t>(p));
      if (e[p] > 1) body += "^" + std::to_string(e[p]);
    }
    append_term(os, first, c, body);
  }
  return os.str();
}

} // namespace hypint
