#include "hypint/diff_operator.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace hypint {

std::shared_ptr<const CoeffSpace> CoeffSpace::single(ExponentSet set)
{
  auto space = std::shared_ptr<CoeffSpace>(new CoeffSpace());
  space->dimension_ = set.dimension();
  for (const auto &w : set.members()) space->vars_.push_back({0, w});
  space->joint_ = set;
  space->block_sets_.push_back(std::move(set));
  return space;
}

std::shared_ptr<const CoeffSpace> CoeffSpace::cayley(std::vector<ExponentSet> blocks)
{
  auto space = std::shared_ptr<CoeffSpace>(new CoeffSpace());
  space->is_cayley_ = true;
  space->joint_ = cayley_set(blocks);
  space->dimension_ = blocks.front().dimension();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (const auto &w : blocks[i].members()) space->vars_.push_back({static_cast<int>(i) + 1, w});
  space->block_sets_ = std::move(blocks);
  return space;
}

const ExponentSet &CoeffSpace::block_set(int block) const
{
  const int pos = is_cayley_ ? block - 1 : block;
  if (pos < 0 || pos >= static_cast<int>(block_sets_.size())) throw std::out_of_range("block index out of range");
  return block_sets_[static_cast<std::size_t>(pos)];
}

std::optional<int> CoeffSpace::index_of(int block, const ExponentVector &w) const
{
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].block == block && vars_[i].exponent.size() == w.size() && vars_[i].exponent == w)
      return static_cast<int>(i);
  return std::nullopt;
}

std::vector<int> CoeffSpace::block_indices(int block) const
{
  std::vector<int> out;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].block == block) out.push_back(static_cast<int>(i));
  return out;
}

std::string CoeffSpace::name(int var) const
{
  const auto &v = vars_.at(static_cast<std::size_t>(var));
  if (block_sets_.size() > 1) return "c" + std::to_string(v.block) + "_" + format_exponent(v.exponent);
  return "c" + format_exponent(v.exponent);
}

bool operator==(const CoeffSpace &a, const CoeffSpace &b)
{
  return a.is_cayley_ == b.is_cayley_ && a.joint_ == b.joint_ && a.block_sets_.size() == b.block_sets_.size();
}

Eigen::VectorXi unit_multi_index(int size, int var, int power)
{
  Eigen::VectorXi e = Eigen::VectorXi::Zero(size);
  e[var] = power;
  return e;
}

DiffOperator::DiffOperator(CoeffSpacePtr space) : space_(std::move(space))
{
  if (!space_) throw std::invalid_argument("operator without a coefficient space");
}

void DiffOperator::add_term(const ParamPoly &scalar, const Eigen::VectorXi &monomial, const Eigen::VectorXi &derivative)
{
  if (monomial.size() != space_->size() || derivative.size() != space_->size())
    throw std::invalid_argument("operator term does not match the coefficient space");
  if ((monomial.array() < 0).any() || (derivative.array() < 0).any())
    throw std::invalid_argument("negative power in operator term");
  if (scalar.parameters() != parameters()) throw std::invalid_argument("operator scalar has wrong parameter count");
  if (scalar.is_zero()) return;
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->monomial == monomial && it->derivative == derivative) {
      it->scalar += scalar;
      if (it->scalar.is_zero()) terms_.erase(it);
      return;
    }
  }
  terms_.push_back({scalar, monomial, derivative});
}

void DiffOperator::add_term(const Rational &scalar, const Eigen::VectorXi &monomial, const Eigen::VectorXi &derivative)
{
  add_term(ParamPoly(parameters(), scalar), monomial, derivative);
}

int DiffOperator::order() const
{
  int m = 0;
  for (const auto &t : terms_) m = std::max(m, t.derivative.sum());
  return m;
}

void DiffOperator::check_space(const DiffOperator &o) const
{
  if (space_ != o.space_ && !(*space_ == *o.space_)) throw std::invalid_argument("operators on different coefficient spaces");
}

DiffOperator &DiffOperator::operator+=(const DiffOperator &o)
{
  check_space(o);
  for (const auto &t : o.terms_) add_term(t.scalar, t.monomial, t.derivative);
  return *this;
}

DiffOperator &DiffOperator::operator-=(const DiffOperator &o)
{
  check_space(o);
  for (const auto &t : o.terms_) add_term(-t.scalar, t.monomial, t.derivative);
  return *this;
}

DiffOperator operator*(const ParamPoly &s, const DiffOperator &op)
{
  DiffOperator out(op.space_);
  for (const auto &t : op.terms_) out.add_term(s * t.scalar, t.monomial, t.derivative);
  return out;
}

DiffOperator DiffOperator::operator-() const { return ParamPoly(parameters(), Rational(-1)) * *this; }

DiffOperator operator*(const DiffOperator &a, const DiffOperator &b)
{
  a.check_space(b);
  const int nv = a.space_->size();
  DiffOperator out(a.space_);
  // (c^p D^q)(c^r D^s) = sum_k prod_v C(q_v,k_v) r_v!/(r_v-k_v)! c^{p+r-k} D^{q-k+s}
  for (const auto &ta : a.terms_)
    for (const auto &tb : b.terms_) {
      Eigen::VectorXi k = Eigen::VectorXi::Zero(nv);
      std::function<void(int)> rec = [&](int v) {
        if (v == nv) {
          Rational w(1);
          for (int i = 0; i < nv; ++i) {
            for (int j = 0; j < k[i]; ++j) {
              w *= Rational(ta.derivative[i] - j, j + 1);  // binomial
              w *= Rational(tb.monomial[i] - j);           // falling factorial
            }
          }
          out.add_term(w * (ta.scalar * tb.scalar), ta.monomial + tb.monomial - k, ta.derivative - k + tb.derivative);
          return;
        }
        const int top = std::min(ta.derivative[v], tb.monomial[v]);
        for (int kv = 0; kv <= top; ++kv) {
          k[v] = kv;
          rec(v + 1);
        }
        k[v] = 0;
      };
      rec(0);
    }
  return out;
}

namespace {

bool same_terms(const std::vector<OperatorTerm> &x, const std::vector<OperatorTerm> &y)
{
  if (x.size() != y.size()) return false;
  for (const auto &t : x) {
    const auto it = std::find_if(y.begin(), y.end(), [&](const OperatorTerm &u) {
      return u.monomial == t.monomial && u.derivative == t.derivative;
    });
    if (it == y.end() || !(it->scalar == t.scalar)) return false;
  }
  return true;
}

} // namespace

bool operator==(const DiffOperator &a, const DiffOperator &b)
{
  if (a.space_ != b.space_ && !(*a.space_ == *b.space_)) return false;
  return same_terms(a.terms_, b.terms_);
}

std::string DiffOperator::str() const
{
  if (terms_.empty()) return "0";
  const auto names = space_->parameters().names();
  std::ostringstream os;
  bool first = true;
  for (const auto &t : terms_) {
    std::string body;
    auto append = [&body](const std::string &f) {
      if (!body.empty()) body += "*";
      body += f;
    };
    for (int v = 0; v < space_->size(); ++v)
      if (t.monomial[v] > 0) append(space_->name(v) + (t.monomial[v] > 1 ? "^" + std::to_string(t.monomial[v]) : ""));
    for (int v = 0; v < space_->size(); ++v)
      if (t.derivative[v] > 0)
        append("D[" + space_->name(v) + "]" + (t.derivative[v] > 1 ? "^" + std::to_string(t.derivative[v]) : ""));

    // single-monomial scalars are written with their sign pulled out
    if (t.scalar.terms().size() == 1) {
      const auto &[e, c] = *t.scalar.terms().begin();
      const bool negative = c < Rational(0);
      const std::string factor = (negative ? -t.scalar : t.scalar).str(names);
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      if (body.empty())
        os << factor;
      else if (factor == "1")
        os << body;
      else
        os << factor << "*" << body;
    } else {
      os << (first ? "" : " + ") << "(" << t.scalar.str(names) << ")";
      if (!body.empty()) os << "*" << body;
    }
    first = false;
  }
  return os.str();
}

DiffOperator box_operator(const LatticeRelation &relation, const CoeffSpacePtr &space)
{
  validate_relation(relation, space->joint());
  const Eigen::VectorXi plus = relation.coefficients.cwiseMax(0);
  const Eigen::VectorXi minus = (-relation.coefficients).cwiseMax(0);
  const Eigen::VectorXi none = Eigen::VectorXi::Zero(space->size());
  DiffOperator op(space);
  op.add_term(Rational(1), none, plus);
  op.add_term(Rational(-1), none, minus);
  return op;
}

DiffOperator euler_t_operator(const CoeffSpacePtr &space, int axis)
{
  const ParameterSpace ps = space->parameters();
  return euler_t_operator(space, axis, ParamPoly::from_affine(AffineForm::parameter(ps.size(), ps.u(axis))));
}

DiffOperator euler_t_operator(const CoeffSpacePtr &space, int axis, const ParamPoly &shift)
{
  if (axis < 0 || axis >= space->dimension()) throw std::out_of_range("euler_t_operator: axis out of range");
  DiffOperator op(space);
  for (int v = 0; v < space->size(); ++v) {
    const int w = (*space)[v].exponent[axis];
    if (w == 0) continue;
    const Eigen::VectorXi e = unit_multi_index(space->size(), v);
    op.add_term(Rational(w), e, e);
  }
  op.add_term(shift, Eigen::VectorXi::Zero(space->size()), Eigen::VectorXi::Zero(space->size()));
  return op;
}

DiffOperator euler_y_operator(const CoeffSpacePtr &space, int block)
{
  const ParameterSpace ps = space->parameters();
  return euler_y_operator(space, block, ParamPoly::from_affine(AffineForm::parameter(ps.size(), ps.v(block - 1))));
}

DiffOperator euler_y_operator(const CoeffSpacePtr &space, int block, const ParamPoly &shift)
{
  if (!space->is_cayley() || block < 1 || block > space->blocks())
    throw std::out_of_range("euler_y_operator: block out of range");
  DiffOperator op(space);
  for (int v : space->block_indices(block)) {
    const Eigen::VectorXi e = unit_multi_index(space->size(), v);
    op.add_term(Rational(1), e, e);
  }
  op.add_term(-shift, Eigen::VectorXi::Zero(space->size()), Eigen::VectorXi::Zero(space->size()));
  return op;
}

DiffOperator gg_relation_operator(const CoeffSpacePtr &space, const ExponentVector &w, int block)
{
  const int n = space->dimension();
  const int size = space->size();
  if (w.size() != n) throw std::invalid_argument("gg_relation_operator: exponent has wrong dimension");
  if (space->is_cayley() && block < 1) throw std::invalid_argument("gg_relation_operator: Cayley space needs a block");
  const auto target = space->index_of(block, w);
  if (!target) throw std::invalid_argument("exponent " + format_exponent(w) + " is not in the exponent set");

  Eigen::VectorXi rhs = Eigen::VectorXi::Zero(size);
  for (int j = 0; j < n; ++j) {
    const auto lin = space->index_of(block, unit_multi_index(n, j));
    if (!lin)
      throw std::invalid_argument("linear exponent " + format_exponent(unit_multi_index(n, j)) + " missing from the exponent set");
    rhs[*lin] += w[j];
  }
  Eigen::VectorXi lhs = unit_multi_index(size, *target);
  if (space->is_cayley()) {
    const int degree = w.sum();
    if (degree < 1) throw std::invalid_argument("constant-term relation is undefined in the Cayley form");
    const auto constant = space->index_of(block, Eigen::VectorXi::Zero(n));
    if (!constant) throw std::invalid_argument("constant exponent missing from block " + std::to_string(block));
    lhs[*constant] += degree - 1;
  }
  DiffOperator op(space);
  op.add_term(Rational(1), Eigen::VectorXi::Zero(size), lhs);
  op.add_term(Rational(-1), Eigen::VectorXi::Zero(size), rhs);
  return op;
}

} // namespace hypint
