#include "hypint/exponent_lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hypint {

namespace {

using Int = std::int64_t;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

Int checked(__int128 v)
{
  constexpr __int128 lim = std::numeric_limits<Int>::max();
  if (v > lim || v < -lim) throw std::overflow_error("integer overflow in lattice elimination");
  return static_cast<Int>(v);
}

Int mul_add(Int a, Int x, Int b, Int y)
{
  return checked(static_cast<__int128>(a) * x + static_cast<__int128>(b) * y);
}

Int squared_norm(const Eigen::Matrix<Int, Eigen::Dynamic, 1> &v)
{
  __int128 s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += static_cast<__int128>(v[i]) * v[i];
  return checked(s);
}

Int dot(const Eigen::Matrix<Int, Eigen::Dynamic, 1> &a, const Eigen::Matrix<Int, Eigen::Dynamic, 1> &b)
{
  __int128 s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
  return checked(s);
}

Int round_div(Int num, Int den)
{
  // nearest integer to num/den, den > 0
  const long double q = static_cast<long double>(num) / static_cast<long double>(den);
  return static_cast<Int>(std::llround(q));
}

} // namespace

ExponentVector exponent(std::initializer_list<int> entries)
{
  ExponentVector w(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (int e : entries) w[i++] = e;
  return w;
}

bool lex_less(const ExponentVector &a, const ExponentVector &b)
{
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

bool GradedLexLess::operator()(const ExponentVector &a, const ExponentVector &b) const
{
  const int da = a.sum(), db = b.sum();
  if (da != db) return da < db;
  return lex_less(a, b);
}

std::string format_exponent(const ExponentVector &w)
{
  if (w.size() == 1) return std::to_string(w[0]);
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
  os << ')';
  return os.str();
}

ExponentSet::ExponentSet(int dimension, std::vector<ExponentVector> members)
    : dimension_(dimension), members_(std::move(members))
{
  if (dimension_ <= 0) throw std::invalid_argument("exponent set dimension must be positive");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const auto &w = members_[i];
    if (w.size() != dimension_)
      throw std::invalid_argument("exponent " + format_exponent(w) + " has length " + std::to_string(w.size()) +
                                  ", expected " + std::to_string(dimension_));
    if ((w.array() < 0).any())
      throw std::invalid_argument("negative (Laurent) exponent " + format_exponent(w) + " is not supported");
    for (std::size_t j = 0; j < i; ++j)
      if (members_[j] == w) throw std::invalid_argument("duplicate exponent " + format_exponent(w));
  }
}

ExponentSet ExponentSet::of(int dimension, std::initializer_list<std::initializer_list<int>> members)
{
  std::vector<ExponentVector> ws;
  for (const auto &m : members) ws.push_back(exponent(m));
  return ExponentSet(dimension, std::move(ws));
}

std::optional<std::size_t> ExponentSet::index_of(const ExponentVector &w) const
{
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i].size() == w.size() && members_[i] == w) return i;
  return std::nullopt;
}

Eigen::MatrixXi ExponentSet::matrix() const
{
  Eigen::MatrixXi m(dimension_, static_cast<Eigen::Index>(members_.size()));
  for (std::size_t j = 0; j < members_.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = members_[j];
  return m;
}

bool operator==(const ExponentSet &a, const ExponentSet &b)
{
  if (a.dimension_ != b.dimension_ || a.members_.size() != b.members_.size()) return false;
  for (std::size_t i = 0; i < a.members_.size(); ++i)
    if (a.members_[i] != b.members_[i]) return false;
  return true;
}

RationalMatrix to_rational(const Eigen::MatrixXi &m)
{
  RationalMatrix r(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

Rational determinant(const RationalMatrix &m)
{
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  RationalMatrix a = m;
  const Eigen::Index n = a.rows();
  Rational det(1);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) return Rational(0);
    if (p != k) {
      a.row(p).swap(a.row(k));
      det = -det;
    }
    det *= a(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const Rational f = a(i, k) / a(k, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

RationalVector solve_exact(const RationalMatrix &m, const RationalVector &rhs)
{
  const Eigen::Index n = m.rows();
  if (m.cols() != n || rhs.size() != n) throw std::invalid_argument("solve_exact: dimension mismatch");
  RationalMatrix a(n, n + 1);
  a.leftCols(n) = m;
  a.col(n) = rhs;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    while (p < n && a(p, k).is_zero()) ++p;
    if (p == n) throw std::domain_error("solve_exact: singular matrix");
    if (p != k) a.row(p).swap(a.row(k));
    const Rational pivot = a(k, k);
    for (Eigen::Index j = k; j <= n; ++j) a(k, j) /= pivot;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      const Rational f = a(i, k);
      for (Eigen::Index j = k; j <= n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return a.col(n);
}

Base::Base(ExponentSet parent, std::vector<std::size_t> indices)
    : parent_(std::move(parent)), indices_(std::move(indices))
{
  const int n = parent_.dimension();
  if (static_cast<int>(indices_.size()) != n)
    throw std::invalid_argument("a base needs exactly " + std::to_string(n) + " members");
  matrix_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    if (indices_[j] >= parent_.size()) throw std::out_of_range("base index out of range");
    for (int i = 0; i < j; ++i)
      if (indices_[i] == indices_[j]) throw std::invalid_argument("repeated base index");
    matrix_.col(j) = parent_[indices_[j]];
  }
  const RationalMatrix m = to_rational(matrix_);
  determinant_ = hypint::determinant(m);
  if (determinant_.is_zero()) throw std::invalid_argument("base vectors are linearly dependent");
  inverse_.resize(n, n);
  for (int j = 0; j < n; ++j) {
    RationalVector e = RationalVector::Constant(n, Rational(0));
    e[j] = Rational(1);
    inverse_.col(j) = solve_exact(m, e);
  }
}

bool Base::contains_index(std::size_t i) const
{
  return std::find(indices_.begin(), indices_.end(), i) != indices_.end();
}

std::vector<std::size_t> Base::complement() const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parent_.size(); ++i)
    if (!contains_index(i)) out.push_back(i);
  return out;
}

RationalVector base_coords(const Base &base, const ExponentVector &w)
{
  if (w.size() != base.parent().dimension())
    throw std::invalid_argument("base_coords: exponent " + format_exponent(w) + " has wrong dimension");
  RationalVector rw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) rw[i] = Rational(w[i]);
  return base.inverse() * rw;
}

void validate_relation(const LatticeRelation &relation, const ExponentSet &set)
{
  const auto &u = relation.coefficients;
  if (u.size() != static_cast<Eigen::Index>(set.size()))
    throw std::invalid_argument("relation length does not match the exponent set");
  if ((u.array() == 0).all()) throw std::invalid_argument("zero lattice relation");
  Eigen::Matrix<Int, Eigen::Dynamic, 1> sum = Eigen::Matrix<Int, Eigen::Dynamic, 1>::Zero(set.dimension());
  for (std::size_t i = 0; i < set.size(); ++i) sum += set[i].cast<Int>() * static_cast<Int>(u[static_cast<Eigen::Index>(i)]);
  if (!sum.isZero()) throw std::invalid_argument("relation does not annihilate the exponent matrix");
  if (relation.homogeneous && u.sum() != 0) throw std::invalid_argument("homogeneous relation with nonzero sum");
}

std::vector<LatticeRelation> kernel_basis(const ExponentSet &set, bool homogeneous)
{
  const Eigen::Index cols = static_cast<Eigen::Index>(set.size());
  if (cols == 0) throw std::invalid_argument("kernel_basis: empty exponent set");
  const Eigen::Index rows = set.dimension() + (homogeneous ? 1 : 0);

  IntMatrix a(rows, cols);
  a.topRows(set.dimension()) = set.matrix().cast<Int>();
  if (homogeneous) a.row(rows - 1).setOnes();
  IntMatrix u = IntMatrix::Identity(cols, cols);

  // Column reduction on the stacked matrix [a; u]: a * u stays equal to the
  // original matrix times the accumulated unimodular u; trailing zero
  // columns of a span the kernel. Euclid steps with the smallest pivot plus
  // size reduction of the untouched columns keep the entries small.
  auto column_axpy = [&](Eigen::Index dst, Int k, Eigen::Index src) {
    for (Eigen::Index i = 0; i < rows; ++i) a(i, dst) = mul_add(1, a(i, dst), -k, a(i, src));
    for (Eigen::Index i = 0; i < cols; ++i) u(i, dst) = mul_add(1, u(i, dst), -k, u(i, src));
  };
  auto column_swap = [&](Eigen::Index x, Eigen::Index y) {
    a.col(x).swap(a.col(y));
    u.col(x).swap(u.col(y));
  };
  auto stacked_norm = [&](Eigen::Index j) {
    __int128 s = 0;
    for (Eigen::Index i = 0; i < rows; ++i) s += static_cast<__int128>(a(i, j)) * a(i, j);
    for (Eigen::Index i = 0; i < cols; ++i) s += static_cast<__int128>(u(i, j)) * u(i, j);
    return checked(s);
  };
  auto stacked_dot = [&](Eigen::Index x, Eigen::Index y) {
    __int128 s = 0;
    for (Eigen::Index i = 0; i < rows; ++i) s += static_cast<__int128>(a(i, x)) * a(i, y);
    for (Eigen::Index i = 0; i < cols; ++i) s += static_cast<__int128>(u(i, x)) * u(i, y);
    return checked(s);
  };

  Eigen::Index pivot_col = 0;
  for (Eigen::Index r = 0; r < rows && pivot_col < cols; ++r) {
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index j = pivot_col; j < cols; ++j)
        if (a(r, j) != 0 && (best < 0 || std::abs(a(r, j)) < std::abs(a(r, best)))) best = j;
      if (best < 0) break;
      column_swap(pivot_col, best);
      bool done = true;
      for (Eigen::Index j = pivot_col + 1; j < cols; ++j) {
        if (a(r, j) == 0) continue;
        column_axpy(j, a(r, j) / a(r, pivot_col), pivot_col);
        if (a(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (a(r, pivot_col) == 0) continue;
    ++pivot_col;
    // Size-reduce the columns that are still zero in rows 0..r.
    bool changed = true;
    while (changed) {
      changed = false;
      for (Eigen::Index x = pivot_col; x < cols; ++x)
        for (Eigen::Index y = pivot_col; y < cols; ++y) {
          if (x == y) continue;
          const Int ny = stacked_norm(y);
          if (ny == 0) continue;
          const Int k = round_div(stacked_dot(x, y), ny);
          if (k == 0) continue;
          const Int before = stacked_norm(x);
          column_axpy(x, k, y);
          if (stacked_norm(x) < before)
            changed = true;
          else
            column_axpy(x, -k, y);
        }
    }
  }

  using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
  std::vector<IntVector> basis;
  for (Eigen::Index j = pivot_col; j < cols; ++j) basis.push_back(u.col(j));

  // Pairwise size reduction keeps entries small; each replacement strictly
  // lowers a squared norm, so the loop terminates.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (i == j) continue;
        const Int nj = squared_norm(basis[j]);
        const Int k = round_div(dot(basis[i], basis[j]), nj);
        if (k == 0) continue;
        IntVector cand = basis[i] - k * basis[j];
        if (squared_norm(cand) < squared_norm(basis[i])) {
          basis[i] = std::move(cand);
          changed = true;
        }
      }
  }

  std::vector<LatticeRelation> out;
  for (auto &v : basis) {
    Eigen::Index lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    if (lead < v.size() && v[lead] < 0) v = -v;
    LatticeRelation rel;
    rel.coefficients = v.unaryExpr([](Int e) { return static_cast<int>(checked(e)); });
    rel.homogeneous = homogeneous;
    out.push_back(std::move(rel));
  }
  std::sort(out.begin(), out.end(), [](const LatticeRelation &l, const LatticeRelation &r) {
    const int nl = l.coefficients.cwiseAbs().sum(), nr = r.coefficients.cwiseAbs().sum();
    if (nl != nr) return nl < nr;
    return std::lexicographical_compare(r.coefficients.data(), r.coefficients.data() + r.coefficients.size(),
                                        l.coefficients.data(), l.coefficients.data() + l.coefficients.size());
  });
  return out;
}

ExponentSet cayley_set(std::span<const ExponentSet> blocks)
{
  if (blocks.empty()) throw std::invalid_argument("cayley_set needs at least one block");
  const int n = blocks.front().dimension();
  const int k = static_cast<int>(blocks.size());
  std::vector<ExponentVector> members;
  for (int i = 0; i < k; ++i) {
    if (blocks[i].dimension() != n) throw std::invalid_argument("cayley_set: blocks of different dimension");
    for (const auto &w : blocks[i].members()) {
      ExponentVector lifted = ExponentVector::Zero(n + k);
      lifted.head(n) = w;
      lifted[n + i] = 1;
      members.push_back(std::move(lifted));
    }
  }
  return ExponentSet(n + k, std::move(members));
}

std::vector<Base> enumerate_bases(const ExponentSet &set)
{
  const std::size_t n = static_cast<std::size_t>(set.dimension());
  std::vector<Base> out;
  if (set.size() < n) return out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    Eigen::MatrixXi m(n, n);
    for (std::size_t j = 0; j < n; ++j) m.col(static_cast<Eigen::Index>(j)) = set[idx[j]];
    if (!determinant(to_rational(m)).is_zero()) out.emplace_back(set, idx);
    // next n-combination in lexicographic order
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == set.size() - n + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

} // namespace hypint
