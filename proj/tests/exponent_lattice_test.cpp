#include "hypint/exponent_lattice.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace hypint;

namespace {

bool exact_zero(const RationalVector &v)
{
  return std::all_of(v.begin(), v.end(), [](const Rational &x) { return x.is_zero(); });
}

int rank_of(const ExponentSet &set)
{
  if (set.empty()) return 0;
  RationalMatrix m = to_rational(set.matrix());
  // Row echelon rank, exact.
  int rank = 0;
  const auto rows = m.rows(), cols = m.cols();
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index p = rank;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    m.row(p).swap(m.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (m(r, c).is_zero()) continue;
      const Rational f = m(r, c) / m(rank, c);
      for (Eigen::Index k = c; k < cols; ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

// True when v is an integer combination of the relations.
bool in_lattice(const std::vector<LatticeRelation> &basis, const Eigen::VectorXi &v)
{
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (n == 0) return v.isZero();
  const auto len = v.size();
  // Least-squares-free exact check: pick n independent rows of the basis matrix.
  RationalMatrix k(len, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < len; ++i) k(i, j) = Rational(basis[static_cast<std::size_t>(j)].coefficients[i]);
  RationalMatrix normal = k.transpose() * k;
  RationalVector rhs = k.transpose() * to_rational(v);
  const RationalVector x = solve_exact(normal, rhs);
  for (Eigen::Index j = 0; j < n; ++j)
    if (!x[j].is_integer()) return false;
  return exact_zero(k * x - to_rational(v));
}

ExponentSet random_set(std::mt19937 &rng, int n, int count)
{
  std::uniform_int_distribution<int> entry(0, 6);
  std::set<std::vector<int>> seen;
  std::vector<ExponentVector> members;
  while (static_cast<int>(members.size()) < count) {
    std::vector<int> e(static_cast<std::size_t>(n));
    for (auto &x : e) x = entry(rng);
    if (std::all_of(e.begin(), e.end(), [](int x) { return x == 0; })) continue;
    if (!seen.insert(e).second) continue;
    members.push_back(Eigen::Map<ExponentVector>(e.data(), n));
  }
  return ExponentSet(n, members);
}

} // namespace

TEST_SUITE("lattice")
{
  TEST_CASE("base coordinates of the quadratic set")
  {
    const auto a = ExponentSet::of(1, {{1}, {2}});
    const Base b(a, {0});
    const RationalVector l = base_coords(b, a[1]);
    CHECK(l[0] == Rational(2));
    const Base b2(a, {1});
    CHECK(base_coords(b2, a[0])[0] == Rational(1, 2));
  }

  TEST_CASE("base coordinates in two variables")
  {
    const auto a = ExponentSet::of(2, {{1, 0}, {0, 1}, {2, 3}, {1, 1}});
    const Base b(a, {2, 3});
    const RationalVector l = base_coords(b, a[0]);
    // (1,0) = l1*(2,3) + l2*(1,1): l1 = -1, l2 = 3
    CHECK(l[0] == Rational(-1));
    CHECK(l[1] == Rational(3));
    CHECK(b.determinant() == Rational(-1));
  }

  TEST_CASE("singular base is rejected")
  {
    const auto a = ExponentSet::of(2, {{1, 0}, {2, 0}, {0, 1}});
    CHECK_THROWS_AS(Base(a, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Base(a, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Base(a, {0, 7}), std::out_of_range);
  }

  TEST_CASE("kernel basis of the quadratic set")
  {
    const auto a = ExponentSet::of(1, {{1}, {2}});
    const auto k = kernel_basis(a, false);
    REQUIRE(k.size() == 1);
    CHECK(k[0].coefficients == Eigen::Vector2i(2, -1));
    CHECK(kernel_basis(a, true).empty());
  }

  TEST_CASE("kernel basis of the homogenized quadratic")
  {
    const auto a = ExponentSet::of(1, {{0}, {1}, {2}});
    const auto k = kernel_basis(a, true);
    REQUIRE(k.size() == 1);
    CHECK(k[0].coefficients == Eigen::Vector3i(1, -2, 1));
  }

  TEST_CASE("single exponent has an empty kernel")
  {
    CHECK(kernel_basis(ExponentSet::of(1, {{1}}), false).empty());
  }

  TEST_CASE("duplicate and malformed members")
  {
    CHECK_THROWS_AS(ExponentSet::of(1, {{1}, {1}}), std::invalid_argument);
    CHECK_THROWS_AS(ExponentSet::of(2, {{1}}), std::invalid_argument);
  }

  TEST_CASE("cayley set layout")
  {
    const std::vector<ExponentSet> blocks{ExponentSet::of(1, {{0}, {1}}), ExponentSet::of(1, {{0}, {2}})};
    const ExponentSet c = cayley_set(blocks);
    REQUIRE(c.size() == 4);
    CHECK(c.dimension() == 3);
    CHECK(c[0] == exponent({0, 1, 0}));
    CHECK(c[1] == exponent({1, 1, 0}));
    CHECK(c[2] == exponent({0, 0, 1}));
    CHECK(c[3] == exponent({2, 0, 1}));
  }

  TEST_CASE("enumerated bases are exactly the independent subsets")
  {
    const auto a = ExponentSet::of(2, {{1, 0}, {2, 0}, {0, 1}, {1, 1}});
    const auto bases = enumerate_bases(a);
    // All pairs except {(1,0),(2,0)}.
    CHECK(bases.size() == 5);
    for (const auto &b : bases) CHECK(!b.determinant().is_zero());
    CHECK(bases.front().indices() == std::vector<std::size_t>{0, 2});
  }

  TEST_CASE("exact determinant and solve")
  {
    RationalMatrix m(2, 2);
    m << Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 5);
    CHECK(determinant(m) == Rational(1, 10) - Rational(1, 12));
    RationalVector rhs(2);
    rhs << Rational(1), Rational(0);
    const RationalVector x = solve_exact(m, rhs);
    CHECK(exact_zero(m * x - rhs));
    RationalMatrix s(2, 2);
    s << Rational(1), Rational(2), Rational(2), Rational(4);
    CHECK_THROWS_AS(solve_exact(s, rhs), std::domain_error);
  }

  TEST_CASE("kernel basis agrees with brute-force enumeration")
  {
    const std::vector<ExponentSet> sets{
        ExponentSet::of(1, {{1}, {2}, {3}}),
        ExponentSet::of(1, {{2}, {3}}),
        ExponentSet::of(2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}}),
        ExponentSet::of(2, {{2, 0}, {0, 2}, {1, 1}, {3, 1}}),
    };
    for (const auto &set : sets)
      for (bool homogeneous : {false, true}) {
        const auto basis = kernel_basis(set, homogeneous);
        const int len = static_cast<int>(set.size());
        Eigen::MatrixXi a = set.matrix();
        if (homogeneous) {
          a.conservativeResize(a.rows() + 1, Eigen::NoChange);
          a.row(a.rows() - 1).setOnes();
        }
        // Every small integer kernel vector lies in the lattice spanned by the basis.
        Eigen::VectorXi v = Eigen::VectorXi::Constant(len, -3);
        int found = 0;
        for (;;) {
          if (!v.isZero() && (a * v).isZero()) {
            ++found;
            CHECK(in_lattice(basis, v));
          }
          int i = 0;
          while (i < len && v[i] == 3) v[i++] = -3;
          if (i == len) break;
          ++v[i];
        }
        if (!basis.empty()) CHECK(found > 0);
      }
  }

  TEST_CASE("randomized lattice exactness")
  {
    std::mt19937 rng(20261016);
    int done = 0;
    while (done < 1000) {
      const int n = std::uniform_int_distribution<int>(1, 4)(rng);
      const int count = std::uniform_int_distribution<int>(n, n + 3)(rng);
      const ExponentSet a = random_set(rng, n, count);
      const auto bases = enumerate_bases(a);
      if (bases.empty()) continue;
      const Base &b = bases[std::uniform_int_distribution<std::size_t>(0, bases.size() - 1)(rng)];
      const RationalMatrix bm = to_rational(b.matrix());
      for (std::size_t w = 0; w < a.size(); ++w) {
        const RationalVector l = base_coords(b, a[w]);
        REQUIRE(exact_zero(bm * l - to_rational(a[w])));
        if (b.contains_index(w)) {
          // Coordinates of a base member are a unit vector.
          CHECK(std::count_if(l.begin(), l.end(), [](const Rational &x) { return !x.is_zero(); }) == 1);
        }
      }
      for (bool homogeneous : {false, true}) {
        const auto basis = kernel_basis(a, homogeneous);
        const int expected = static_cast<int>(a.size()) - rank_of(homogeneous ? ExponentSet(n + 1, [&] {
          std::vector<ExponentVector> ms;
          for (std::size_t i = 0; i < a.size(); ++i) {
            ExponentVector e(n + 1);
            e << a[i], 1;
            ms.push_back(e);
          }
          return ms;
        }()) : a);
        REQUIRE(static_cast<int>(basis.size()) == expected);
        for (const auto &r : basis) REQUIRE_NOTHROW(validate_relation(r, a));
      }
      ++done;
    }
    CHECK(done == 1000);
  }
}
