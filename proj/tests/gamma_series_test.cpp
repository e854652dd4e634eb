#include "hypint/gamma.hpp"
#include "hypint/gamma_series.hpp"
#include "hypint/quadrature.hpp"
#include "hypint/verification.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypint;

namespace {

CoeffSpacePtr quadratic() { return CoeffSpace::single(ExponentSet::of(1, {{1}, {2}})); }

Eigen::VectorXcd vec(std::initializer_list<Complex> xs)
{
  Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

ProductContour half_line()
{
  ProductContour c;
  c.chains = {{ContourLeg::ray(0.0, 0.0)}};
  return c;
}

} // namespace

TEST_SUITE("series")
{
  TEST_CASE("multi-indices are graded")
  {
    const auto ms = multi_indices(2, 3);
    CHECK(ms.size() == 10);
    CHECK(ms.front().isZero());
    for (std::size_t i = 1; i < ms.size(); ++i) CHECK(ms[i - 1].sum() <= ms[i].sum());
    CHECK(multi_indices(3, 0).size() == 1);
  }

  TEST_CASE("order zero has a single term")
  {
    const auto space = quadratic();
    const auto s = gg_series(SeriesLayout::gg(space, Base(space->joint(), {0})), vec({1.0}), 0);
    CHECK(s.terms().size() == 1);
  }

  TEST_CASE("quadratic set, linear base, order two")
  {
    const auto space = quadratic();
    const auto layout = SeriesLayout::gg(space, Base(space->joint(), {0}));
    const auto s = gg_series(layout, vec({1.0}), 2);
    REQUIRE(s.terms().size() == 3);
    const std::vector<std::string> names = space->parameters().names();
    // s(m) = u + 2m, weight 1/m!
    CHECK(s.terms()[0].gamma_args[0].str(names) == "u1");
    CHECK(s.terms()[1].gamma_args[0].str(names) == "u1 + 2");
    CHECK(s.terms()[2].gamma_args[0].str(names) == "u1 + 4");
    CHECK(s.terms()[2].prefactor.str(names) == "1/2");
    CHECK(s.terms()[1].base_exponents[0].str(names) == "-u1 - 2");
    const TermValue v = gg_gamma_coefficient(s.terms()[2].m, vec({1.0}), layout);
    CHECK(std::abs(v.scalar - 24.0) < 1e-12);  // Gamma(5)
  }

  TEST_CASE("pole terms are flagged")
  {
    const auto space = quadratic();
    const auto layout = SeriesLayout::gg(space, Base(space->joint(), {1}));
    const auto s = gg_series(layout, vec({0.0}), 2);
    REQUIRE(!s.terms().empty());
    CHECK(s.terms()[0].pole);
    CHECK(!s.terms()[1].pole);
    CHECK_THROWS_AS(evaluate_at_coefficients(s, vec({0.1, -1.0})), std::domain_error);
    // The reciprocal form has no poles: 1/Gamma(0) = 0.
    CHECK_NOTHROW(evaluate_at_coefficients(s, vec({0.1, -1.0}), GammaForm::Reciprocal));
  }

  TEST_CASE("convergent series matches the half-line integral")
  {
    const auto space = quadratic();
    const auto layout = SeriesLayout::gg(space, Base(space->joint(), {1}));
    for (double u : {1.0, 1.5, 2.0}) {
      const auto s = gg_series(layout, vec({u}), 18);
      const Eigen::VectorXcd c = vec({0.5, -1.0});
      const SeriesValue v = evaluate_at_coefficients(s, c);
      const auto q = gg_eval(space->joint(), c, vec({u}), half_line(), {.rel_tol = 1e-12});
      // The half-line carries the constant 1/2 of t = sqrt(tau).
      CHECK(std::abs(0.5 * v.value - q.value) < 1e-10 * std::abs(q.value));
      CHECK(v.tail < 1e-10);
    }
  }

  TEST_CASE("box and Euler operators annihilate the series below the truncation order")
  {
    const std::vector<std::pair<ExponentSet, Eigen::VectorXcd>> cases{
        {ExponentSet::of(1, {{1}, {2}}), vec({1.0})},
        {ExponentSet::of(1, {{1}, {3}}), vec({0.7})},
        {ExponentSet::of(2, {{1, 0}, {0, 1}, {1, 1}, {2, 1}}), vec({0.5, 0.7})},
    };
    for (const auto &[set, u] : cases) {
      const auto space = CoeffSpace::single(set);
      for (const Base &b : enumerate_bases(set)) {
        const auto s = gg_series(SeriesLayout::gg(space, b), u, 5);
        const SystemListing sys = gg_system(space);
        std::vector<DiffOperator> ops = sys.boxes;
        ops.insert(ops.end(), sys.euler.begin(), sys.euler.end());
        for (const auto &op : ops) {
          const GammaSeries r = apply_to_series(op, s);
          CHECK(r.exact_through() >= 5 - op.order());
          for (const auto &t : r.terms()) CHECK(t.order() > r.exact_through());
        }
      }
    }
  }

  TEST_CASE("Cayley series is annihilated by the Euler y operator")
  {
    const auto space = CoeffSpace::cayley({ExponentSet::of(1, {{0}, {1}, {2}})});
    for (const Base &b : enumerate_bases(space->joint())) {
      const auto s = gg_series(SeriesLayout::gg(space, b), vec({0.5, -0.25}), 4);
      const SystemListing sys = cayley_system(space);
      for (const auto &op : sys.all()) {
        const GammaSeries r = apply_to_series(op, s);
        for (const auto &t : r.terms()) CHECK(t.order() > r.exact_through());
      }
    }
  }

  TEST_CASE("standard expansion of the shifted Gaussian")
  {
    const auto set = ExponentSet::of(1, {{1}, {2}});
    const Polynomial center(1, {{exponent({2}), Complex(-1)}});
    // Moments of e^{-t^2} on the real line.
    auto moment = [&](const Eigen::VectorXi &m) -> Complex {
      const int k = m[0] + 2 * m[1];
      return k % 2 ? Complex(0) : gamma(Complex(0.5 * (k + 1)));
    };
    const GammaSeries s = standard_expansion(center, set, moment, 20);
    for (double a : {0.0, 0.3, 0.6}) {
      const SeriesValue v = evaluate_at_coefficients(s, vec({a, -1.0}));
      const double exact = std::sqrt(M_PI) * std::exp(a * a / 4);
      CHECK(std::abs(v.value - exact) < 1e-8 * exact);
    }
    CHECK(evaluate_at_coefficients(s, vec({0.0, -1.0})).value == Complex(std::sqrt(M_PI)));
  }

  TEST_CASE("series against quadrature with one fitted constant")
  {
    const auto space = quadratic();
    const auto layout = SeriesLayout::gg(space, Base(space->joint(), {0}));
    const auto s = gg_series(layout, vec({1.0}), 12);
    auto oracle = [&](const Eigen::VectorXcd &c) {
      return gg_eval(space->joint(), c, vec({1.0}), half_line(), {.rel_tol = 1e-13}).value;
    };
    std::vector<Eigen::VectorXcd> points;
    for (double c2 : {-0.002, -0.004, -0.006, -0.008}) points.push_back(vec({-1.0, c2}));
    const SeriesComparison cmp = series_vs_oracle(s, oracle, points);
    CHECK(std::abs(cmp.kappa - 1.0) < 1e-6);
    CHECK(cmp.deviations.size() == 3);
    CHECK(cmp.max_deviation < 1e-6);
    CHECK(cmp.kappa_spread < 1e-6);
  }
}
