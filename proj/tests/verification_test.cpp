#include "hypint/verification.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypint;

namespace {

Eigen::VectorXcd vec(std::initializer_list<Complex> xs)
{
  Eigen::VectorXcd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

VectorXcl vecl(std::initializer_list<ComplexL> xs)
{
  VectorXcl v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v[i++] = x;
  return v;
}

// int_R e^{c1 t + c2 t^2} dt in closed form.
CoeffFunction gaussian_closed_form()
{
  return {[](const VectorXcl &c) {
            const ComplexL pi(3.14159265358979323846264338327950288L);
            return std::sqrt(pi / -c[1]) * std::exp(-c[0] * c[0] / (4.0L * c[1]));
          },
          "closed-form Gaussian"};
}

ProductContour real_line()
{
  ProductContour c;
  c.chains = {{ContourLeg::line(0.0)}};
  return c;
}

ComplexL quadratic_root(const VectorXcl &c)
{
  // Root of c0 + c1 x + c2 x^2 that tends to -c0/c1 as c2 -> 0.
  return (-c[1] + std::sqrt(c[1] * c[1] - 4.0L * c[0] * c[2])) / (2.0L * c[2]);
}

} // namespace

TEST_SUITE("verification")
{
  TEST_CASE("GG-system on the closed-form Gaussian")
  {
    const auto space = CoeffSpace::single(ExponentSet::of(1, {{1}, {2}}));
    FdOptions fd;
    fd.tolerance = 1e-6;
    const auto reports = check_gg_system(space, vec({1.0}), gaussian_closed_form(), vecl({0.3L, -1.0L}), fd);
    REQUIRE(reports.size() == 3);
    for (const auto &r : reports) CHECK_MESSAGE(r.pass, r.op << " relative " << r.relative);
  }

  TEST_CASE("finite-difference residuals are second order in h")
  {
    const auto space = CoeffSpace::single(ExponentSet::of(1, {{1}, {2}}));
    const DiffOperator heat = gg_relation_operator(space, exponent({2}));
    for (double h : {1e-2, 4e-3}) {
      FdOptions a{h, false, 1.0}, b{h / 2, false, 1.0};
      const auto ra = residual_report(heat, gaussian_closed_form(), vecl({0.3L, -1.0L}), vec({1.0}), a);
      const auto rb = residual_report(heat, gaussian_closed_form(), vecl({0.3L, -1.0L}), vec({1.0}), b);
      const double ratio = ra.magnitude / rb.magnitude;
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
  }

  TEST_CASE("GG-system by quadrature, and a wrong parameter fails")
  {
    const auto set = ExponentSet::of(1, {{1}, {2}});
    QuadratureOptions q;
    q.rel_tol = 1e-12;
    const auto good = check_gg_system(set, vec({1.0}), real_line(), vec({0.3, -1.0}), {}, q);
    for (const auto &r : good) CHECK_MESSAGE(r.pass, r.op << " relative " << r.relative);

    const auto space = CoeffSpace::single(set);
    const CoeffFunction f = gg_function(space, vec({1.0}), real_line(), q);
    const auto bad = residual_report(euler_t_operator(space, 0), f, vecl({0.3L, -1.0L}), vec({1.5}));
    CHECK(!bad.pass);
    CHECK(bad.relative > 1e-2);
  }

  TEST_CASE("system listings")
  {
    const auto linear = CoeffSpace::single(ExponentSet::of(1, {{1}}));
    const SystemListing s = gg_system(linear);
    CHECK(s.boxes.empty());
    CHECK(s.euler.size() == 1);

    const auto gapped = CoeffSpace::single(ExponentSet::of(1, {{2}, {3}}));
    const SystemListing g = gg_system(gapped);
    CHECK(g.relations.empty());
    CHECK(!g.notes.empty());

    const auto cayley = CoeffSpace::cayley({ExponentSet::of(1, {{0}, {1}, {2}})});
    const SystemListing c = cayley_system(cayley);
    bool found = false;
    for (const auto &op : c.all()) found = found || op.str() == "D[c0]*D[c2] - D[c1]^2";
    CHECK(found);
  }

  TEST_CASE("Euler integral: Euler y operator on the unit segment")
  {
    const std::vector<ExponentSet> blocks{ExponentSet::of(1, {{0}, {1}})};
    ProductContour seg;
    seg.chains = {{ContourLeg::segment(0.0, 1.0)}};
    QuadratureOptions q;
    q.rel_tol = 1e-13;
    FdOptions fd;
    fd.tolerance = 1e-5;
    const auto reports = check_cayley_consistency(blocks, vec({-1.0}), vec({1.0}), seg, vec({1.0, -0.5}), fd, q);
    bool euler_y = false;
    for (const auto &r : reports)
      if (r.op == "c0*D[c0] + c1*D[c1] - v1") {
        euler_y = true;
        CHECK(r.pass);
      }
    CHECK(euler_y);
  }

  TEST_CASE("root continuation matches the quadratic formula")
  {
    const std::vector<int> exps{0, 1, 2};
    const VectorXcl from = vecl({-1.0L, 1.0L, 0.0L});
    const VectorXcl to = vecl({-1.0L, 1.0L, 0.1L});
    const ComplexL x = continue_root(exps, from, to, 1.0L);
    CHECK(std::abs(x - quadratic_root(to)) < 1e-12L);
    CHECK(std::abs(x - ComplexL(0.91607978309961604257L)) < 1e-12L);
    // A double root stops the continuation.
    CHECK_THROWS_AS(continue_root(exps, vecl({1.0L, -2.0L, 1.0L}), vecl({1.0L, -2.0L, 1.0L}), 1.0L), NumericError);
  }

  TEST_CASE("root functions satisfy the constant-term relation")
  {
    const Polynomial p(1, {{exponent({0}), Complex(-1)}, {exponent({1}), Complex(1)}, {exponent({2}), Complex(0.1)}});
    double previous = 1.0;
    for (double h : {1e-2, 1e-3}) {
      FdOptions fd;
      fd.h = h;
      fd.richardson = false;
      fd.tolerance = h < 5e-3 ? 1e-3 : 1e-2;
      const RootCheck rc = check_root_theorems(p, 0.0, 1.0, [](ComplexL x) { return x * x; }, fd);
      CHECK(std::abs(rc.root - ComplexL(0.91607978309961604257L)) < 1e-12L);
      double worst = 0;
      for (const auto &r : rc.reports) {
        CHECK_MESSAGE(r.pass, r.op << " on " << r.note << " relative " << r.relative);
        worst = std::max(worst, r.relative);
      }
      CHECK(worst < previous);
      previous = worst;
    }
  }

  TEST_CASE("Jacobian case: linear system")
  {
    Eigen::MatrixXcd l(2, 2);
    l << 2.0, 1.0, -1.0, 3.0;
    Eigen::VectorXcd b(2);
    b << 1.0, -2.0;
    auto gamma_fn = [](const VectorXcl &x) { return std::exp(x[0]) + x[1] * x[1]; };
    const JacobianCheck j = check_jacobian_case(l, b, gamma_fn);
    const Complex det = 2.0 * 3.0 - 1.0 * (-1.0);
    // Cramer: l x = -b
    const Complex x0 = (-b[0] * 3.0 - 1.0 * (-b[1])) / det;
    const Complex x1 = (2.0 * (-b[1]) - (-1.0) * (-b[0])) / det;
    const Complex want = (std::exp(x0) + x1 * x1) / det;
    CHECK(std::abs(Complex(j.quantity) - want) < 1e-12);
    CHECK(std::abs(Complex(j.jacobian) - det) < 1e-12);
    for (const auto &r : j.reports) CHECK_MESSAGE(r.pass, r.op << " relative " << r.relative);

    Eigen::MatrixXcd singular(2, 2);
    singular << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(check_jacobian_case(singular, b, gamma_fn), std::invalid_argument);
  }
}
