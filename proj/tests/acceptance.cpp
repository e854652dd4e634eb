// One line per acceptance criterion. Exit status is nonzero when a
// criterion fails that is not listed with --expect-fail.

#include "hypint/cli_io.hpp"
#include "hypint/gamma.hpp"
#include "hypint/gamma_series.hpp"
#include "hypint/quadrature.hpp"
#include "hypint/verification.hpp"

#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace hypint;

namespace {

struct Outcome
{
  bool pass = false;
  std::string detail;
};

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

ProductContour single(std::vector<ContourLeg> legs)
{
  ProductContour c;
  c.chains = {std::move(legs)};
  return c;
}

std::string sci(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// 1. Gaussian quadrature against sqrt(pi) e^{a^2/4}; tol 1e-8 relative, < 1 s.
Outcome gaussian_oracle(double seconds_limit)
{
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (double a : {0.0, 0.5, 1.0}) {
    const Polynomial p(1, {{exponent({1}), Complex(a)}, {exponent({2}), Complex(-1)}});
    const Complex got = proper_integral(p, single({ContourLeg::line(0.0)})).value;
    const double want = std::sqrt(M_PI) * std::exp(a * a / 4);
    worst = std::max(worst, std::abs(got - want) / want);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-8 && secs < seconds_limit,
          "max rel err " + sci(worst) + " (tol 1e-8), " + sci(secs) + " s (limit " + sci(seconds_limit) + ")"};
}

// 2. GG-system of A = {1,2}, u = 1, at (0.3, -1), h = 1e-4: residuals < 1e-4;
// plain central differences, ratio at h -> h/2 within [3, 5]; < 10 s.
Outcome gg_system_check()
{
  const auto start = std::chrono::steady_clock::now();
  const auto set = ExponentSet::of(1, {{1}, {2}});
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  const auto line = single({ContourLeg::line(0.0)});
  const FdOptions coarse{1e-4, false, 1e-4}, fine{5e-5, false, 1e-4};
  const auto a = check_gg_system(set, vec({1.0}), line, vec({0.3, -1.0}), coarse, q);
  const auto b = check_gg_system(set, vec({1.0}), line, vec({0.3, -1.0}), fine, q);
  bool pass = a.size() == 3;
  std::ostringstream os;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ratio = a[i].magnitude / b[i].magnitude;
    pass = pass && a[i].pass && ratio >= 3.0 && ratio <= 5.0;
    os << (i ? "; " : "") << "[" << a[i].op << "] rel " << sci(a[i].relative) << " ratio " << sci(ratio);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  pass = pass && secs < 10.0;
  os << "; " << sci(secs) << " s";
  return {pass, os.str()};
}

// 3. Series (A = {1,2}, base {1}, u = 1, M = 12) against half-line quadrature,
// kappa fitted at the first point: deviations < 1e-6, kappa spread < 1e-6.
Outcome series_oracle()
{
  const auto space = CoeffSpace::single(ExponentSet::of(1, {{1}, {2}}));
  const auto layout = SeriesLayout::gg(space, Base(space->joint(), {0}));
  const auto s = gg_series(layout, vec({1.0}), 12);
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  auto oracle = [&](const Eigen::VectorXcd &c) {
    return gg_eval(space->joint(), c, vec({1.0}), single({ContourLeg::ray(0.0, 0.0)}), q).value;
  };
  std::vector<Eigen::VectorXcd> points;
  for (double c2 : {-0.002, -0.004, -0.006, -0.008}) points.push_back(vec({-1.0, c2}));
  const SeriesComparison cmp = series_vs_oracle(s, oracle, points);
  const bool pass = cmp.deviations.size() == 3 && cmp.max_deviation < 1e-6 && cmp.kappa_spread < 1e-6;
  std::ostringstream os;
  os << "kappa " << cmp.kappa.real() << ", max dev " << sci(cmp.max_deviation) << " over " << cmp.deviations.size()
     << " points (tol 1e-6), kappa spread " << sci(cmp.kappa_spread) << " (tol 1e-6)";
  for (const auto &n : cmp.notices) os << "; " << n;
  return {pass, os.str()};
}

// 4. Box and Euler operators applied term-wise to the same series: no
// surviving term at or below the exact order; survivors only at the boundary.
Outcome exact_annihilation()
{
  const auto space = CoeffSpace::single(ExponentSet::of(1, {{1}, {2}}));
  const int order = 12;
  const auto s = gg_series(SeriesLayout::gg(space, Base(space->joint(), {0})), vec({1.0}), order);
  const SystemListing sys = gg_system(space);
  std::vector<DiffOperator> ops = sys.boxes;
  ops.insert(ops.end(), sys.euler.begin(), sys.euler.end());
  bool pass = !ops.empty();
  std::ostringstream os;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const GammaSeries r = apply_to_series(ops[i], s);
    int low = 0, boundary = 0;
    for (const auto &t : r.terms()) (t.order() > r.exact_through() ? boundary : low)++;
    pass = pass && low == 0 && r.exact_through() >= order - ops[i].order();
    os << (i ? "; " : "") << "[" << ops[i].str() << "] zero through order " << r.exact_through() << ", " << low
       << " nonzero below, " << boundary << " boundary terms";
  }
  return {pass, os.str()};
}

// 5. Standard expansion of I(-t^2 + a t) at a = 0.6, M = 20, tol 1e-8.
Outcome standard_expansion_check()
{
  const auto set = ExponentSet::of(1, {{1}, {2}});
  const Polynomial center(1, {{exponent({2}), Complex(-1)}});
  auto moment = [](const Eigen::VectorXi &m) -> Complex {
    const int k = m[0] + 2 * m[1];
    return k % 2 ? Complex(0) : gamma(Complex(0.5 * (k + 1)));
  };
  const GammaSeries s = standard_expansion(center, set, moment, 20);
  const double a = 0.6;
  const Complex got = evaluate_at_coefficients(s, vec({a, -1.0})).value;
  const double want = std::sqrt(M_PI) * std::exp(a * a / 4);
  const double err = std::abs(got - want);
  return {err < 1e-8, "abs err " + sci(err) + " (tol 1e-8)"};
}

// 6. Euler integral of (c0 + c1 t)^{-1} on [0,1], u = 1, at (1, -1/2):
// Euler operators < 1e-5; quadratic P, mixed-partial relation < 1e-4.
Outcome cayley_check()
{
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  FdOptions fd;
  fd.tolerance = 1e-5;
  const auto seg = single({ContourLeg::segment(0.0, 1.0)});
  const std::vector<ExponentSet> affine{ExponentSet::of(1, {{0}, {1}})};
  const auto space = CoeffSpace::cayley(affine);
  const CoeffFunction f = euler_function(space, vec({-1.0}), vec({1.0}), seg, q);
  const VectorXcl center = vecl({1.0L, -0.5L});
  const ComplexL value = f.fn(center);
  std::vector<DiffOperator> euler{euler_y_operator(space, 1), euler_t_operator(space, 0)};
  const auto reports = residual_reports(euler, f, center, vec({1.0, -1.0}), fd);

  const std::vector<ExponentSet> quadratic{ExponentSet::of(1, {{0}, {1}, {2}})};
  const auto qspace = CoeffSpace::cayley(quadratic);
  FdOptions fd2;
  fd2.tolerance = 1e-4;
  const CoeffFunction g = euler_function(qspace, vec({-1.0}), vec({1.0}), seg, q);
  const auto mixed = residual_report(gg_relation_operator(qspace, exponent({2}), 1), g, vecl({1.0L, -0.5L, 0.1L}),
                                     vec({1.0, -1.0}), fd2);

  bool pass = std::abs(value - ComplexL(1.3862943611198906188L)) < 1e-12L && mixed.pass;
  std::ostringstream os;
  os << "value " << static_cast<double>(value.real()) << " (2 ln 2)";
  for (const auto &r : reports) {
    pass = pass && r.pass;
    os << "; [" << r.op << "] rel " << sci(r.relative) << (r.pass ? "" : " FAILS");
  }
  os << "; [" << mixed.op << "] rel " << sci(mixed.relative) << " (tol 1e-4)";
  // On an open path the t-homogeneity picks up the endpoint term t^u P^v at t = 1.
  const Complex endpoint = 1.0 / (1.0 - 0.5);
  os << "; Euler t residual " << sci(std::abs(reports[1].residual)) << " vs endpoint term " << sci(std::abs(endpoint));
  return {pass, os.str()};
}

// 7. Root of c0 + c1 x + c2 x^2 near (-1, 1, 0.1): continuation vs formula
// (1e-10); mixed partials of x by differences vs implicit differentiation
// (1e-3 at h = 1e-3, shrinking with h); linear Jacobian case (1e-12).
Outcome root_check()
{
  const VectorXcl c = vecl({-1.0L, 1.0L, 0.1L});
  const std::vector<int> exps{0, 1, 2};
  const ComplexL x = continue_root(exps, vecl({-1.0L, 1.0L, 0.0L}), c, 1.0L);
  const ComplexL formula = (-c[1] + std::sqrt(c[1] * c[1] - 4.0L * c[0] * c[2])) / (2.0L * c[2]);
  const double root_err = static_cast<double>(std::abs(x - formula));

  // Implicit differentiation: x_i = -x^i / P', and d/dc_j of that.
  const ComplexL p1 = c[1] + 2.0L * c[2] * x, p2 = 2.0L * c[2];
  auto first = [&](int i) { return -std::pow(x, i) / p1; };
  auto second = [&](int i, int j) {
    const ComplexL xj = first(j);
    const ComplexL dp1 = (j >= 1 ? static_cast<long double>(j) * std::pow(x, j - 1) : ComplexL(0)) + p2 * xj;
    const ComplexL di = i >= 1 ? static_cast<long double>(i) * std::pow(x, i - 1) * xj : ComplexL(0);
    return -(di * p1 - std::pow(x, i) * dp1) / (p1 * p1);
  };
  const ComplexL d02 = second(0, 2), d11 = second(1, 1);

  const auto space = CoeffSpace::cayley({ExponentSet::of(1, {{0}, {1}, {2}})});
  auto single_term = [&](Eigen::VectorXi d) {
    DiffOperator op(space);
    op.add_term(Rational(1), Eigen::VectorXi::Zero(3), d);
    return op;
  };
  Eigen::VectorXi e02(3), e11(3);
  e02 << 1, 0, 1;
  e11 << 0, 2, 0;
  const CoeffFunction root_fn{[&](const VectorXcl &cc) { return continue_root(exps, c, cc, x); }, "x(c)"};
  const Eigen::VectorXcd binding = Eigen::VectorXcd::Zero(space->parameters().size());

  bool pass = root_err < 1e-10;
  std::ostringstream os;
  os << "root err " << sci(root_err) << " (tol 1e-10); d0d2 x = " << static_cast<double>(d02.real())
     << ", d1^2 x = " << static_cast<double>(d11.real());
  double previous = INFINITY;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    const FdOptions fd{h, false, 1e-3};
    const ComplexL a = fd_apply(single_term(e02), root_fn, c, binding, fd);
    const ComplexL b = fd_apply(single_term(e11), root_fn, c, binding, fd);
    const double err = static_cast<double>(std::max(std::abs(a - d02) / std::abs(d02), std::abs(b - d11) / std::abs(d11)));
    const auto rel = residual_report(gg_relation_operator(space, exponent({2}), 1), root_fn, c, binding, fd);
    if (h == 1e-3) pass = pass && err < 1e-3 && rel.relative < 1e-3;
    pass = pass && err < previous;
    previous = err;
    os << "; h " << sci(h) << ": fd vs implicit " << sci(err) << ", relation rel " << sci(rel.relative);
  }

  const FdOptions fd_root{1e-3, false, 1e-3};
  const RootCheck rc = check_root_theorems(
      Polynomial(1, {{exponent({0}), Complex(-1)}, {exponent({1}), Complex(1)}, {exponent({2}), Complex(0.1)}}), 0.0,
      1.0, [](ComplexL t) { return t * t; }, fd_root);
  double worst = 0;
  for (const auto &r : rc.reports) {
    pass = pass && r.pass;
    worst = std::max(worst, r.relative);
  }
  os << "; gamma(x) and gamma(x)/P' worst rel " << sci(worst);

  Eigen::MatrixXcd l(2, 2);
  l << 2.0, 1.0, -1.0, 3.0;
  Eigen::VectorXcd b(2);
  b << 1.0, -2.0;
  auto gamma_fn = [](const VectorXcl &t) { return std::exp(t[0]) + t[1] * t[1]; };
  const JacobianCheck j = check_jacobian_case(l, b, gamma_fn);
  const Eigen::VectorXcd xs = l.partialPivLu().solve(-b);
  const Complex want = (std::exp(xs[0]) + xs[1] * xs[1]) / l.determinant();
  const double jerr = std::abs(Complex(j.quantity) - want) / std::abs(want);
  pass = pass && jerr < 1e-12;
  os << "; Jacobian case rel err " << sci(jerr) << " (tol 1e-12)";
  return {pass, os.str()};
}

// 8. 1000 random (A, B, w), n <= 4, entries <= 6: exact coordinates and
// exact kernels; < 5 s.
Outcome lattice_check()
{
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(8);
  int done = 0, bad = 0;
  while (done < 1000) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    const int count = std::uniform_int_distribution<int>(n, n + 3)(rng);
    std::set<std::vector<int>> seen;
    std::vector<ExponentVector> members;
    while (static_cast<int>(members.size()) < count) {
      ExponentVector e(n);
      for (int j = 0; j < n; ++j) e[j] = std::uniform_int_distribution<int>(0, 6)(rng);
      if (e.isZero() || !seen.insert(std::vector<int>(e.data(), e.data() + n)).second) continue;
      members.push_back(e);
    }
    const ExponentSet a(n, members);
    const auto bases = enumerate_bases(a);
    if (bases.empty()) continue;
    const Base &b = bases[std::uniform_int_distribution<std::size_t>(0, bases.size() - 1)(rng)];
    ExponentVector w(n);
    for (int j = 0; j < n; ++j) w[j] = std::uniform_int_distribution<int>(0, 6)(rng);
    const RationalVector l = base_coords(b, w);
    const RationalMatrix bm = to_rational(b.matrix());
    const RationalVector back = bm * l;
    for (int j = 0; j < n; ++j)
      if (back[j] != Rational(w[j])) ++bad;
    for (bool homogeneous : {false, true})
      for (const auto &r : kernel_basis(a, homogeneous)) {
        Eigen::VectorXi sum = a.matrix() * r.coefficients;
        if (!sum.isZero() || (homogeneous && r.coefficients.sum() != 0)) ++bad;
      }
    ++done;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {bad == 0 && secs < 5.0,
          std::to_string(done) + " instances, " + std::to_string(bad) + " violations, " + sci(secs) + " s (limit 5)"};
}

// 9. verify with the Euler parameter shifted to u + 0.5: residual > 1e-2, exit 1.
Outcome negative_control()
{
  const std::string problem = std::string(HYPINT_PROBLEMS) + "/gaussian_gg_perturbed.json";
  const CommandOutput out = cmd_verify(load_problem(problem));
  double worst = 0;
  for (const auto &r : out.report["residuals"]) worst = std::max(worst, r["relative"].get<double>());
  const std::string cmd = std::string(HYPINT_CLI) + " verify " + problem + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {worst > 1e-2 && out.exit_code == 1 && code == 1,
          "max rel residual " + sci(worst) + " (needs > 1e-2), exit code " + std::to_string(code)};
}

} // namespace

int main(int argc, char **argv)
{
  std::set<int> expected_failures;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--expect-fail") expected_failures.insert(std::atoi(argv[++i]));

  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"Gaussian oracle", [] { return gaussian_oracle(1.0); }},
      {"GG-system residuals and second-order law", gg_system_check},
      {"Gamma-series vs quadrature", series_oracle},
      {"exact annihilation below M", exact_annihilation},
      {"standard expansion", standard_expansion_check},
      {"Euler integral system", cayley_check},
      {"root theorems and Jacobian case", root_check},
      {"lattice exactness", lattice_check},
      {"negative control", negative_control},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool expected = expected_failures.count(id) > 0;
    std::cout << id << " " << (o.pass ? "PASS" : (expected ? "FAIL (known deviation)" : "FAIL")) << "  "
              << criteria[i].first << ": " << o.detail << std::endl;
    if (!o.pass && !expected) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
