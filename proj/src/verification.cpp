#include "hypint/verification.hpp"

#include "hypint/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace hypint {

namespace {

// Fornberg weights for the k-th derivative at 0 on the integer nodes -p..p.
std::vector<long double> central_weights(int k)
{
  const int p = (k + 1) / 2;
  const int m = 2 * p + 1;
  std::vector<long double> x(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = static_cast<long double>(i - p);
  // c[j][d]: weight of node j for derivative d
  std::vector<std::vector<long double>> c(static_cast<std::size_t>(m), std::vector<long double>(static_cast<std::size_t>(k + 1), 0));
  long double c1 = 1, c4 = x[0];
  c[0][0] = 1;
  for (int i = 1; i < m; ++i) {
    const int mn = std::min(i, k);
    long double c2 = 1;
    const long double c5 = c4;
    c4 = x[static_cast<std::size_t>(i)];
    for (int j = 0; j < i; ++j) {
      const long double c3 = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int d = mn; d >= 1; --d)
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] =
              c1 * (d * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(d - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(d)]) / c2;
        c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int d = mn; d >= 1; --d)
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(d)] -
             d * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(d - 1)]) / c3;
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<long double> w(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) w[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return w;
}

using Offsets = std::vector<int>;  // in half-step units per variable

// Stencil of D^d with step unit/2 * h_w: (offsets, weight) pairs; the weight
// still has to be divided by prod_w step_w^{d_w}.
std::vector<std::pair<Offsets, long double>> stencil(const Eigen::VectorXi &d, int unit)
{
  std::vector<std::pair<Offsets, long double>> out{{Offsets(static_cast<std::size_t>(d.size()), 0), 1.0L}};
  for (Eigen::Index w = 0; w < d.size(); ++w) {
    if (d[w] == 0) continue;
    const auto weights = central_weights(d[w]);
    const int p = (static_cast<int>(weights.size()) - 1) / 2;
    std::vector<std::pair<Offsets, long double>> next;
    for (const auto &[off, wt] : out)
      for (int j = -p; j <= p; ++j) {
        const long double cw = weights[static_cast<std::size_t>(j + p)];
        if (cw == 0) continue;
        Offsets o = off;
        o[static_cast<std::size_t>(w)] += j * unit;
        next.emplace_back(std::move(o), wt * cw);
      }
    out = std::move(next);
  }
  return out;
}

std::string format_point(const VectorXcl &c)
{
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (i) os << ", ";
    os << static_cast<double>(c[i].real());
    if (c[i].imag() != 0) os << (c[i].imag() < 0 ? "-" : "+") << std::abs(static_cast<double>(c[i].imag())) << "i";
  }
  return os.str() + ")";
}

struct FdOutcome
{
  ComplexL residual;
  ComplexL value;
  long double largest_term = 0;
};

std::vector<FdOutcome> fd_evaluate(const std::vector<DiffOperator> &ops, const CoeffFunction &f, const VectorXcl &center,
                                   const Eigen::VectorXcd &binding, const FdOptions &options)
{
  if (!f.fn) throw std::invalid_argument("coefficient function is empty");
  if (!(options.h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const VectorXcl bind = binding.cast<ComplexL>();
  for (const auto &op : ops) {
    if (op.space()->size() != center.size())
      throw std::invalid_argument("center has " + std::to_string(center.size()) + " coordinates, operator has " +
                                  std::to_string(op.space()->size()) + " variables");
    if (op.parameters() != binding.size())
      throw std::invalid_argument("parameter binding has " + std::to_string(binding.size()) + " values, expected " +
                                  std::to_string(op.parameters()));
  }
  const auto vars = center.size();
  std::vector<long double> step(static_cast<std::size_t>(vars));
  for (Eigen::Index w = 0; w < vars; ++w)
    step[static_cast<std::size_t>(w)] = static_cast<long double>(options.h) * std::max(1.0L, std::abs(center[w]));

  const std::vector<int> units = options.richardson ? std::vector<int>{2, 1} : std::vector<int>{2};
  std::map<Offsets, ComplexL> values;
  values.emplace(Offsets(static_cast<std::size_t>(vars), 0), ComplexL(0));
  for (const auto &op : ops)
    for (const auto &t : op.terms())
      for (int unit : units)
        for (const auto &[off, wt] : stencil(t.derivative, unit)) values.emplace(off, ComplexL(0));

  std::vector<std::map<Offsets, ComplexL>::iterator> slots;
  for (auto it = values.begin(); it != values.end(); ++it) slots.push_back(it);
  parallel_for(slots.size(), [&](std::size_t i) {
    VectorXcl c = center;
    const Offsets &off = slots[i]->first;
    for (Eigen::Index w = 0; w < vars; ++w)
      c[w] += static_cast<long double>(off[static_cast<std::size_t>(w)]) * step[static_cast<std::size_t>(w)] / 2;
    try {
      slots[i]->second = f.fn(c);
    } catch (const std::exception &e) {
      throw NumericError("stencil evaluation failed at c = " + format_point(c) + ": " + e.what());
    }
  });

  const ComplexL value = values.at(Offsets(static_cast<std::size_t>(vars), 0));
  std::vector<FdOutcome> out;
  for (const auto &op : ops) {
    FdOutcome r{ComplexL(0), value, 0};
    for (const auto &t : op.terms()) {
      std::vector<ComplexL> levels;
      for (int unit : units) {
        long double scale = 1;
        for (Eigen::Index w = 0; w < vars; ++w)
          for (int k = 0; k < t.derivative[w]; ++k) scale *= step[static_cast<std::size_t>(w)] * unit / 2;
        ComplexL d(0);
        for (const auto &[off, wt] : stencil(t.derivative, unit)) d += wt * values.at(off);
        levels.push_back(d / scale);
      }
      const ComplexL derivative = levels.size() == 2 ? (4.0L * levels[1] - levels[0]) / 3.0L : levels[0];
      ComplexL coeff = t.scalar.evaluate<long double>(bind);
      for (Eigen::Index w = 0; w < vars; ++w)
        for (int k = 0; k < t.monomial[w]; ++k) coeff *= center[w];
      const ComplexL term = coeff * derivative;
      r.residual += term;
      r.largest_term = std::max(r.largest_term, std::abs(term));
    }
    out.push_back(r);
  }
  return out;
}

std::vector<Complex> to_double(const VectorXcl &c)
{
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    out.emplace_back(static_cast<double>(c[i].real()), static_cast<double>(c[i].imag()));
  return out;
}

ResidualReport make_report(const DiffOperator &op, const FdOutcome &r, const VectorXcl &center, const FdOptions &options)
{
  ResidualReport rep;
  rep.op = op.str();
  rep.center = to_double(center);
  rep.h = options.h;
  rep.residual = Complex(static_cast<double>(r.residual.real()), static_cast<double>(r.residual.imag()));
  rep.magnitude = static_cast<double>(std::abs(r.residual));
  rep.value = static_cast<double>(std::abs(r.value));
  rep.largest_term = static_cast<double>(r.largest_term);
  const double denom = std::max(rep.value, rep.largest_term);
  rep.relative = denom > 0 ? rep.magnitude / denom : rep.magnitude;
  rep.tolerance = options.tolerance;
  rep.pass = rep.relative < options.tolerance;
  return rep;
}

ResidualReport skipped_report(const std::string &note, const VectorXcl &center, const FdOptions &options)
{
  ResidualReport rep;
  rep.op = "-";
  rep.center = to_double(center);
  rep.h = options.h;
  rep.tolerance = options.tolerance;
  rep.pass = true;
  rep.note = note;
  return rep;
}

Eigen::VectorXcd concat(const Eigen::VectorXcd &a, const Eigen::VectorXcd &b)
{
  Eigen::VectorXcd out(a.size() + b.size());
  out << a, b;
  return out;
}

} // namespace

ComplexL fd_apply(const DiffOperator &op, const CoeffFunction &f, const VectorXcl &center,
                  const Eigen::VectorXcd &binding, const FdOptions &options)
{
  return fd_evaluate({op}, f, center, binding, options).front().residual;
}

ResidualReport residual_report(const DiffOperator &op, const CoeffFunction &f, const VectorXcl &center,
                               const Eigen::VectorXcd &binding, const FdOptions &options)
{
  return make_report(op, fd_evaluate({op}, f, center, binding, options).front(), center, options);
}

std::vector<ResidualReport> residual_reports(const std::vector<DiffOperator> &ops, const CoeffFunction &f,
                                             const VectorXcl &center, const Eigen::VectorXcd &binding,
                                             const FdOptions &options)
{
  std::vector<ResidualReport> out;
  if (ops.empty()) return out;
  const auto results = fd_evaluate(ops, f, center, binding, options);
  for (std::size_t i = 0; i < ops.size(); ++i) out.push_back(make_report(ops[i], results[i], center, options));
  return out;
}

std::vector<DiffOperator> SystemListing::all() const
{
  std::vector<DiffOperator> out = relations;
  out.insert(out.end(), boxes.begin(), boxes.end());
  out.insert(out.end(), euler.begin(), euler.end());
  return out;
}

SystemListing gg_system(const CoeffSpacePtr &space)
{
  if (space->is_cayley()) throw std::invalid_argument("gg_system expects a single exponent set");
  SystemListing out;
  const ExponentSet &set = space->joint();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i].sum() == 1) continue;
    try {
      out.relations.push_back(gg_relation_operator(space, set[i]));
    } catch (const std::invalid_argument &e) {
      out.notes.push_back("relation for " + space->name(static_cast<int>(i)) + " skipped: " + e.what());
    }
  }
  for (const auto &rel : kernel_basis(set, false)) out.boxes.push_back(box_operator(rel, space));
  for (int j = 0; j < space->dimension(); ++j) out.euler.push_back(euler_t_operator(space, j));
  return out;
}

SystemListing cayley_system(const CoeffSpacePtr &space)
{
  if (!space->is_cayley()) throw std::invalid_argument("cayley_system expects a Cayley coefficient space");
  SystemListing out;
  for (int b = 1; b <= space->blocks(); ++b) {
    const ExponentSet &set = space->block_set(b);
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i].sum() < 2) continue;
      try {
        out.relations.push_back(gg_relation_operator(space, set[i], b));
      } catch (const std::invalid_argument &e) {
        out.notes.push_back("relation for " + space->name(*space->index_of(b, set[i])) + " skipped: " + e.what());
      }
    }
  }
  for (const auto &rel : kernel_basis(space->joint(), false)) out.boxes.push_back(box_operator(rel, space));
  for (int b = 1; b <= space->blocks(); ++b) out.euler.push_back(euler_y_operator(space, b));
  for (int j = 0; j < space->dimension(); ++j) out.euler.push_back(euler_t_operator(space, j));
  return out;
}

CoeffFunction gg_function(const CoeffSpacePtr &space, const Eigen::VectorXcd &u, const ProductContour &contour,
                          const QuadratureOptions &options)
{
  if (space->is_cayley()) throw std::invalid_argument("gg_function expects a single exponent set");
  if (u.size() != space->dimension()) throw std::invalid_argument("u must have one entry per variable");
  contour.validate();
  const ExponentSet set = space->joint();
  const VectorXcl ul = u.cast<ComplexL>();
  return {[set, ul, contour, options](const VectorXcl &c) {
            IntegrandSpec<long double> spec(
                PolynomialL::from_coefficients(set, std::span<const ComplexL>(c.data(), static_cast<std::size_t>(c.size()))));
            spec.alpha = IntegrandSpec<long double>::Alpha::Monomial;
            spec.u = ul;
            return integrate(spec, contour, options).value;
          },
          "GG-function by quadrature"};
}

CoeffFunction euler_function(const CoeffSpacePtr &space, const Eigen::VectorXcd &v, const Eigen::VectorXcd &u,
                             const ProductContour &contour, const QuadratureOptions &options)
{
  if (!space->is_cayley()) throw std::invalid_argument("euler_function expects a Cayley coefficient space");
  if (v.size() != space->blocks()) throw std::invalid_argument("v must have one entry per polynomial");
  if (u.size() != space->dimension()) throw std::invalid_argument("u must have one entry per variable");
  contour.validate();
  const VectorXcl ul = u.cast<ComplexL>(), vl = v.cast<ComplexL>();
  return {[space, ul, vl, contour, options](const VectorXcl &c) {
            const int n = space->dimension();
            IntegrandSpec<long double> spec{PolynomialL(n)};
            spec.alpha = IntegrandSpec<long double>::Alpha::PowerProduct;
            spec.u = ul;
            spec.v = vl;
            for (int b = 1; b <= space->blocks(); ++b) {
              PolynomialL p(n);
              for (int idx : space->block_indices(b)) p.add((*space)[idx].exponent, c[idx]);
              spec.factors.push_back(std::move(p));
            }
            return integrate(spec, contour, options).value;
          },
          "generalized Euler integral by quadrature"};
}

std::vector<ResidualReport> check_gg_system(const CoeffSpacePtr &space, const Eigen::VectorXcd &u,
                                            const CoeffFunction &f, const VectorXcl &center, const FdOptions &options)
{
  const SystemListing sys = gg_system(space);
  std::vector<ResidualReport> out = residual_reports(sys.all(), f, center, u, options);
  for (const auto &note : sys.notes) out.push_back(skipped_report(note, center, options));
  return out;
}

std::vector<ResidualReport> check_gg_system(const ExponentSet &set, const Eigen::VectorXcd &u,
                                            const ProductContour &contour, const Eigen::VectorXcd &center,
                                            const FdOptions &options, const QuadratureOptions &quad)
{
  const auto space = CoeffSpace::single(set);
  return check_gg_system(space, u, gg_function(space, u, contour, quad), center.cast<ComplexL>(), options);
}

std::vector<ResidualReport> check_cayley_consistency(const std::vector<ExponentSet> &blocks, const Eigen::VectorXcd &v,
                                                     const Eigen::VectorXcd &u, const ProductContour &contour,
                                                     const Eigen::VectorXcd &center, const FdOptions &options,
                                                     const QuadratureOptions &quad)
{
  if (blocks.empty() || blocks.size() > 2) throw std::invalid_argument("Cayley checks support one or two polynomials");
  if (blocks.front().dimension() > 2) throw std::invalid_argument("Cayley checks support at most two variables");
  const auto space = CoeffSpace::cayley(blocks);
  const SystemListing sys = cayley_system(space);
  const CoeffFunction f = euler_function(space, v, u, contour, quad);
  std::vector<ResidualReport> out = residual_reports(sys.all(), f, center.cast<ComplexL>(), concat(u, v), options);
  for (const auto &note : sys.notes) out.push_back(skipped_report(note, center.cast<ComplexL>(), options));
  return out;
}

ComplexL continue_root(const std::vector<int> &exponents, const VectorXcl &from, const VectorXcl &to, ComplexL x0,
                       double max_step)
{
  if (static_cast<Eigen::Index>(exponents.size()) != from.size() || from.size() != to.size())
    throw std::invalid_argument("root continuation: coefficient/exponent length mismatch");
  auto newton = [&](const VectorXcl &c, ComplexL x) {
    for (int it = 0; it < 60; ++it) {
      ComplexL p(0), dp(0);
      for (std::size_t i = 0; i < exponents.size(); ++i) {
        const int e = exponents[i];
        const auto ci = c[static_cast<Eigen::Index>(i)];
        p += ci * std::pow(x, e);
        if (e > 0) dp += ci * static_cast<long double>(e) * std::pow(x, e - 1);
      }
      if (std::abs(dp) < 1e-8L) throw NumericError("root continuation: derivative vanishes (roots collide)");
      const ComplexL dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-18L * std::max(1.0L, std::abs(x))) break;
    }
    return x;
  };
  const long double dist = (to - from).cwiseAbs().maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(dist / static_cast<long double>(max_step))));
  ComplexL x = newton(from, x0);
  for (int s = 1; s <= steps; ++s) {
    const long double tau = static_cast<long double>(s) / steps;
    x = newton(from + tau * (to - from), x);
  }
  return x;
}

RootCheck check_root_theorems(const Polynomial &p, Complex y0, Complex x0,
                              const std::function<ComplexL(ComplexL)> &gamma_fn, const FdOptions &options)
{
  if (p.dimension() != 1) throw std::invalid_argument("root theorems need a univariate polynomial");
  Polynomial q = p;
  q.add(exponent({0}), -y0);
  std::set<int> support{0, 1};
  for (const auto &[w, c] : q.terms()) support.insert(w[0]);
  std::vector<int> exps(support.begin(), support.end());
  std::vector<ExponentVector> members;
  for (int e : exps) members.push_back(exponent({e}));
  const ExponentSet block(1, members);
  const auto space = CoeffSpace::cayley({block});

  VectorXcl center(static_cast<Eigen::Index>(exps.size()));
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const Complex c = q.coefficient(exponent({exps[i]}));
    center[static_cast<Eigen::Index>(i)] = ComplexL(c.real(), c.imag());
  }
  RootCheck out;
  out.root = continue_root(exps, center, center, ComplexL(x0.real(), x0.imag()));
  const ComplexL root = out.root;

  auto derivative = [exps](const VectorXcl &c, ComplexL x) {
    ComplexL d(0);
    for (std::size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > 0) d += c[static_cast<Eigen::Index>(i)] * static_cast<long double>(exps[i]) * std::pow(x, exps[i] - 1);
    return d;
  };
  const CoeffFunction f1{[=](const VectorXcl &c) { return gamma_fn(continue_root(exps, center, c, root)); },
                         "gamma(x)"};
  const CoeffFunction f2{[=](const VectorXcl &c) {
                           const ComplexL x = continue_root(exps, center, c, root);
                           return gamma_fn(x) / derivative(c, x);
                         },
                         "gamma(x)/P'(x)"};

  const SystemListing sys = cayley_system(space);
  const Eigen::VectorXcd binding = Eigen::VectorXcd::Zero(space->parameters().size());
  for (const CoeffFunction *f : {&f1, &f2}) {
    auto reps = residual_reports(sys.relations, *f, center, binding, options);
    for (auto &r : reps) r.note = f->description;
    out.reports.insert(out.reports.end(), reps.begin(), reps.end());
  }
  for (const auto &note : sys.notes) out.reports.push_back(skipped_report(note, center, options));
  return out;
}

JacobianCheck check_jacobian_case(const Eigen::MatrixXcd &linear, const Eigen::VectorXcd &constant,
                                  const std::function<ComplexL(const VectorXcl &)> &gamma_fn, const FdOptions &options)
{
  const auto n = linear.rows();
  if (n < 1 || linear.cols() != n || constant.size() != n)
    throw std::invalid_argument("Jacobian case needs a square linear part and one constant per equation");
  std::vector<ExponentSet> blocks;
  std::vector<ExponentVector> members{ExponentVector::Zero(n)};
  for (Eigen::Index j = 0; j < n; ++j) members.push_back(unit_multi_index(static_cast<int>(n), static_cast<int>(j)));
  for (Eigen::Index i = 0; i < n; ++i) blocks.emplace_back(static_cast<int>(n), members);
  const auto space = CoeffSpace::cayley(blocks);

  VectorXcl center(space->size());
  for (int b = 1; b <= static_cast<int>(n); ++b)
    for (int idx : space->block_indices(b)) {
      const ExponentVector &w = (*space)[idx].exponent;
      Complex c = constant[b - 1];
      for (Eigen::Index j = 0; j < n; ++j)
        if (w[j] == 1) c = linear(b - 1, j);
      center[idx] = ComplexL(c.real(), c.imag());
    }

  using MatrixXcl = Eigen::Matrix<ComplexL, Eigen::Dynamic, Eigen::Dynamic>;
  auto solve = [space, n, gamma_fn](const VectorXcl &c, VectorXcl *x_out, ComplexL *j_out) {
    MatrixXcl l(n, n);
    VectorXcl b(n);
    for (int blk = 1; blk <= static_cast<int>(n); ++blk)
      for (int idx : space->block_indices(blk)) {
        const ExponentVector &w = (*space)[idx].exponent;
        if (w.sum() == 0)
          b[blk - 1] = c[idx];
        else
          for (Eigen::Index j = 0; j < n; ++j)
            if (w[j] == 1) l(blk - 1, j) = c[idx];
      }
    Eigen::PartialPivLU<MatrixXcl> lu(l);
    const ComplexL det = lu.determinant();
    long double scale = 1;
    for (Eigen::Index i = 0; i < n; ++i) scale *= std::max(1.0L, l.row(i).cwiseAbs().maxCoeff());
    if (std::abs(det) <= 1e-14L * scale) throw NumericError("linear part is singular");
    const VectorXcl x = -lu.solve(b);
    if (x_out) *x_out = x;
    if (j_out) *j_out = det;
    return gamma_fn(x) / det;
  };

  JacobianCheck out;
  try {
    out.quantity = solve(center, &out.x, &out.jacobian);
  } catch (const NumericError &) {
    throw std::invalid_argument("Jacobian case: the linear part is singular");
  }
  const CoeffFunction f{[solve](const VectorXcl &c) { return solve(c, nullptr, nullptr); }, "gamma(x)/J"};
  std::vector<DiffOperator> ops;
  for (int b = 1; b <= static_cast<int>(n); ++b) ops.push_back(euler_y_operator(space, b));
  Eigen::VectorXcd binding = Eigen::VectorXcd::Zero(space->parameters().size());
  for (int b = 0; b < static_cast<int>(n); ++b) binding[space->parameters().v(b)] = -1.0;
  out.reports = residual_reports(ops, f, center, binding, options);
  return out;
}

SeriesComparison series_vs_oracle(const GammaSeries &s, const std::function<Complex(const Eigen::VectorXcd &)> &oracle,
                                  const std::vector<Eigen::VectorXcd> &points, double tail_limit)
{
  if (points.empty()) throw std::invalid_argument("series comparison needs at least one point");
  SeriesComparison out;
  std::vector<std::pair<Complex, Complex>> used;  // (series, oracle)
  for (std::size_t i = 0; i < points.size(); ++i) {
    const SeriesValue sv = evaluate_at_coefficients(s, points[i]);
    if (!(sv.tail <= tail_limit * std::abs(sv.value))) {
      std::ostringstream os;
      os << "point " << i << " skipped: tail " << sv.tail << " exceeds " << tail_limit << " of |value| "
         << std::abs(sv.value);
      out.notices.push_back(os.str());
      continue;
    }
    used.emplace_back(sv.value, oracle(points[i]));
  }
  if (used.empty()) throw NumericError("no comparison point has a small enough series tail");
  if (used.front().first == Complex(0.0)) throw NumericError("series vanishes at the fitting point");
  out.kappa = used.front().second / used.front().first;
  for (std::size_t i = 1; i < used.size(); ++i) {
    const auto [sv, ov] = used[i];
    const double dev = std::abs(out.kappa * sv - ov) / std::max(std::abs(ov), 1e-300);
    out.deviations.push_back(dev);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (sv != Complex(0.0))
      out.kappa_spread = std::max(out.kappa_spread, std::abs(ov / sv - out.kappa) / std::abs(out.kappa));
  }
  return out;
}

} // namespace hypint
