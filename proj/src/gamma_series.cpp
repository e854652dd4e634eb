#include "hypint/gamma_series.hpp"

#include "hypint/gamma.hpp"
#include "hypint/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace hypint {

SeriesLayout::SeriesLayout(CoeffSpacePtr space, std::optional<Base> base, Eigen::VectorXcd center)
    : space_(std::move(space)), base_(std::move(base)), center_(std::move(center))
{
  if (!space_) throw std::invalid_argument("series layout needs a coefficient space");
  const std::size_t size = set().size();
  if (center_.size() == 0) center_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size));
  if (static_cast<std::size_t>(center_.size()) != size)
    throw std::invalid_argument("series center has " + std::to_string(center_.size()) + " entries, expected " +
                                std::to_string(size));
  if (base_) {
    if (!(base_->parent() == set())) throw std::invalid_argument("base does not belong to the series exponent set");
    series_ = base_->complement();
  } else {
    for (std::size_t i = 0; i < size; ++i) series_.push_back(i);
  }
}

SeriesLayout SeriesLayout::gg(CoeffSpacePtr space, const Base &base)
{
  const auto size = static_cast<Eigen::Index>(space->joint().size());
  return SeriesLayout(std::move(space), base, Eigen::VectorXcd::Zero(size));
}

int SeriesLayout::series_position(std::size_t member) const
{
  const auto it = std::find(series_.begin(), series_.end(), member);
  return it == series_.end() ? -1 : static_cast<int>(it - series_.begin());
}

int SeriesLayout::base_position(std::size_t member) const
{
  if (!base_) return -1;
  const auto &idx = base_->indices();
  const auto it = std::find(idx.begin(), idx.end(), member);
  return it == idx.end() ? -1 : static_cast<int>(it - idx.begin());
}

namespace {

Eigen::VectorXcd default_binding(const SeriesLayout &layout, Eigen::VectorXcd binding)
{
  if (binding.size() == 0) binding = Eigen::VectorXcd::Zero(layout.parameters());
  if (binding.size() != layout.parameters())
    throw std::invalid_argument("parameter binding has " + std::to_string(binding.size()) + " values, expected " +
                                std::to_string(layout.parameters()));
  return binding;
}

Rational inverse_factorial_weight(const Eigen::VectorXi &m)
{
  Rational w(1);
  for (Eigen::Index i = 0; i < m.size(); ++i)
    for (int f = 2; f <= m[i]; ++f) w = w / Rational(f);
  return w;
}

Eigen::VectorXi spread_powers(const SeriesLayout &layout, const Eigen::VectorXi &m)
{
  Eigen::VectorXi powers = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(layout.set().size()));
  const auto &idx = layout.series_indices();
  for (std::size_t i = 0; i < idx.size(); ++i) powers[static_cast<Eigen::Index>(idx[i])] = m[static_cast<Eigen::Index>(i)];
  return powers;
}

bool any_pole(const std::vector<AffineForm> &args, const Eigen::VectorXcd &binding)
{
  return std::any_of(args.begin(), args.end(),
                     [&](const AffineForm &g) { return is_gamma_pole(g.evaluate<double>(binding)); });
}

Complex power_of_negated(Complex a, Complex rho)
{
  if (rho == Complex(0.0)) return 1.0;
  Complex x = -a;
  if (x.imag() == 0.0) x.imag(0.0);  // drop -0.0 so the cut stays on the negative axis
  if (x == Complex(0.0)) {
    if (rho.real() < 0.0 || (rho.real() == 0.0 && rho.imag() != 0.0))
      throw std::domain_error("base variable is zero under a power with non-positive real part");
    return 0.0;
  }
  return std::exp(rho * std::log(x));
}

Complex int_power(Complex a, int p)
{
  Complex r = 1.0;
  for (int i = 0; i < p; ++i) r *= a;
  return r;
}

} // namespace

GammaSeries::GammaSeries(SeriesLayout layout, int order, Eigen::VectorXcd binding)
    : layout_(std::move(layout)), order_(order), exact_through_(order)
{
  if (order < 0) throw std::invalid_argument("series order must be non-negative");
  binding_ = default_binding(layout_, std::move(binding));
}

void GammaSeries::refresh_poles()
{
  for (auto &t : terms_) t.pole = !t.from_oracle && any_pole(t.gamma_args, binding_);
}

GammaSeries &GammaSeries::operator+=(const GammaSeries &o)
{
  if (!(*layout_.space() == *o.layout_.space()) || layout_.series_indices() != o.layout_.series_indices())
    throw std::invalid_argument("series layouts differ");
  if (binding_ != o.binding_) throw std::invalid_argument("series parameter bindings differ");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  order_ = std::max(order_, o.order_);
  exact_through_ = std::min(exact_through_, o.exact_through_);
  if (!oracle_) oracle_ = o.oracle_;
  return *this;
}

std::vector<Eigen::VectorXi> multi_indices(int length, int order)
{
  std::vector<Eigen::VectorXi> out;
  if (length < 0 || order < 0) throw std::invalid_argument("bad multi-index request");
  Eigen::VectorXi m = Eigen::VectorXi::Zero(length);
  // for each total degree, enumerate compositions in lexicographically decreasing first entry
  for (int degree = 0; degree <= order; ++degree) {
    if (length == 0) {
      if (degree == 0) out.push_back(m);
      continue;
    }
    std::vector<Eigen::VectorXi> level;
    auto rec = [&](auto &&self, int pos, int left) -> void {
      if (pos == length - 1) {
        m[pos] = left;
        level.push_back(m);
        return;
      }
      for (int k = left; k >= 0; --k) {
        m[pos] = k;
        self(self, pos + 1, left - k);
      }
    };
    rec(rec, 0, degree);
    std::sort(level.begin(), level.end(), [](const auto &a, const auto &b) { return lex_less(a, b); });
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<AffineForm> gg_weights(const CoeffSpace &space)
{
  const ParameterSpace params = space.parameters();
  std::vector<AffineForm> w;
  for (int j = 0; j < params.n_u(); ++j) w.push_back(AffineForm::parameter(params.size(), params.u(j)));
  for (int i = 0; i < params.n_v(); ++i) w.push_back(AffineForm::parameter(params.size(), params.v(i), Rational(-1)));
  return w;
}

std::vector<AffineForm> gg_gamma_arguments(const SeriesLayout &layout, const Eigen::VectorXi &m)
{
  if (!layout.base()) throw std::invalid_argument("Gamma-type coefficients need a base");
  const Base &base = *layout.base();
  const auto weights = gg_weights(*layout.space());
  const auto n = static_cast<Eigen::Index>(base.size());
  if (static_cast<Eigen::Index>(weights.size()) != n) throw std::logic_error("weight count does not match the base");
  const auto &series = layout.series_indices();
  if (m.size() != static_cast<Eigen::Index>(series.size())) throw std::invalid_argument("multi-index length mismatch");

  const RationalMatrix &inv = base.inverse();
  RationalVector shift = RationalVector::Constant(n, Rational(0));
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (m[static_cast<Eigen::Index>(k)] == 0) continue;
    const RationalVector l = base_coords(base, layout.set()[series[k]]);
    for (Eigen::Index j = 0; j < n; ++j) shift[j] += Rational(m[static_cast<Eigen::Index>(k)]) * l[j];
  }
  std::vector<AffineForm> s;
  const int params = layout.parameters();
  for (Eigen::Index j = 0; j < n; ++j) {
    AffineForm sj(params, shift[j]);
    for (Eigen::Index i = 0; i < n; ++i)
      if (!inv(j, i).is_zero()) sj += inv(j, i) * weights[static_cast<std::size_t>(i)];
    s.push_back(sj);
  }
  return s;
}

TermValue gg_gamma_coefficient(const Eigen::VectorXi &m, const Eigen::VectorXcd &binding, const SeriesLayout &layout)
{
  TermValue out;
  out.s = gg_gamma_arguments(layout, m);
  out.scalar = 1.0;
  for (const auto &s : out.s) {
    const Complex z = s.evaluate<double>(binding);
    if (is_gamma_pole(z)) out.pole = true;
    out.scalar *= out.pole ? Complex(0.0) : gamma(z);
    out.exponents.push_back(-z);
  }
  if (out.pole) out.scalar = std::numeric_limits<double>::quiet_NaN();
  return out;
}

GammaSeries expand_general(const SeriesLayout &layout, CoefficientOracle oracle, int order, Eigen::VectorXcd binding)
{
  if (!oracle.fn) throw std::invalid_argument("coefficient oracle is empty");
  GammaSeries s(layout, order, std::move(binding));
  const int params = layout.parameters();
  for (const auto &m : multi_indices(static_cast<int>(layout.series_indices().size()), order)) {
    SeriesTerm t;
    t.m = m;
    t.powers = spread_powers(layout, m);
    t.prefactor = ParamPoly(params, inverse_factorial_weight(m));
    t.from_oracle = true;
    s.terms().push_back(std::move(t));
  }
  s.set_oracle(std::move(oracle));
  return s;
}

GammaSeries gg_series(const SeriesLayout &layout, const Eigen::VectorXcd &binding, int order)
{
  if (!layout.base()) throw std::invalid_argument("Gamma-series needs a base");
  if (!layout.zero_center()) throw std::invalid_argument("closed-form Gamma coefficients assume P_0 = 0");
  GammaSeries s(layout, order, binding);
  const int params = layout.parameters();
  const auto ms = multi_indices(static_cast<int>(layout.series_indices().size()), order);
  std::vector<SeriesTerm> terms(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) {
    SeriesTerm &t = terms[i];
    t.m = ms[i];
    t.powers = spread_powers(layout, ms[i]);
    t.prefactor = ParamPoly(params, inverse_factorial_weight(ms[i]));
    t.gamma_args = gg_gamma_arguments(layout, ms[i]);
    for (const auto &g : t.gamma_args) t.base_exponents.push_back(-g);
  });
  s.terms() = std::move(terms);
  s.refresh_poles();
  return s;
}

GammaSeries standard_expansion(const Polynomial &center, const ExponentSet &set,
                               std::function<Complex(const Eigen::VectorXi &m)> moment, int order)
{
  if (!moment) throw std::invalid_argument("moment oracle is empty");
  if (center.dimension() != set.dimension()) throw std::invalid_argument("center polynomial dimension mismatch");
  Eigen::VectorXcd c0(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) c0[static_cast<Eigen::Index>(i)] = center.coefficient(set[i]);
  SeriesLayout layout(CoeffSpace::single(set), std::nullopt, c0);

  const auto ms = multi_indices(static_cast<int>(set.size()), order);
  auto table = std::make_shared<std::map<std::vector<int>, Complex>>();
  std::vector<Complex> values(ms.size());
  parallel_for(ms.size(), [&](std::size_t i) {
    try {
      values[i] = moment(ms[i]);
    } catch (const std::exception &e) {
      std::string where;
      for (Eigen::Index k = 0; k < ms[i].size(); ++k) where += (k ? "," : "") + std::to_string(ms[i][k]);
      throw std::runtime_error("moment oracle failed at m=(" + where + "): " + e.what());
    }
  });
  for (std::size_t i = 0; i < ms.size(); ++i)
    table->emplace(std::vector<int>(ms[i].data(), ms[i].data() + ms[i].size()), values[i]);

  CoefficientOracle oracle{[table](const Eigen::VectorXi &m, const Eigen::VectorXcd &) {
                             const auto it = table->find(std::vector<int>(m.data(), m.data() + m.size()));
                             if (it == table->end()) throw std::out_of_range("moment not tabulated");
                             return it->second;
                           },
                           true};
  return expand_general(layout, std::move(oracle), order);
}

namespace {

Complex term_value(const GammaSeries &s, const SeriesTerm &t, const Eigen::VectorXcd &a, GammaForm form)
{
  const auto &layout = s.layout();
  Complex v = t.prefactor.evaluate<double>(s.binding());
  if (v == Complex(0.0)) return 0.0;
  for (Eigen::Index w = 0; w < t.powers.size(); ++w)
    if (t.powers[w] != 0) v *= int_power(a[w], t.powers[w]);
  if (t.from_oracle) {
    if (!s.oracle()) throw std::logic_error("oracle-backed term without an oracle");
    Eigen::VectorXcd base_values;
    if (layout.base()) {
      const auto &idx = layout.base()->indices();
      base_values.resize(static_cast<Eigen::Index>(idx.size()));
      for (std::size_t j = 0; j < idx.size(); ++j) base_values[static_cast<Eigen::Index>(j)] = a[static_cast<Eigen::Index>(idx[j])];
    }
    return v * s.oracle()->fn(t.m, base_values);
  }
  for (const auto &g : t.gamma_args) {
    const Complex z = g.evaluate<double>(s.binding());
    if (form == GammaForm::Direct) {
      if (is_gamma_pole(z)) throw std::domain_error("Gamma pole in series term; use the reciprocal form");
      v *= gamma(z);
    } else {
      const bool odd = (g.constant().floor() % 2) != 0;
      v *= (odd ? -1.0 : 1.0) * rgamma(1.0 - z);
    }
  }
  if (!layout.base()) throw std::logic_error("closed-form term without a base");
  const auto &idx = layout.base()->indices();
  for (std::size_t j = 0; j < t.base_exponents.size(); ++j)
    v *= power_of_negated(a[static_cast<Eigen::Index>(idx[j])], t.base_exponents[j].evaluate<double>(s.binding()));
  return v;
}

} // namespace

SeriesValue evaluate_series(const GammaSeries &s, const Eigen::VectorXcd &a, GammaForm form)
{
  if (a.size() != static_cast<Eigen::Index>(s.layout().set().size()))
    throw std::invalid_argument("series evaluation needs one value per exponent");
  SeriesValue out{0.0, 0.0};
  Complex last = 0.0;
  for (const auto &t : s.terms()) {
    const Complex v = term_value(s, t, a, form);
    out.value += v;
    if (t.order() == s.order()) last += v;
  }
  out.tail = std::abs(last);
  return out;
}

SeriesValue evaluate_at_coefficients(const GammaSeries &s, const Eigen::VectorXcd &c, GammaForm form)
{
  if (c.size() != s.layout().center().size()) throw std::invalid_argument("coefficient vector length mismatch");
  return evaluate_series(s, c - s.layout().center(), form);
}

namespace {

// Grouping key for closed-form terms: Gamma factors whose arguments differ by
// an integer collapse onto one representative.
struct GroupKey
{
  std::vector<int> powers;
  std::vector<AffineForm> base_exponents;
  std::vector<AffineForm> gamma_classes;  // linear part with constant reduced mod 1

  friend bool operator<(const GroupKey &a, const GroupKey &b)
  {
    return std::tie(a.powers, a.base_exponents, a.gamma_classes) <
           std::tie(b.powers, b.base_exponents, b.gamma_classes);
  }
};

AffineForm reduce_mod_one(const AffineForm &g)
{
  return g - Rational(g.constant().floor());
}

} // namespace

GammaSeries apply_to_series(const DiffOperator &op, const GammaSeries &s)
{
  const auto &layout = s.layout();
  if (!(*op.space() == *layout.space())) throw std::invalid_argument("operator variables do not match the series");
  if (op.parameters() != layout.parameters()) throw std::invalid_argument("operator parameters do not match the series");
  const auto vars = static_cast<Eigen::Index>(layout.set().size());
  const int params = layout.parameters();

  std::vector<SeriesTerm> raw;
  int boundary_shift = 0;
  bool first_term = true;
  for (const auto &ot : op.terms()) {
    int series_degree = 0;
    for (Eigen::Index w = 0; w < vars; ++w) {
      const bool is_series = layout.series_position(static_cast<std::size_t>(w)) >= 0;
      if (ot.monomial[w] != 0 && layout.center()[w] != Complex(0.0))
        throw std::invalid_argument("multiplying by " + layout.space()->name(static_cast<int>(w)) +
                                    " needs a zero expansion center");
      if (is_series) series_degree += ot.monomial[w] - ot.derivative[w];
    }
    boundary_shift = first_term ? series_degree : std::min(boundary_shift, series_degree);
    first_term = false;

    for (const auto &src : s.terms()) {
      SeriesTerm t = src;
      bool vanished = false;
      for (Eigen::Index w = 0; w < vars && !vanished; ++w) {
        for (int d = 0; d < ot.derivative[w] && !vanished; ++d) {
          const int bp = layout.base_position(static_cast<std::size_t>(w));
          if (bp >= 0 && !t.from_oracle) {
            // d/da (-a)^e = -e (-a)^{e-1}
            AffineForm &e = t.base_exponents[static_cast<std::size_t>(bp)];
            t.prefactor *= -ParamPoly::from_affine(e);
            e = e - Rational(1);
          } else if (bp >= 0) {
            throw std::invalid_argument("cannot differentiate an oracle coefficient in " +
                                        layout.space()->name(static_cast<int>(w)));
          } else {
            if (t.powers[w] == 0) {
              vanished = true;
              break;
            }
            t.prefactor *= Rational(t.powers[w]);
            --t.powers[w];
          }
        }
      }
      if (vanished || t.prefactor.is_zero()) continue;
      for (Eigen::Index w = 0; w < vars; ++w) {
        if (ot.monomial[w] == 0) continue;
        const int bp = layout.base_position(static_cast<std::size_t>(w));
        if (bp >= 0 && !t.from_oracle) {
          // a = -(-a)
          AffineForm &e = t.base_exponents[static_cast<std::size_t>(bp)];
          e = e + Rational(ot.monomial[w]);
          if (ot.monomial[w] % 2) t.prefactor *= Rational(-1);
        } else {
          t.powers[w] += ot.monomial[w];
        }
      }
      t.prefactor = ot.scalar * t.prefactor;
      if (t.prefactor.is_zero()) continue;
      if (t.order() > s.order()) continue;
      raw.push_back(std::move(t));
    }
  }

  // Merge like terms exactly.
  std::map<GroupKey, std::vector<SeriesTerm>> closed;
  std::map<std::pair<std::vector<int>, std::vector<int>>, SeriesTerm> oracle_terms;
  for (auto &t : raw) {
    std::vector<int> powers(t.powers.data(), t.powers.data() + t.powers.size());
    if (t.from_oracle) {
      std::vector<int> m(t.m.data(), t.m.data() + t.m.size());
      auto [it, inserted] = oracle_terms.try_emplace({m, powers}, t);
      if (!inserted) it->second.prefactor += t.prefactor;
      continue;
    }
    GroupKey key{powers, t.base_exponents, {}};
    for (const auto &g : t.gamma_args) key.gamma_classes.push_back(reduce_mod_one(g));
    closed[key].push_back(std::move(t));
  }

  GammaSeries out(layout, s.order(), s.binding());
  if (s.oracle()) out.set_oracle(*s.oracle());
  for (auto &[key, group] : closed) {
    const std::size_t nargs = group.front().gamma_args.size();
    std::vector<AffineForm> lowest = group.front().gamma_args;
    for (const auto &t : group)
      for (std::size_t j = 0; j < nargs; ++j)
        if (t.gamma_args[j].constant() < lowest[j].constant()) lowest[j] = t.gamma_args[j];
    ParamPoly total(params);
    for (const auto &t : group) {
      ParamPoly p = t.prefactor;
      for (std::size_t j = 0; j < nargs; ++j) {
        const Rational k = t.gamma_args[j].constant() - lowest[j].constant();
        // Gamma(g + k) = Gamma(g) (g)_k
        p *= ParamPoly::pochhammer(lowest[j], static_cast<int>(k.num()));
      }
      total += p;
    }
    if (total.is_zero()) continue;
    SeriesTerm merged = group.front();
    merged.prefactor = total;
    merged.gamma_args = lowest;
    out.terms().push_back(std::move(merged));
  }
  for (auto &[key, t] : oracle_terms)
    if (!t.prefactor.is_zero()) out.terms().push_back(std::move(t));

  // report terms by order, then by the series part of their powers
  for (auto &t : out.terms()) {
    Eigen::VectorXi m(static_cast<Eigen::Index>(layout.series_indices().size()));
    for (std::size_t k = 0; k < layout.series_indices().size(); ++k)
      m[static_cast<Eigen::Index>(k)] = t.powers[static_cast<Eigen::Index>(layout.series_indices()[k])];
    if (!t.from_oracle) t.m = m;
  }
  std::stable_sort(out.terms().begin(), out.terms().end(), [](const SeriesTerm &a, const SeriesTerm &b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return lex_less(a.powers, b.powers);
  });
  out.refresh_poles();
  out.set_exact_through(op.is_zero() ? s.exact_through()
                                     : std::min(s.exact_through(), s.exact_through() + boundary_shift));
  return out;
}

} // namespace hypint
