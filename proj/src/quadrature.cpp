#include "hypint/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hypint {

ContourLeg ContourLeg::segment(Complex from, Complex to, int orientation)
{
  ContourLeg l;
  l.kind = Kind::Segment;
  l.a = from;
  l.b = to;
  l.orientation = orientation;
  l.validate();
  return l;
}

ContourLeg ContourLeg::ray(Complex origin, double angle, int orientation)
{
  ContourLeg l;
  l.kind = Kind::Ray;
  l.a = origin;
  l.angle = angle;
  l.orientation = orientation;
  l.validate();
  return l;
}

ContourLeg ContourLeg::arc(Complex center, double radius, double start, double span, int orientation)
{
  ContourLeg l;
  l.kind = Kind::Arc;
  l.a = center;
  l.radius = radius;
  l.start = start;
  l.span = span;
  l.orientation = orientation;
  l.validate();
  return l;
}

ContourLeg ContourLeg::line(double angle, Complex through, int orientation)
{
  ContourLeg l;
  l.kind = Kind::Line;
  l.a = through;
  l.angle = angle;
  l.orientation = orientation;
  l.validate();
  return l;
}

void ContourLeg::validate() const
{
  auto finite = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("leg orientation must be +1 or -1");
  if (!finite(a) || !finite(b) || !std::isfinite(angle) || !std::isfinite(radius) || !std::isfinite(start) ||
      !std::isfinite(span))
    throw std::invalid_argument("non-finite contour data");
  switch (kind) {
  case Kind::Segment:
    if (a == b) throw std::invalid_argument("segment endpoints coincide");
    break;
  case Kind::Arc:
    if (!(radius > 0.0)) throw std::invalid_argument("arc radius must be positive");
    if (span == 0.0) throw std::invalid_argument("arc span must be nonzero");
    break;
  default:
    break;
  }
}

namespace {

struct End
{
  bool infinite = true;
  Complex z;
};

std::pair<End, End> natural_ends(const ContourLeg &l)
{
  switch (l.kind) {
  case ContourLeg::Kind::Segment:
    return {{false, l.a}, {false, l.b}};
  case ContourLeg::Kind::Ray:
    return {{false, l.a}, {}};
  case ContourLeg::Kind::Arc:
    return {{false, l.a + l.radius * std::polar(1.0, l.start)}, {false, l.a + l.radius * std::polar(1.0, l.start + l.span)}};
  case ContourLeg::Kind::Line:
    return {{}, {}};
  }
  return {};
}

std::pair<End, End> oriented_ends(const ContourLeg &l)
{
  auto e = natural_ends(l);
  if (l.orientation < 0) std::swap(e.first, e.second);
  return e;
}

} // namespace

void ProductContour::validate() const
{
  if (chains.empty()) throw std::invalid_argument("contour has no chains");
  for (std::size_t c = 0; c < chains.size(); ++c) {
    const auto &chain = chains[c];
    if (chain.empty()) throw std::invalid_argument("chain " + std::to_string(c) + " is empty");
    for (const auto &leg : chain) leg.validate();
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
      const End end = oriented_ends(chain[i]).second;
      const End next = oriented_ends(chain[i + 1]).first;
      if (end.infinite || next.infinite)
        throw std::invalid_argument("chain " + std::to_string(c) + ": legs " + std::to_string(i) + " and " +
                                    std::to_string(i + 1) + " cannot join at infinity");
      if (std::abs(end.z - next.z) > 1e-9 * std::max(1.0, std::abs(end.z)))
        throw std::invalid_argument("chain " + std::to_string(c) + ": leg " + std::to_string(i + 1) +
                                    " does not start where leg " + std::to_string(i) + " ends");
    }
  }
}

template <typename Real>
void IntegrandSpec<Real>::validate() const
{
  const int n = dimension();
  if (alpha != Alpha::One && u.size() != n)
    throw std::invalid_argument("u has " + std::to_string(u.size()) + " entries, expected " + std::to_string(n));
  if (alpha == Alpha::PowerProduct) {
    if (static_cast<Eigen::Index>(factors.size()) != v.size())
      throw std::invalid_argument("number of factors does not match number of v parameters");
    for (const auto &f : factors)
      if (f.dimension() != n) throw std::invalid_argument("factor dimension does not match the kernel");
  }
}

template struct IntegrandSpec<double>;
template struct IntegrandSpec<long double>;

namespace {

struct GaussLegendre
{
  static constexpr int order = 15;
  std::array<long double, order> x{};
  std::array<long double, order> w{};
};

const GaussLegendre &gauss_legendre()
{
  static const GaussLegendre rule = [] {
    GaussLegendre g;
    constexpr int n = GaussLegendre::order;
    for (int i = 0; i < n; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
      long double dp = 0;
      for (int it = 0; it < 100; ++it) {
        long double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-19L) break;
      }
      g.x[static_cast<std::size_t>(i)] = x;
      g.w[static_cast<std::size_t>(i)] = 2 / ((1 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

template <typename Real>
using C = std::complex<Real>;

template <typename Real>
Real wrap_angle(Real d)
{
  constexpr Real pi = std::numbers::pi_v<Real>;
  d = std::remainder(d, 2 * pi);
  return d;
}

// Neumaier-compensated complex sum.
template <typename Real>
struct CompensatedSum
{
  C<Real> sum{0}, comp{0};
  void add(C<Real> x)
  {
    sum_part(sum, comp, x);
  }
  C<Real> value() const { return sum + comp; }

private:
  static void one(Real &s, Real &c, Real x)
  {
    const Real t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  static void sum_part(C<Real> &s, C<Real> &c, C<Real> x)
  {
    Real sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
    one(sr, cr, x.real());
    one(si, ci, x.imag());
    s = {sr, si};
    c = {cr, ci};
  }
};

/// A parametrised piece of a chain: segment z = origin + s*dir (s in [0,1]),
/// ray z = origin + s*dir (s in [0, S]), or arc.
template <typename Real>
struct Piece
{
  ContourLeg::Kind kind = ContourLeg::Kind::Segment;
  C<Real> origin{}, dir{};
  Real radius = 0, start = 0, span = 0;
  Real s1 = 1;     // upper parameter bound (rays: set by truncation)
  int sign = 1;    // +1 traversed with increasing s
  bool unbounded = false;
  std::string label;

  C<Real> point(Real s) const
  {
    if (kind == ContourLeg::Kind::Arc) return origin + radius * std::polar(Real(1), start + s * span);
    return origin + s * dir;
  }
  C<Real> tangent(Real s) const
  {
    if (kind == ContourLeg::Kind::Arc) return C<Real>(0, 1) * span * radius * std::polar(Real(1), start + s * span);
    return dir;
  }
};

template <typename Real>
std::vector<Piece<Real>> expand_chain(const ContourChain &chain, int chain_index)
{
  std::vector<Piece<Real>> out;
  for (std::size_t li = 0; li < chain.size(); ++li) {
    const ContourLeg &l = chain[li];
    const std::string label = "chain " + std::to_string(chain_index) + " leg " + std::to_string(li);
    auto ray_piece = [&](Real angle, int sign) {
      Piece<Real> p;
      p.kind = ContourLeg::Kind::Ray;
      p.origin = C<Real>(l.a);
      p.dir = std::polar(Real(1), angle);
      p.sign = sign;
      p.unbounded = true;
      p.label = label;
      return p;
    };
    std::vector<Piece<Real>> pieces;
    switch (l.kind) {
    case ContourLeg::Kind::Segment: {
      Piece<Real> p;
      p.kind = ContourLeg::Kind::Segment;
      p.origin = C<Real>(l.a);
      p.dir = C<Real>(l.b) - C<Real>(l.a);
      p.label = label;
      pieces.push_back(p);
      break;
    }
    case ContourLeg::Kind::Ray:
      pieces.push_back(ray_piece(static_cast<Real>(l.angle), 1));
      break;
    case ContourLeg::Kind::Arc: {
      Piece<Real> p;
      p.kind = ContourLeg::Kind::Arc;
      p.origin = C<Real>(l.a);
      p.dir = C<Real>(0);
      p.radius = static_cast<Real>(l.radius);
      p.start = static_cast<Real>(l.start);
      p.span = static_cast<Real>(l.span);
      p.label = label;
      pieces.push_back(p);
      break;
    }
    case ContourLeg::Kind::Line:
      pieces.push_back(ray_piece(static_cast<Real>(l.angle) + std::numbers::pi_v<Real>, -1));
      pieces.push_back(ray_piece(static_cast<Real>(l.angle), 1));
      break;
    }
    if (l.orientation < 0) {
      std::reverse(pieces.begin(), pieces.end());
      for (auto &p : pieces) p.sign = -p.sign;
    }
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

// Anchor parameter on the first piece: 1/8 in from its finite end.
template <typename Real>
Real anchor_parameter(const Piece<Real> &p)
{
  if (p.unbounded) return Real(0.125);
  return p.sign > 0 ? Real(0.125) : Real(0.875);
}

template <typename Real>
struct Factor
{
  SparsePolynomial<C<Real>> q;
  C<Real> rho;
  bool integer = false;
  int power = 0;
  int branch_slot = 0;
  std::vector<bool> depends;
};

template <typename Real>
struct LevelResult
{
  C<Real> value{0};
  Real error = 0;
};

template <typename Real>
struct SkeletonSample
{
  Real s;
  Real principal;
  Real arg;
};

template <typename Real>
class Integrator
{
public:
  Integrator(const IntegrandSpec<Real> &spec, const ProductContour &contour, const QuadratureOptions &opts)
      : spec_(spec), opts_(opts), n_(spec.dimension())
  {
    contour.validate();
    spec.validate();
    if (contour.dimension() != n_)
      throw std::invalid_argument("contour has " + std::to_string(contour.dimension()) + " chains, integrand has " +
                                  std::to_string(n_) + " variables");
    if (n_ > 3) throw std::invalid_argument("quadrature supports at most 3 variables");
    for (int d = 0; d < n_; ++d) chains_.push_back(expand_chain<Real>(contour.chains[static_cast<std::size_t>(d)], d));

    const Real tol = 0;
    auto add_factor = [&](SparsePolynomial<C<Real>> q, C<Real> rho, int slot) {
      Factor<Real> f;
      f.q = std::move(q);
      f.rho = rho;
      f.branch_slot = slot;
      const Real r = std::round(rho.real());
      f.integer = rho.imag() == 0 && std::abs(rho.real() - r) <= tol;
      f.power = static_cast<int>(r);
      if (f.integer && f.power == 0) return;
      f.depends.assign(static_cast<std::size_t>(n_), false);
      for (const auto &[w, c] : f.q.terms())
        for (int d = 0; d < n_; ++d)
          if (w[d] != 0) f.depends[static_cast<std::size_t>(d)] = true;
      factors_.push_back(std::move(f));
    };
    if (spec.alpha != IntegrandSpec<Real>::Alpha::One) {
      for (int j = 0; j < n_; ++j) {
        ExponentVector e = ExponentVector::Zero(n_);
        e[j] = 1;
        SparsePolynomial<C<Real>> tj(n_);
        tj.add(e, C<Real>(1));
        add_factor(std::move(tj), spec.u[j] - Real(1), j);
      }
    }
    if (spec.alpha == IntegrandSpec<Real>::Alpha::PowerProduct)
      for (std::size_t i = 0; i < spec.factors.size(); ++i)
        add_factor(spec.factors[i], spec.v[static_cast<Eigen::Index>(i)], n_ + static_cast<int>(i));

    anchors_.resize(n_);
    for (int d = 0; d < n_; ++d) {
      const auto &p = chains_[static_cast<std::size_t>(d)].front();
      anchors_[d] = p.point(anchor_parameter(p));
    }

    check_endpoints();

    args0_.assign(factors_.size(), 0);
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      const auto &f = factors_[k];
      if (f.integer) continue;
      const auto slot = static_cast<std::size_t>(f.branch_slot);
      if (slot < contour.branch.size() && contour.branch[slot])
        args0_[k] = static_cast<Real>(*contour.branch[slot]);
      else
        args0_[k] = std::arg(normalized(evaluate(f.q, anchors_)));
    }
  }

  QuadratureResult<Real> run()
  {
    ComplexVector<Real> point = anchors_;
    const LevelResult<Real> r = level(0, point, args0_);
    QuadratureResult<Real> out{r.value, r.error, evaluations_};
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()))
      throw NumericError("integral is not finite (integrand overflow or non-integrable singularity)");
    const Real target = std::max(static_cast<Real>(opts_.rel_tol) * std::abs(r.value), static_cast<Real>(opts_.abs_floor));
    if (!(r.error <= target) || failed_) {
      std::ostringstream os;
      os << "quadrature tolerance not met: error estimate " << static_cast<double>(r.error) << " for value magnitude "
         << static_cast<double>(std::abs(r.value));
      if (!failure_where_.empty()) os << " (" << failure_where_ << ")";
      throw AccuracyError(os.str(), Complex(static_cast<double>(r.value.real()), static_cast<double>(r.value.imag())),
                          static_cast<double>(r.error));
    }
    return out;
  }

private:
  static C<Real> normalized(C<Real> z)
  {
    if (z.imag() == 0) z.imag(Real(0));
    return z;
  }

  void check_endpoints()
  {
    for (int d = 0; d < n_; ++d) {
      const auto &pieces = chains_[static_cast<std::size_t>(d)];
      std::vector<C<Real>> ends;
      const auto &first = pieces.front();
      if (!first.unbounded || first.sign > 0) ends.push_back(first.point(first.sign > 0 ? Real(0) : first.s1));
      const auto &last = pieces.back();
      if (!last.unbounded || last.sign < 0) ends.push_back(last.point(last.sign > 0 ? last.s1 : Real(0)));
      for (const auto &z : ends) {
        ComplexVector<Real> pt = anchors_;
        pt[d] = z;
        for (const auto &f : factors_) {
          if (!f.depends[static_cast<std::size_t>(d)] || f.rho.real() > -1) continue;
          const Real mag = std::abs(evaluate(f.q, pt));
          if (mag < Real(1e-12))
            throw DivergenceError("non-integrable endpoint singularity on chain " + std::to_string(d) +
                                  ": a factor vanishes with exponent real part <= -1");
        }
      }
    }
  }

  // log|integrand| on principal branches; used for truncation only.
  Real log_magnitude(const ComplexVector<Real> &pt) const
  {
    Real lm = spec_.kernel.is_zero() ? Real(0) : evaluate(spec_.kernel, pt).real();
    for (const auto &f : factors_) {
      const C<Real> q = normalized(evaluate(f.q, pt));
      if (q == C<Real>(0)) return f.rho.real() > 0 ? -std::numeric_limits<Real>::infinity()
                                                   : std::numeric_limits<Real>::infinity();
      lm += (f.rho * std::log(q)).real();
    }
    return lm;
  }

  C<Real> integrand(const ComplexVector<Real> &pt, const std::vector<Real> &args)
  {
    ++evaluations_;
    C<Real> exponent = spec_.kernel.is_zero() ? C<Real>(0) : evaluate(spec_.kernel, pt);
    C<Real> mult(1);
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      const auto &f = factors_[k];
      const C<Real> q = evaluate(f.q, pt);
      if (f.integer) {
        C<Real> pw(1);
        for (int i = 0; i < std::abs(f.power); ++i) pw *= q;
        mult *= f.power >= 0 ? pw : C<Real>(1) / pw;
      } else {
        if (q == C<Real>(0)) {
          if (f.rho.real() > 0) return C<Real>(0);
          return C<Real>(std::numeric_limits<Real>::infinity());
        }
        exponent += f.rho * C<Real>(std::log(std::abs(q)), args[k]);
      }
    }
    return std::exp(exponent) * mult;
  }

  // Truncates unbounded pieces of chain d and returns initial breakpoints per piece.
  std::vector<std::vector<Real>> truncate(int d, std::vector<Piece<Real>> &pieces, ComplexVector<Real> &pt) const
  {
    std::vector<std::vector<Real>> breaks(pieces.size());
    const Real log_cut = std::log(static_cast<Real>(opts_.tail_cutoff));
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto &p = pieces[i];
      if (!p.unbounded) {
        breaks[i] = {Real(0), Real(0.5), Real(1)};
        continue;
      }
      breaks[i].push_back(0);
      Real lmax = -std::numeric_limits<Real>::infinity();
      Real s = Real(1) / 16;
      for (;;) {
        pt[d] = p.point(s);
        const Real lm = log_magnitude(pt);
        const Real re_p = spec_.kernel.is_zero() ? Real(0) : evaluate(spec_.kernel, pt).real();
        if (std::isfinite(lm)) lmax = std::max(lmax, lm);
        breaks[i].push_back(s);
        if (lm < lmax + log_cut && re_p < static_cast<Real>(opts_.decay_level)) break;
        s *= Real(1.25);
        if (s > Real(1e8))
          throw DivergenceError(p.label + ": integrand does not decay (Re P never falls below " +
                                std::to_string(opts_.decay_level) + ")");
      }
      p.s1 = s;
    }
    return breaks;
  }

  // Argument skeletons of the factors that depend on t_d, per piece.
  std::vector<std::vector<std::vector<SkeletonSample<Real>>>>
  skeleton(int d, const std::vector<Piece<Real>> &pieces, const std::vector<std::vector<Real>> &breaks,
           ComplexVector<Real> &pt, const std::vector<Real> &args_in, const std::vector<std::size_t> &active) const
  {
    constexpr Real pi = std::numbers::pi_v<Real>;
    const std::size_t np = pieces.size();
    std::vector<std::vector<std::vector<SkeletonSample<Real>>>> out(active.size(),
                                                                    std::vector<std::vector<SkeletonSample<Real>>>(np));
    if (active.empty()) return out;

    // sample parameters per piece
    struct Sample
    {
      Real s;
      std::vector<C<Real>> q;
    };
    auto eval_q = [&](const Piece<Real> &p, Real s) {
      pt[d] = p.point(s);
      std::vector<C<Real>> qs;
      for (auto k : active) qs.push_back(normalized(evaluate(factors_[k].q, pt)));
      return qs;
    };
    std::vector<std::vector<Sample>> samples(np);
    const Real a0 = anchor_parameter(pieces.front());
    for (std::size_t i = 0; i < np; ++i) {
      const auto &p = pieces[i];
      std::vector<Real> ss = breaks[i];
      constexpr int uniform = 32;
      for (int j = 0; j <= uniform; ++j) ss.push_back(p.s1 * j / uniform);
      if (i == 0) ss.push_back(a0);
      std::sort(ss.begin(), ss.end());
      ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
      for (Real s : ss) samples[i].push_back({s, eval_q(p, s)});
      // refine where the argument jumps
      for (int pass = 0; pass < 16; ++pass) {
        bool changed = false;
        std::vector<Sample> next;
        for (std::size_t j = 0; j < samples[i].size(); ++j) {
          next.push_back(samples[i][j]);
          if (j + 1 == samples[i].size()) break;
          const auto &x = samples[i][j], &y = samples[i][j + 1];
          bool jump = false;
          for (std::size_t k = 0; k < active.size(); ++k)
            if (x.q[k] != C<Real>(0) && y.q[k] != C<Real>(0) &&
                std::abs(wrap_angle(std::arg(y.q[k]) - std::arg(x.q[k]))) > pi / 4)
              jump = true;
          if (jump && (y.s - x.s) > Real(1e-12) * std::max(Real(1), std::abs(y.s))) {
            const Real mid = (x.s + y.s) / 2;
            next.push_back({mid, eval_q(p, mid)});
            changed = true;
          }
        }
        samples[i] = std::move(next);
        if (!changed) break;
      }
    }

    // traversal order and chain ends
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (piece, sample)
    for (std::size_t i = 0; i < np; ++i) {
      const auto &p = pieces[i];
      const std::size_t m = samples[i].size();
      for (std::size_t j = 0; j < m; ++j) order.emplace_back(i, p.sign > 0 ? j : m - 1 - j);
    }

    for (std::size_t k = 0; k < active.size(); ++k) {
      Real scale = 0;
      for (const auto &ps : samples)
        for (const auto &smp : ps) scale = std::max(scale, std::abs(smp.q[k]));
      const Real tiny = Real(1e-12) * std::max(Real(1), scale);
      std::vector<Real> unwrapped(order.size(), std::numeric_limits<Real>::quiet_NaN());
      bool have_prev = false;
      Real prev_principal = 0, prev_unwrapped = 0;
      for (std::size_t o = 0; o < order.size(); ++o) {
        const auto [i, j] = order[o];
        const C<Real> q = samples[i][j].q[k];
        if (std::abs(q) <= tiny) {
          if (o == 0 || o + 1 == order.size()) continue;  // chain ends may sit on a branch point
          throw BranchError(pieces[i].label + ": a multivalued factor vanishes on the contour");
        }
        const Real pa = std::arg(q);
        prev_unwrapped = have_prev ? prev_unwrapped + wrap_angle(pa - prev_principal) : pa;
        prev_principal = pa;
        have_prev = true;
        unwrapped[o] = prev_unwrapped;
      }
      // shift so the anchor sample carries the incoming argument
      Real shift = 0;
      for (std::size_t o = 0; o < order.size(); ++o) {
        const auto [i, j] = order[o];
        if (i == 0 && samples[i][j].s == a0) {
          shift = args_in[active[k]] - unwrapped[o];
          break;
        }
      }
      for (std::size_t o = 0; o < order.size(); ++o) {
        const auto [i, j] = order[o];
        if (std::isnan(unwrapped[o])) continue;
        out[k][i].push_back({samples[i][j].s, std::arg(samples[i][j].q[k]), unwrapped[o] + shift});
      }
      for (auto &ps : out[k])
        std::sort(ps.begin(), ps.end(), [](const auto &x, const auto &y) { return x.s < y.s; });
    }
    return out;
  }

  LevelResult<Real> level(int d, ComplexVector<Real> &pt, const std::vector<Real> &args_in)
  {
    auto pieces = chains_[static_cast<std::size_t>(d)];
    const auto breaks = truncate(d, pieces, pt);

    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < factors_.size(); ++k)
      if (!factors_[k].integer && factors_[k].depends[static_cast<std::size_t>(d)]) active.push_back(k);
    const auto skel = skeleton(d, pieces, breaks, pt, args_in, active);

    LevelResult<Real> total;
    CompensatedSum<Real> sum;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto &p = pieces[i];
      auto g = [&](Real s) -> std::pair<C<Real>, Real> {
        pt[d] = p.point(s);
        std::vector<Real> args = args_in;
        for (std::size_t k = 0; k < active.size(); ++k) {
          const auto &sk = skel[k][i];
          if (sk.empty()) throw BranchError(p.label + ": no usable branch samples");
          auto it = std::lower_bound(sk.begin(), sk.end(), s, [](const auto &x, Real v) { return x.s < v; });
          if (it == sk.end() || (it != sk.begin() && std::abs((it - 1)->s - s) < std::abs(it->s - s))) --it;
          const C<Real> q = normalized(evaluate(factors_[active[k]].q, pt));
          args[active[k]] = it->arg + wrap_angle(std::arg(q) - it->principal);
        }
        const C<Real> dz = p.tangent(s);
        if (d + 1 == n_) return {integrand(pt, args) * dz, Real(0)};
        ComplexVector<Real> inner = pt;
        const auto r = level(d + 1, inner, args);
        return {r.value * dz, r.error * std::abs(dz)};
      };
      // The end intervals of each piece go through s = a + w x^2 (3 - 2x), which
      // turns algebraic endpoint singularities s^rho into x^{2 rho + 1}.
      const auto &br = breaks[i];
      auto smoothed = [&](Real x) -> std::pair<C<Real>, Real> {
        const std::size_t last = br.size() - 2;
        std::size_t j = static_cast<std::size_t>(std::upper_bound(br.begin(), br.end(), x) - br.begin());
        j = std::min(last, j == 0 ? 0 : j - 1);
        if (j != 0 && j != last) return g(x);
        const Real a = br[j], w = br[j + 1] - a, tau = (x - a) / w;
        const Real jac = 6 * tau * (1 - tau);
        if (jac == 0) return {C<Real>(0), Real(0)};
        const auto [v, e] = g(a + w * tau * tau * (3 - 2 * tau));
        return {v * jac, e * jac};
      };
      const auto r = adaptive(smoothed, br, p.label);
      sum.add(static_cast<Real>(p.sign) * r.value);
      total.error += r.error;
    }
    total.value = sum.value();
    pt[d] = anchors_[d];
    return total;
  }

  template <typename G>
  LevelResult<Real> adaptive(G &g, const std::vector<Real> &breaks, const std::string &label)
  {
    const auto &rule = gauss_legendre();
    struct Interval
    {
      Real a, b;
      C<Real> whole, left, right;
      Real disc, inner;
    };
    auto gl = [&](Real a, Real b, Real &inner) {
      const Real half = (b - a) / 2, mid = (a + b) / 2;
      C<Real> s(0);
      for (int i = 0; i < GaussLegendre::order; ++i) {
        const auto [v, e] = g(mid + half * static_cast<Real>(rule.x[static_cast<std::size_t>(i)]));
        const Real w = static_cast<Real>(rule.w[static_cast<std::size_t>(i)]);
        s += w * v;
        inner += w * e;
      }
      inner *= std::abs(half);
      return s * half;
    };
    auto make = [&](Real a, Real b, C<Real> whole) {
      Interval iv{a, b, whole, 0, 0, 0, 0};
      const Real mid = (a + b) / 2;
      Real el = 0, er = 0;
      iv.left = gl(a, mid, el);
      iv.right = gl(mid, b, er);
      iv.disc = std::abs(whole - iv.left - iv.right);
      iv.inner = el + er;
      return iv;
    };
    auto by_error = [](const Interval &x, const Interval &y) { return x.disc < y.disc; };

    std::vector<Interval> heap;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      if (!(breaks[i + 1] > breaks[i])) continue;
      Real dummy = 0;
      const C<Real> whole = gl(breaks[i], breaks[i + 1], dummy);
      heap.push_back(make(breaks[i], breaks[i + 1], whole));
    }
    std::make_heap(heap.begin(), heap.end(), by_error);
    std::vector<Interval> settled;  // too narrow to split further

    auto totals = [&](C<Real> &value, Real &disc, Real &inner) {
      CompensatedSum<Real> s;
      disc = 0;
      inner = 0;
      for (const auto *list : {&heap, &settled})
        for (const auto &iv : *list) {
          s.add(iv.left);
          s.add(iv.right);
          disc += iv.disc;
          inner += iv.inner;
        }
      value = s.value();
    };

    C<Real> value;
    Real disc = 0, inner = 0;
    totals(value, disc, inner);
    const Real rel = static_cast<Real>(opts_.rel_tol), floor = static_cast<Real>(opts_.abs_floor);
    while (!heap.empty()) {
      if (disc <= std::max(rel * std::abs(value), floor)) break;
      if (static_cast<int>(heap.size() + settled.size()) >= opts_.max_intervals) {
        failed_ = true;
        if (failure_where_.empty()) failure_where_ = label + " reached the interval limit";
        break;
      }
      std::pop_heap(heap.begin(), heap.end(), by_error);
      Interval worst = heap.back();
      heap.pop_back();
      const Real mid = (worst.a + worst.b) / 2;
      if (!(mid > worst.a && mid < worst.b) ||
          (worst.b - worst.a) < 64 * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(mid))) {
        settled.push_back(worst);
      } else {
        heap.push_back(make(worst.a, mid, worst.left));
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(make(mid, worst.b, worst.right));
        std::push_heap(heap.begin(), heap.end(), by_error);
      }
      totals(value, disc, inner);
    }
    totals(value, disc, inner);
    return {value, disc + inner};
  }

  const IntegrandSpec<Real> &spec_;
  QuadratureOptions opts_;
  int n_;
  std::vector<std::vector<Piece<Real>>> chains_;
  std::vector<Factor<Real>> factors_;
  ComplexVector<Real> anchors_;
  std::vector<Real> args0_;
  long evaluations_ = 0;
  bool failed_ = false;
  std::string failure_where_;
};

} // namespace

template <typename Real>
QuadratureResult<Real> integrate(const IntegrandSpec<Real> &spec, const ProductContour &contour,
                                 const QuadratureOptions &options)
{
  Integrator<Real> integrator(spec, contour, options);
  return integrator.run();
}

template QuadratureResult<double> integrate(const IntegrandSpec<double> &, const ProductContour &,
                                            const QuadratureOptions &);
template QuadratureResult<long double> integrate(const IntegrandSpec<long double> &, const ProductContour &,
                                                 const QuadratureOptions &);

QuadratureResult<double> proper_integral(const Polynomial &p, const ProductContour &contour,
                                         const QuadratureOptions &options)
{
  return integrate(IntegrandSpec<double>(p), contour, options);
}

QuadratureResult<double> gg_eval(const ExponentSet &set, const Eigen::VectorXcd &c, const Eigen::VectorXcd &u,
                                 const ProductContour &contour, const QuadratureOptions &options)
{
  IntegrandSpec<double> spec(Polynomial::from_coefficients(set, std::span<const Complex>(c.data(), c.size())));
  spec.alpha = IntegrandSpec<double>::Alpha::Monomial;
  spec.u = u;
  return integrate(spec, contour, options);
}

QuadratureResult<double> euler_integral_eval(const std::vector<Polynomial> &factors, const Eigen::VectorXcd &v,
                                             const Eigen::VectorXcd &u, const ProductContour &contour,
                                             const QuadratureOptions &options)
{
  if (factors.empty()) throw std::invalid_argument("Euler integral needs at least one factor");
  IntegrandSpec<double> spec{Polynomial(factors.front().dimension())};
  spec.alpha = IntegrandSpec<double>::Alpha::PowerProduct;
  spec.u = u;
  spec.v = v;
  spec.factors = factors;
  return integrate(spec, contour, options);
}

} // namespace hypint
