#include "hypint/cli_io.hpp"

#include "hypint/gamma.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hypint {

namespace {

[[noreturn]] void field_error(const std::string &where, const std::string &what)
{
  throw std::invalid_argument("problem field " + (where.empty() ? std::string("/") : where) + ": " + what);
}

const Json &require(const Json &j, const char *key, const std::string &where)
{
  if (!j.is_object()) field_error(where, "expected an object");
  if (!j.contains(key)) field_error(where + "/" + key, "missing");
  return j.at(key);
}

double number(const Json &j, const std::string &where)
{
  if (!j.is_number()) field_error(where, "expected a number");
  return j.get<double>();
}

int integer(const Json &j, const std::string &where)
{
  if (!j.is_number_integer()) field_error(where, "expected an integer");
  return j.get<int>();
}

std::vector<Complex> complex_list(const Json &j, const std::string &where)
{
  if (!j.is_array()) field_error(where, "expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_complex(j[i], where + "/" + std::to_string(i)));
  return out;
}

Json complex_list_json(const std::vector<Complex> &zs)
{
  Json a = Json::array();
  for (const auto &z : zs) a.push_back(complex_json(z));
  return a;
}

Eigen::VectorXcd to_vector(const std::vector<Complex> &zs)
{
  Eigen::VectorXcd v(static_cast<Eigen::Index>(zs.size()));
  for (std::size_t i = 0; i < zs.size(); ++i) v[static_cast<Eigen::Index>(i)] = zs[i];
  return v;
}

ContourLeg parse_leg(const Json &j, const std::string &where)
{
  if (!j.is_object()) field_error(where, "expected a leg object");
  const Json &kind = require(j, "kind", where);
  if (!kind.is_string()) field_error(where + "/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  int orientation = 1;
  if (j.contains("orientation")) orientation = integer(j.at("orientation"), where + "/orientation");
  try {
    if (k == "segment")
      return ContourLeg::segment(parse_complex(require(j, "from", where), where + "/from"),
                                 parse_complex(require(j, "to", where), where + "/to"), orientation);
    if (k == "ray") {
      const Complex origin = j.contains("origin") ? parse_complex(j.at("origin"), where + "/origin") : Complex(0.0);
      return ContourLeg::ray(origin, number(require(j, "angle", where), where + "/angle"), orientation);
    }
    if (k == "arc")
      return ContourLeg::arc(parse_complex(require(j, "center", where), where + "/center"),
                             number(require(j, "radius", where), where + "/radius"),
                             number(require(j, "start", where), where + "/start"),
                             number(require(j, "span", where), where + "/span"), orientation);
    if (k == "line") {
      const Complex through = j.contains("through") ? parse_complex(j.at("through"), where + "/through") : Complex(0.0);
      return ContourLeg::line(number(require(j, "angle", where), where + "/angle"), through, orientation);
    }
  } catch (const std::invalid_argument &e) {
    const std::string msg = e.what();
    if (msg.rfind("problem field", 0) == 0) throw;
    field_error(where, msg);
  }
  field_error(where + "/kind", "unknown leg kind \"" + k + "\" (segment, ray, arc, line)");
}

Json leg_json(const ContourLeg &l)
{
  Json j;
  switch (l.kind) {
  case ContourLeg::Kind::Segment:
    j["kind"] = "segment";
    j["from"] = complex_json(l.a);
    j["to"] = complex_json(l.b);
    break;
  case ContourLeg::Kind::Ray:
    j["kind"] = "ray";
    j["origin"] = complex_json(l.a);
    j["angle"] = l.angle;
    break;
  case ContourLeg::Kind::Arc:
    j["kind"] = "arc";
    j["center"] = complex_json(l.a);
    j["radius"] = l.radius;
    j["start"] = l.start;
    j["span"] = l.span;
    break;
  case ContourLeg::Kind::Line:
    j["kind"] = "line";
    j["through"] = complex_json(l.a);
    j["angle"] = l.angle;
    break;
  }
  j["orientation"] = l.orientation;
  return j;
}

Json operator_json(const DiffOperator &op)
{
  const std::vector<std::string> names = op.space()->parameters().names();
  Json terms = Json::array();
  for (const auto &t : op.terms()) {
    Json tj;
    tj["scalar"] = t.scalar.str(names);
    tj["monomial"] = std::vector<int>(t.monomial.data(), t.monomial.data() + t.monomial.size());
    tj["derivative"] = std::vector<int>(t.derivative.data(), t.derivative.data() + t.derivative.size());
    terms.push_back(tj);
  }
  Json j;
  j["text"] = op.str();
  j["order"] = op.order();
  j["terms"] = terms;
  return j;
}

std::string format_complex(Complex z)
{
  std::ostringstream os;
  os.precision(15);
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

ProductContour require_contour(const ProblemFile &p)
{
  if (!p.contour || p.contour->chains.empty()) throw std::invalid_argument("problem has no contour");
  if (p.contour->dimension() != p.dimension)
    throw std::invalid_argument("contour has " + std::to_string(p.contour->dimension()) + " chains, expected " +
                                std::to_string(p.dimension));
  return *p.contour;
}

void require_coefficients(const ProblemFile &p)
{
  if (p.coefficients.empty()) throw std::invalid_argument("problem has no coefficients");
}

void require_u(const ProblemFile &p)
{
  if (static_cast<int>(p.u.size()) != p.dimension)
    throw std::invalid_argument("u must have " + std::to_string(p.dimension) + " entries");
  if (static_cast<int>(p.v.size()) != p.blocks)
    throw std::invalid_argument("v must have " + std::to_string(p.blocks) + " entries");
}

QuadratureOptions quad_options(const ProblemFile &p)
{
  QuadratureOptions q;
  q.rel_tol = p.tolerances.quadrature;
  return q;
}

} // namespace

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex parse_complex(const Json &j, const std::string &where)
{
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    field_error(where, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json contour_json(const ProductContour &c)
{
  Json chains = Json::array();
  for (const auto &chain : c.chains) {
    Json legs = Json::array();
    for (const auto &l : chain) legs.push_back(leg_json(l));
    chains.push_back(legs);
  }
  return chains;
}

ProductContour parse_contour(const Json &j, const std::string &where)
{
  if (!j.is_array()) field_error(where, "expected an array of leg chains, one per variable");
  ProductContour c;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].empty()) field_error(w, "expected a non-empty array of legs");
    ContourChain chain;
    for (std::size_t l = 0; l < j[i].size(); ++l) chain.push_back(parse_leg(j[i][l], w + "/" + std::to_string(l)));
    c.chains.push_back(std::move(chain));
  }
  try {
    c.validate();
  } catch (const std::invalid_argument &e) {
    field_error(where, e.what());
  }
  return c;
}

ProblemFile parse_problem(const Json &j)
{
  if (!j.is_object()) field_error("", "expected a JSON object");
  ProblemFile p;
  if (j.contains("schema")) {
    p.schema = integer(j.at("schema"), "/schema");
    if (p.schema != 1) field_error("/schema", "unsupported schema version " + std::to_string(p.schema));
  }
  p.dimension = integer(require(j, "dimension", ""), "/dimension");
  if (p.dimension < 1 || p.dimension > 3) field_error("/dimension", "must be 1, 2 or 3");
  if (j.contains("blocks")) p.blocks = integer(j.at("blocks"), "/blocks");
  if (p.blocks < 0) field_error("/blocks", "must be non-negative");

  const Json &ex = require(j, "exponents", "");
  if (!ex.is_array()) field_error("/exponents", "expected an array of exponent sets");
  const std::size_t sets = p.blocks == 0 ? 1 : static_cast<std::size_t>(p.blocks);
  if (ex.size() != sets) field_error("/exponents", "expected " + std::to_string(sets) + " exponent set(s)");
  for (std::size_t s = 0; s < ex.size(); ++s) {
    const std::string w = "/exponents/" + std::to_string(s);
    if (!ex[s].is_array()) field_error(w, "expected an array of integer vectors");
    std::vector<ExponentVector> members;
    for (std::size_t m = 0; m < ex[s].size(); ++m) {
      const std::string wm = w + "/" + std::to_string(m);
      const Json &e = ex[s][m];
      if (!e.is_array() || static_cast<int>(e.size()) != p.dimension)
        field_error(wm, "expected " + std::to_string(p.dimension) + " integers");
      ExponentVector v(p.dimension);
      for (int d = 0; d < p.dimension; ++d) v[d] = integer(e[static_cast<std::size_t>(d)], wm + "/" + std::to_string(d));
      members.push_back(v);
    }
    try {
      p.exponents.emplace_back(p.dimension, std::move(members));
    } catch (const std::invalid_argument &e) {
      field_error(w, e.what());
    }
  }

  if (j.contains("coefficients")) {
    const Json &co = j.at("coefficients");
    if (!co.is_array() || co.size() != sets)
      field_error("/coefficients", "expected " + std::to_string(sets) + " coefficient list(s)");
    for (std::size_t s = 0; s < sets; ++s) {
      const std::string w = "/coefficients/" + std::to_string(s);
      auto list = complex_list(co[s], w);
      if (list.size() != p.exponents[s].size())
        field_error(w, "expected " + std::to_string(p.exponents[s].size()) + " coefficients, one per exponent");
      p.coefficients.push_back(std::move(list));
    }
  }
  if (j.contains("u")) p.u = complex_list(j.at("u"), "/u");
  if (j.contains("v")) p.v = complex_list(j.at("v"), "/v");
  if (!p.u.empty() && static_cast<int>(p.u.size()) != p.dimension)
    field_error("/u", "expected " + std::to_string(p.dimension) + " entries");
  if (static_cast<int>(p.v.size()) != p.blocks && !(p.v.empty() && p.blocks == 0))
    field_error("/v", "expected " + std::to_string(p.blocks) + " entries");
  if (j.contains("euler_u")) {
    p.euler_u = complex_list(j.at("euler_u"), "/euler_u");
    if (static_cast<int>(p.euler_u->size()) != p.dimension)
      field_error("/euler_u", "expected " + std::to_string(p.dimension) + " entries");
  }
  if (j.contains("euler_v")) {
    p.euler_v = complex_list(j.at("euler_v"), "/euler_v");
    if (static_cast<int>(p.euler_v->size()) != p.blocks)
      field_error("/euler_v", "expected " + std::to_string(p.blocks) + " entries");
  }
  if (j.contains("base")) {
    const Json &b = j.at("base");
    if (!b.is_array()) field_error("/base", "expected an array of member indices");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const int k = integer(b[i], "/base/" + std::to_string(i));
      if (k < 0) field_error("/base/" + std::to_string(i), "must be non-negative");
      idx.push_back(static_cast<std::size_t>(k));
    }
    p.base = idx;
  }
  if (j.contains("contour")) {
    p.contour = parse_contour(j.at("contour"), "/contour");
    if (p.contour->dimension() != p.dimension)
      field_error("/contour", "expected " + std::to_string(p.dimension) + " chains, one per variable");
    if (j.contains("branch")) {
      const Json &br = j.at("branch");
      if (!br.is_array()) field_error("/branch", "expected an array of arguments or nulls");
      for (std::size_t i = 0; i < br.size(); ++i) {
        if (br[i].is_null())
          p.contour->branch.emplace_back(std::nullopt);
        else
          p.contour->branch.emplace_back(number(br[i], "/branch/" + std::to_string(i)));
      }
    }
  } else if (j.contains("branch")) {
    field_error("/branch", "branch data without a contour");
  }
  if (j.contains("order")) {
    p.order = integer(j.at("order"), "/order");
    if (p.order < 0) field_error("/order", "must be non-negative");
  }
  if (j.contains("tolerances")) {
    const Json &t = j.at("tolerances");
    if (!t.is_object()) field_error("/tolerances", "expected an object");
    if (t.contains("quadrature")) p.tolerances.quadrature = number(t.at("quadrature"), "/tolerances/quadrature");
    if (t.contains("residual")) p.tolerances.residual = number(t.at("residual"), "/tolerances/residual");
    if (t.contains("step")) p.tolerances.step = number(t.at("step"), "/tolerances/step");
    if (t.contains("richardson")) {
      if (!t.at("richardson").is_boolean()) field_error("/tolerances/richardson", "expected true or false");
      p.tolerances.richardson = t.at("richardson").get<bool>();
    }
    if (!(p.tolerances.quadrature > 0)) field_error("/tolerances/quadrature", "must be positive");
    if (!(p.tolerances.residual > 0)) field_error("/tolerances/residual", "must be positive");
    if (!(p.tolerances.step > 0)) field_error("/tolerances/step", "must be positive");
  }
  return p;
}

ProblemFile parse_problem_text(const std::string &text)
{
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(j);
}

ProblemFile load_problem(const std::string &path)
{
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_text(ss.str());
}

Json emit_problem(const ProblemFile &p)
{
  Json j;
  j["schema"] = p.schema;
  j["dimension"] = p.dimension;
  j["blocks"] = p.blocks;
  Json ex = Json::array();
  for (const auto &set : p.exponents) {
    Json s = Json::array();
    for (const auto &w : set.members()) s.push_back(std::vector<int>(w.data(), w.data() + w.size()));
    ex.push_back(s);
  }
  j["exponents"] = ex;
  if (!p.coefficients.empty()) {
    Json co = Json::array();
    for (const auto &list : p.coefficients) co.push_back(complex_list_json(list));
    j["coefficients"] = co;
  }
  if (!p.u.empty()) j["u"] = complex_list_json(p.u);
  if (!p.v.empty()) j["v"] = complex_list_json(p.v);
  if (p.euler_u) j["euler_u"] = complex_list_json(*p.euler_u);
  if (p.euler_v) j["euler_v"] = complex_list_json(*p.euler_v);
  if (p.base) j["base"] = *p.base;
  if (p.contour) {
    j["contour"] = contour_json(*p.contour);
    if (!p.contour->branch.empty()) {
      Json br = Json::array();
      for (const auto &b : p.contour->branch) br.push_back(b ? Json(*b) : Json(nullptr));
      j["branch"] = br;
    }
  }
  j["order"] = p.order;
  j["tolerances"] = {{"quadrature", p.tolerances.quadrature},
                     {"residual", p.tolerances.residual},
                     {"step", p.tolerances.step},
                     {"richardson", p.tolerances.richardson}};
  return j;
}

Json residual_json(const ResidualReport &r)
{
  Json j;
  j["operator"] = r.op;
  j["center"] = complex_list_json(r.center);
  j["h"] = r.h;
  j["residual"] = complex_json(r.residual);
  j["magnitude"] = r.magnitude;
  j["value"] = r.value;
  j["largest_term"] = r.largest_term;
  j["relative"] = r.relative;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

CoeffSpacePtr problem_space(const ProblemFile &p)
{
  if (p.exponents.empty()) throw std::invalid_argument("problem has no exponent sets");
  if (p.blocks == 0) return CoeffSpace::single(p.exponents.front());
  return CoeffSpace::cayley(p.exponents);
}

Eigen::VectorXcd problem_coefficients(const ProblemFile &p)
{
  require_coefficients(p);
  std::vector<Complex> flat;
  for (const auto &list : p.coefficients) flat.insert(flat.end(), list.begin(), list.end());
  return to_vector(flat);
}

Eigen::VectorXcd problem_binding(const ProblemFile &p)
{
  std::vector<Complex> all = p.u;
  all.insert(all.end(), p.v.begin(), p.v.end());
  return to_vector(all);
}

CommandOutput cmd_system(const ProblemFile &p)
{
  const auto space = problem_space(p);
  const SystemListing sys = p.blocks == 0 ? gg_system(space) : cayley_system(space);
  CommandOutput out;
  Json vars = Json::array();
  for (int i = 0; i < space->size(); ++i) vars.push_back(space->name(i));
  std::ostringstream text;
  auto section = [&](const char *name, const std::vector<DiffOperator> &ops) {
    Json a = Json::array();
    text << name << ":\n";
    if (ops.empty()) text << "  (none)\n";
    for (const auto &op : ops) {
      a.push_back(operator_json(op));
      text << "  " << op.str() << "\n";
    }
    return a;
  };
  out.report["command"] = "system";
  out.report["variables"] = vars;
  out.report["parameters"] = space->parameters().names();
  out.report["relations"] = section("relations", sys.relations);
  out.report["boxes"] = section("boxes", sys.boxes);
  out.report["euler"] = section("euler", sys.euler);
  out.report["warnings"] = sys.notes;
  for (const auto &n : sys.notes) text << "warning: " << n << "\n";
  out.text = text.str();
  return out;
}

CommandOutput cmd_series(const ProblemFile &p)
{
  require_u(p);
  const auto space = problem_space(p);
  const ExponentSet &set = space->joint();
  std::optional<Base> base;
  if (p.base) {
    for (auto i : *p.base)
      if (i >= set.size()) throw std::invalid_argument("base index " + std::to_string(i) + " is out of range");
    base.emplace(set, *p.base);
  } else {
    auto all = enumerate_bases(set);
    if (all.empty()) throw std::invalid_argument("the exponent set has no base");
    base = all.front();
  }
  const SeriesLayout layout = SeriesLayout::gg(space, *base);
  const Eigen::VectorXcd binding = problem_binding(p);
  const GammaSeries s = gg_series(layout, binding, p.order);
  const std::vector<std::string> names = space->parameters().names();

  CommandOutput out;
  std::ostringstream text;
  out.report["command"] = "series";
  out.report["base"] = base->indices();
  Json coords = Json::array();
  for (auto w : layout.series_indices()) {
    const RationalVector l = base_coords(*base, set[w]);
    Json lj = Json::array();
    for (Eigen::Index i = 0; i < l.size(); ++i) lj.push_back(l[i].str());
    coords.push_back({{"variable", space->name(static_cast<int>(w))}, {"coordinates", lj}});
  }
  out.report["coordinates"] = coords;
  out.report["order"] = s.order();

  Json series_vars = Json::array();
  for (auto w : layout.series_indices()) series_vars.push_back(space->name(static_cast<int>(w)));
  Json base_vars = Json::array();
  for (auto w : base->indices()) base_vars.push_back(space->name(static_cast<int>(w)));
  out.report["series_variables"] = series_vars;
  out.report["base_variables"] = base_vars;
  text << "base: ";
  for (std::size_t i = 0; i < base_vars.size(); ++i) text << (i ? ", " : "") << base_vars[i].get<std::string>();
  text << "\nterms to order " << s.order() << ":\n";

  Json terms = Json::array();
  for (const auto &t : s.terms()) {
    Json tj;
    tj["m"] = std::vector<int>(t.m.data(), t.m.data() + t.m.size());
    tj["source"] = t.from_oracle ? "oracle" : "gamma";
    tj["weight"] = t.prefactor.str(names);
    Json args = Json::array(), exps = Json::array();
    for (const auto &g : t.gamma_args)
      args.push_back({{"exact", g.str(names)}, {"value", complex_json(g.evaluate<double>(binding))}});
    for (const auto &e : t.base_exponents)
      exps.push_back({{"exact", e.str(names)}, {"value", complex_json(e.evaluate<double>(binding))}});
    tj["gamma_arguments"] = args;
    tj["exponents"] = exps;
    tj["pole"] = t.pole;
    Complex scalar = t.prefactor.evaluate<double>(binding);
    if (!t.pole)
      for (const auto &g : t.gamma_args) scalar *= gamma(g.evaluate<double>(binding));
    tj["scalar"] = t.pole ? Json(nullptr) : complex_json(scalar);
    terms.push_back(tj);

    text << "  m=(";
    for (Eigen::Index i = 0; i < t.m.size(); ++i) text << (i ? "," : "") << t.m[i];
    text << ")  " << t.prefactor.str(names);
    for (const auto &g : t.gamma_args) text << " * Gamma(" << g.str(names) << ")";
    for (std::size_t j = 0; j < t.base_exponents.size(); ++j)
      text << " * (-" << base_vars[j].get<std::string>() << ")^(" << t.base_exponents[j].str(names) << ")";
    if (t.pole) text << "  POLE";
    text << "\n";
  }
  out.report["terms"] = terms;

  if (!p.coefficients.empty()) {
    try {
      const SeriesValue v = evaluate_at_coefficients(s, problem_coefficients(p));
      out.report["value"] = complex_json(v.value);
      out.report["tail"] = v.tail;
      text << "value at the problem coefficients: " << format_complex(v.value) << " (tail " << v.tail << ")\n";
    } catch (const std::exception &e) {
      out.report["value_note"] = e.what();
      text << "value not evaluated: " << e.what() << "\n";
    }
  }
  out.text = text.str();
  return out;
}

CommandOutput cmd_eval(const ProblemFile &p)
{
  const ProductContour contour = require_contour(p);
  require_coefficients(p);
  const QuadratureOptions q = quad_options(p);
  QuadratureResult<double> r;
  if (p.blocks == 0) {
    const Eigen::VectorXcd c = problem_coefficients(p);
    if (p.u.empty())
      r = proper_integral(Polynomial::from_coefficients(p.exponents.front(), std::span<const Complex>(c.data(), c.size())),
                          contour, q);
    else
      r = gg_eval(p.exponents.front(), c, to_vector(p.u), contour, q);
  } else {
    require_u(p);
    std::vector<Polynomial> factors;
    for (int b = 0; b < p.blocks; ++b)
      factors.push_back(Polynomial::from_coefficients(p.exponents[static_cast<std::size_t>(b)],
                                                      std::span<const Complex>(p.coefficients[static_cast<std::size_t>(b)])));
    r = euler_integral_eval(factors, to_vector(p.v), to_vector(p.u), contour, q);
  }
  CommandOutput out;
  out.report["command"] = "eval";
  out.report["value"] = complex_json(r.value);
  out.report["error"] = r.error;
  out.report["evaluations"] = r.evaluations;
  std::ostringstream text;
  text << "value: " << format_complex(r.value) << "\nerror estimate: " << r.error << "\n";
  out.text = text.str();
  return out;
}

CommandOutput cmd_verify(const ProblemFile &p)
{
  const ProductContour contour = require_contour(p);
  require_u(p);
  const auto space = problem_space(p);
  const Eigen::VectorXcd center = problem_coefficients(p);
  FdOptions fd;
  fd.h = p.tolerances.step;
  fd.tolerance = p.tolerances.residual;
  fd.richardson = p.tolerances.richardson;
  const QuadratureOptions q = quad_options(p);

  std::vector<Complex> eu = p.euler_u.value_or(p.u), ev = p.euler_v.value_or(p.v);
  eu.insert(eu.end(), ev.begin(), ev.end());
  const Eigen::VectorXcd operator_binding = to_vector(eu);

  const SystemListing sys = p.blocks == 0 ? gg_system(space) : cayley_system(space);
  const CoeffFunction f = p.blocks == 0 ? gg_function(space, to_vector(p.u), contour, q)
                                        : euler_function(space, to_vector(p.v), to_vector(p.u), contour, q);
  std::vector<ResidualReport> reports =
      residual_reports(sys.all(), f, center.cast<ComplexL>(), operator_binding, fd);

  CommandOutput out;
  out.report["command"] = "verify";
  out.report["function"] = f.description;
  Json table = Json::array();
  bool all_pass = true;
  std::ostringstream text;
  text << "operator residuals (relative, tolerance " << fd.tolerance << "):\n";
  for (const auto &r : reports) {
    table.push_back(residual_json(r));
    all_pass = all_pass && r.pass;
    text << "  " << (r.pass ? "pass " : "FAIL ") << r.relative << "  " << r.op << "\n";
  }
  for (const auto &n : sys.notes) text << "warning: " << n << "\n";
  out.report["residuals"] = table;
  out.report["warnings"] = sys.notes;
  out.report["pass"] = all_pass;
  text << (all_pass ? "all checks passed\n" : "verification failed\n");
  out.text = text.str();
  out.exit_code = all_pass ? 0 : 1;
  return out;
}

} // namespace hypint
