#include "bvsamp/serialize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bvsamp {

using nlohmann::json;

namespace {

Side side_from_string(const std::string& s) {
  if (s == "plus") return Side::plus;
  if (s == "minus") return Side::minus;
  throw std::invalid_argument("side must be \"plus\" or \"minus\"");
}

std::string side_to_string(Side s) {
  return s == Side::plus ? "plus" : "minus";
}

json interval_to_json(const Interval& K) {
  json j = json::array();
  j.push_back(K.lo);
  if (std::isinf(K.hi))
    j.push_back("inf");
  else
    j.push_back(K.hi);
  return j;
}

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("K must be [a, b] with b a number or \"inf\"");
  double a = j.at(0).get<double>();
  double b = j.at(1).is_string()
                 ? std::numeric_limits<double>::infinity()
                 : j.at(1).get<double>();
  if (j.at(1).is_string() && j.at(1).get<std::string>() != "inf")
    throw std::invalid_argument("K upper endpoint must be a number or \"inf\"");
  Interval K = Interval::closed(a, b);
  if (std::isinf(b)) K.hi_closed = false;
  return K;
}

}  // namespace

json to_json(const SignedMeasure& mu) {
  json atoms = json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({a.location, a.weight});
  json density = json::array();
  for (const DensityPiece& p : mu.density())
    density.push_back({p.lo, p.hi, p.value});
  return json{{"atoms", atoms}, {"density", density}};
}

SignedMeasure measure_from_json(const json& j) {
  std::vector<Atom> atoms;
  for (const json& a : j.at("atoms"))
    atoms.push_back(Atom{a.at(0).get<double>(), a.at(1).get<double>()});
  std::vector<DensityPiece> density;
  if (j.contains("density"))
    for (const json& p : j.at("density"))
      density.push_back(DensityPiece{p.at(0).get<double>(),
                                     p.at(1).get<double>(),
                                     p.at(2).get<double>()});
  return SignedMeasure(std::move(atoms), std::move(density));
}

json to_json(const PolySpline& f) {
  json knots = json::array();
  for (const Knot& k : f.knots()) knots.push_back({k.location, k.weight});
  return json{{"order", f.order()},
              {"null_coeffs", f.null_coeffs()},
              {"knots", knots}};
}

PolySpline spline_from_json(const json& j) {
  int order = j.at("order").get<int>();
  std::vector<double> b = j.at("null_coeffs").get<std::vector<double>>();
  std::vector<Knot> knots;
  for (const json& k : j.at("knots"))
    knots.push_back(Knot{k.at(0).get<double>(), k.at(1).get<double>()});
  return PolySpline(order, std::move(b), std::move(knots));
}

json to_json(const Measurement& m) {
  json terms = json::array();
  for (const Measurement::Term& t : m.terms())
    terms.push_back(json{{"c", t.coeff},
                         {"t", t.functional.t},
                         {"side", side_to_string(t.functional.side)},
                         {"d", t.functional.d}});
  return json{{"terms", terms}};
}

Measurement measurement_from_json(const json& j, int order) {
  std::vector<Measurement::Term> terms;
  for (const json& t : j.at("terms"))
    terms.push_back(Measurement::Term{
        t.at("c").get<double>(),
        SamplingFunctional{t.at("t").get<double>(),
                           side_from_string(t.at("side").get<std::string>()),
                           t.at("d").get<int>(), order}});
  return Measurement(std::move(terms));
}

json to_json(const Problem& p) {
  json j{{"order", p.order}, {"y", p.y}, {"lambda", p.lambda}};
  if (p.domain) j["K"] = interval_to_json(*p.domain);
  json ms = json::array();
  for (const Measurement& m : p.measurements) ms.push_back(to_json(m));
  j["measurements"] = ms;
  json loss{{"kind", p.loss.kind == LossKind::squared ? "squared"
                                                      : "interpolation"}};
  if (!p.loss.weights.empty()) loss["weights"] = p.loss.weights;
  j["loss"] = loss;
  if (p.grid) j["grid"] = *p.grid;
  return j;
}

Problem problem_from_json(const json& j) {
  Problem p;
  p.order = j.at("order").get<int>();
  if (j.contains("K")) p.domain = interval_from_json(j.at("K"));
  for (const json& m : j.at("measurements"))
    p.measurements.push_back(measurement_from_json(m, p.order));
  p.y = j.at("y").get<std::vector<double>>();
  if (j.contains("loss")) {
    const json& loss = j.at("loss");
    std::string kind = loss.at("kind").get<std::string>();
    if (kind == "squared")
      p.loss.kind = LossKind::squared;
    else if (kind == "interpolation")
      p.loss.kind = LossKind::interpolation;
    else
      throw std::invalid_argument("loss kind must be squared|interpolation");
    if (loss.contains("weights"))
      p.loss.weights = loss.at("weights").get<std::vector<double>>();
  }
  if (j.contains("lambda")) p.lambda = j.at("lambda").get<double>();
  if (j.contains("grid")) p.grid = j.at("grid").get<std::vector<double>>();
  p.validate();
  return p;
}

json to_json(const WellposedReport& r) {
  return json{{"lambda_ok", r.lambda_ok},
              {"loss_ok", r.loss_ok},
              {"feasible", r.feasible},
              {"invisible_null", r.invisible_null},
              {"grid_approximate", r.grid_approximate},
              {"warnings", r.warnings}};
}

WellposedReport report_from_json(const json& j) {
  WellposedReport r;
  r.lambda_ok = j.at("lambda_ok").get<bool>();
  r.loss_ok = j.at("loss_ok").get<bool>();
  r.feasible = j.at("feasible").get<bool>();
  r.invisible_null = j.at("invisible_null").get<std::vector<int>>();
  r.grid_approximate = j.at("grid_approximate").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

json to_json(const Solution& s) {
  return json{{"spline", to_json(s.spline)},
              {"cost", s.cost},
              {"knot_count", s.knot_count},
              {"residuals", s.residuals},
              {"report", to_json(s.report)}};
}

Solution solution_from_json(const json& j) {
  Solution s{spline_from_json(j.at("spline")), j.at("cost").get<double>(),
             j.at("knot_count").get<int>(),
             j.at("residuals").get<std::vector<double>>(),
             report_from_json(j.at("report"))};
  return s;
}

}  // namespace bvsamp
