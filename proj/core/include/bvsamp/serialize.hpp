#pragma once

#include <nlohmann/json.hpp>

#include "bvsamp/measure.hpp"
#include "bvsamp/sampling.hpp"
#include "bvsamp/solver.hpp"
#include "bvsamp/spline.hpp"

namespace bvsamp {

// JSON document schemas used by the CLI. Parsing validates through the
// domain constructors, so a document that parses is a valid value.
// Serialization is lossless for doubles (shortest round-trip form).

nlohmann::json to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PolySpline& f);
PolySpline spline_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Measurement& m);
Measurement measurement_from_json(const nlohmann::json& j, int order);

nlohmann::json to_json(const Problem& p);
Problem problem_from_json(const nlohmann::json& j);

nlohmann::json to_json(const WellposedReport& r);
WellposedReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);

}  // namespace bvsamp
