#pragma once

// JSON documents for spaces, tuples, results, range samples and index estimates.
// Complex scalars are [re, im]; real scalars are plain numbers; q = inf is "inf".

#include <string>

#include <json.hpp>

#include "jointradius/index.hpp"
#include "jointradius/jointcalc.hpp"
#include "jointradius/operators.hpp"
#include "jointradius/range.hpp"
#include "jointradius/spaces.hpp"

namespace jointradius {

using json = nlohmann::json;

json space_to_json(const Space& space);
Space space_from_json(const json& doc);

json scalar_to_json(Scalar z, Field field);
Scalar scalar_from_json(const json& doc);

json vector_to_json(const Vector& v, Field field);
Vector vector_from_json(const json& doc);

json tuple_to_json(const OperatorTuple& tuple);
OperatorTuple tuple_from_json(const json& doc);

json result_to_json(const ComputationResult& result, Field field);
json range_to_json(const RangeSample& sample);
RangeSample range_from_json(const json& doc);
json convexity_to_json(const ConvexityReport& report);
json estimate_to_json(const IndexEstimate& estimate);

/// Reads a JSON file; IoError when unreadable, ParseError when malformed.
json read_json_file(const std::string& path);
/// A space document, either bare or wrapped as {"space": ...}.
Space space_from_document(const json& doc);

}  // namespace jointradius
