#include "jointradius/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace jointradius {

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

json exponent_to_json(double q) { return std::isinf(q) ? json("inf") : json(q); }

double exponent_from_json(const json& doc) {
    if (doc.is_string()) {
        const auto s = doc.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity") return kInf;
        parse_error("exponent must be a number or \"inf\", got \"" + s + "\"");
    }
    if (!doc.is_number()) parse_error("exponent must be a number or \"inf\"");
    return doc.get<double>();
}

Field field_from_json(const json& doc) {
    if (!doc.contains("field")) return Field::Real;
    const auto f = doc.at("field").get<std::string>();
    if (f == "real") return Field::Real;
    if (f == "complex") return Field::Complex;
    parse_error("field must be \"real\" or \"complex\"");
}

Space space_rec(const json& doc, Field field) {
    if (!doc.is_object()) parse_error("space must be an object");
    if (doc.contains("field")) field = field_from_json(doc);
    if (doc.contains("lq")) {
        const auto& lq = doc.at("lq");
        return Space::lq(exponent_from_json(lq.at("q")), lq.at("dim").get<int>(), field);
    }
    if (doc.contains("sum")) {
        const auto& sum = doc.at("sum");
        std::vector<Space> subs;
        for (const auto& s : sum.at("summands")) subs.push_back(space_rec(s, field));
        return Space::direct_sum(std::move(subs), exponent_from_json(sum.at("outer_q")));
    }
    if (doc.contains("c0")) {
        std::vector<Space> subs;
        for (const auto& s : doc.at("c0").at("summands")) subs.push_back(space_rec(s, field));
        return Space::c0_sum(std::move(subs));
    }
    parse_error("space needs an \"lq\" or \"sum\" member");
}

json space_body(const Space& s) {
    if (!s.is_sum()) return {{"lq", {{"q", exponent_to_json(s.q())}, {"dim", s.dim()}}}};
    json subs = json::array();
    for (const auto& sub : s.summands()) subs.push_back(space_body(sub));
    return {{"sum", {{"outer_q", exponent_to_json(s.q())}, {"summands", subs}}}};
}

template <typename F>
auto guarded(F&& body) {
    try {
        return body();
    } catch (const json::exception& e) {
        parse_error(e.what());
    }
}

}  // namespace

json space_to_json(const Space& space) {
    json doc = space_body(space);
    doc["field"] = to_string(space.field());
    return doc;
}

Space space_from_json(const json& doc) {
    return guarded([&] { return space_rec(doc, Field::Real); });
}

json scalar_to_json(Scalar z, Field field) {
    if (field == Field::Real) return z.real();
    return json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const json& doc) {
    if (doc.is_number()) return {doc.get<double>(), 0.0};
    if (doc.is_array() && doc.size() == 2 && doc[0].is_number() && doc[1].is_number())
        return {doc[0].get<double>(), doc[1].get<double>()};
    parse_error("scalar must be a number or [re, im]");
}

json vector_to_json(const Vector& v, Field field) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v[i], field));
    return out;
}

Vector vector_from_json(const json& doc) {
    if (!doc.is_array()) parse_error("vector must be an array");
    Vector v(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t i = 0; i < doc.size(); ++i) v[static_cast<Eigen::Index>(i)] = scalar_from_json(doc[i]);
    return v;
}

json tuple_to_json(const OperatorTuple& tuple) {
    const Field field = tuple.source().field();
    json mats = json::array();
    for (const auto& m : tuple.mats()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), field));
            rows.push_back(std::move(row));
        }
        mats.push_back(std::move(rows));
    }
    return {{"k", tuple.k()},
            {"source", space_to_json(tuple.source())},
            {"target", space_to_json(tuple.target())},
            {"mats", mats}};
}

OperatorTuple tuple_from_json(const json& doc) {
    return guarded([&] {
        if (!doc.is_object()) parse_error("tuple document must be an object");
        const Space source = space_from_json(doc.contains("source") ? doc.at("source") : doc.at("space"));
        const Space target = doc.contains("target") ? space_from_json(doc.at("target")) : source;
        std::vector<Matrix> mats;
        for (const auto& m : doc.at("mats")) {
            if (!m.is_array()) parse_error("each matrix must be an array of rows");
            const auto rows = static_cast<Eigen::Index>(m.size());
            const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(m[0].size());
            Matrix mat(rows, cols);
            for (Eigen::Index r = 0; r < rows; ++r) {
                const auto& row = m[static_cast<std::size_t>(r)];
                if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
                    throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
                for (Eigen::Index c = 0; c < cols; ++c)
                    mat(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
            }
            mats.push_back(std::move(mat));
        }
        if (doc.contains("k") && doc.at("k").get<int>() != static_cast<int>(mats.size()))
            throw Error(ErrorCode::DimensionMismatch, "\"k\" does not match the number of matrices");
        return OperatorTuple(std::move(mats), source, target);
    });
}

json result_to_json(const ComputationResult& result, Field field) {
    json cert = {{"x", vector_to_json(result.certificate.x, field)}};
    if (result.certificate.f) {
        cert["f"] = vector_to_json(*result.certificate.f, field);
        cert["in_gx"] = result.certificate.in_gx;
    }
    json doc = {{"value", result.value},
                {"exact", result.exact},
                {"certificate", cert},
                {"evaluations", result.evaluations},
                {"upper_bound", nullptr}};
    if (result.upper_bound) doc["upper_bound"] = *result.upper_bound;
    if (result.sampled_lower_bound) doc["sampled_lower_bound"] = *result.sampled_lower_bound;
    return doc;
}

json range_to_json(const RangeSample& sample) {
    const Field field = sample.field();
    json points = json::array();
    for (const auto& p : sample.points) points.push_back(vector_to_json(p, field));
    json pairs = json::array();
    for (const auto& pr : sample.pairs)
        pairs.push_back({{"x", vector_to_json(pr.x, field)},
                         {"f", vector_to_json(pr.f, field)},
                         {"in_gx", pr.in_gx}});
    return {{"space", space_to_json(sample.space)},
            {"k", sample.k},
            {"seed", sample.seed},
            {"count", sample.count},
            {"source", to_string(sample.source)},
            {"points", points},
            {"pair_index", sample.pair_index},
            {"pairs", pairs}};
}

RangeSample range_from_json(const json& doc) {
    return guarded([&] {
        RangeSample s(space_from_json(doc.at("space")));
        s.k = doc.at("k").get<int>();
        s.seed = doc.at("seed").get<std::uint64_t>();
        s.count = doc.at("count").get<std::size_t>();
        const auto src = doc.at("source").get<std::string>();
        if (src != "sampled" && src != "enumerated") parse_error("source must be sampled or enumerated");
        s.source = src == "sampled" ? RangeMode::Sampled : RangeMode::Enumerated;
        for (const auto& p : doc.at("points")) s.points.push_back(vector_from_json(p));
        s.pair_index = doc.at("pair_index").get<std::vector<std::size_t>>();
        for (const auto& pr : doc.at("pairs"))
            s.pairs.push_back({vector_from_json(pr.at("x")), vector_from_json(pr.at("f")),
                               pr.at("in_gx").get<bool>()});
        if (s.pair_index.size() != s.points.size())
            throw Error(ErrorCode::DimensionMismatch, "pair_index length differs from points");
        return s;
    });
}

json convexity_to_json(const ConvexityReport& report) {
    json doc = {{"convex_at_resolution", report.convex_at_resolution},
                {"tolerance", report.tolerance},
                {"scale", report.scale},
                {"threshold", report.threshold},
                {"max_distance", report.max_distance},
                {"trials", report.trials},
                {"witness", nullptr}};
    if (report.witness)
        doc["witness"] = {{"a", report.witness->a},
                          {"b", report.witness->b},
                          {"midpoint", report.witness->midpoint},
                          {"distance", report.witness->distance}};
    return doc;
}

json estimate_to_json(const IndexEstimate& e) {
    json doc = {{"estimate", e.estimate},
                {"lower_bound", e.lower_bound},
                {"upper_bound", e.upper_bound},
                {"lower_provenance", e.lower_provenance},
                {"upper_provenance", e.upper_provenance},
                {"closed_form", nullptr},
                {"citation", nullptr},
                {"pinched", e.pinched},
                {"inner_approximate", e.inner_approximate},
                {"witness", nullptr},
                {"method", e.method},
                {"evaluations", e.evaluations},
                {"seed", e.seed}};
    if (!std::isfinite(e.estimate)) doc["estimate"] = nullptr;
    if (e.closed_form) {
        doc["closed_form"] = e.closed_form->value;
        doc["citation"] = e.closed_form->citation;
    }
    if (e.witness) doc["witness"] = tuple_to_json(*e.witness);
    return doc;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception& e) {
        parse_error(path + ": " + e.what());
    }
}

Space space_from_document(const json& doc) {
    if (doc.is_object() && doc.contains("space")) return space_from_json(doc.at("space"));
    if (doc.is_object() && doc.contains("source") && !doc.contains("lq") && !doc.contains("sum"))
        return space_from_json(doc.at("source"));
    return space_from_json(doc);
}

}  // namespace jointradius
