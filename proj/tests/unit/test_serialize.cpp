#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jointradius/index.hpp"
#include "jointradius/jointcalc.hpp"
#include "jointradius/serialize.hpp"

using namespace jointradius;

TEST_CASE("space documents round trip") {
    const std::vector<Space> spaces = {
        Space::lq(1.0, 3),
        Space::lq(kInf, 2, Field::Complex),
        Space::lq(2.5, 4),
        Space::direct_sum({Space::lq(1.0, 2), Space::direct_sum({Space::lq(kInf, 1), Space::lq(3.0, 2)}, 2.0)},
                          kInf),
    };
    for (const auto& s : spaces) {
        const json doc = space_to_json(s);
        CHECK(space_from_json(doc) == s);
        CHECK(space_from_json(json::parse(doc.dump())) == s);
    }
    CHECK(space_to_json(Space::lq(kInf, 2))["lq"]["q"] == "inf");
}

TEST_CASE("c0 documents and malformed spaces") {
    const json c0 = json::parse(R"({"c0": {"summands": [{"lq": {"q": 1, "dim": 2}}, {"lq": {"q": 2, "dim": 1}}]}})");
    CHECK(space_from_json(c0) == Space::c0_sum({Space::lq(1.0, 2), Space::lq(2.0, 1)}));
    auto code = [](const char* text) {
        try {
            space_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::IoError;
    };
    CHECK(code(R"({"lq": {"q": 0.5, "dim": 2}})") == ErrorCode::InvalidSpace);
    CHECK(code(R"({"lq": {"q": "two", "dim": 2}})") == ErrorCode::ParseError);
    CHECK(code(R"({"nothing": 1})") == ErrorCode::ParseError);
}

TEST_CASE("scalars and vectors") {
    CHECK(scalar_to_json(Scalar(2.5, 0.0), Field::Real) == 2.5);
    CHECK(scalar_to_json(Scalar(2.5, -1.0), Field::Complex) == json::array({2.5, -1.0}));
    CHECK(scalar_from_json(json::array({0.0, 1.0})) == Scalar(0.0, 1.0));
    Vector v(2);
    v << Scalar(0.1, 0.2), Scalar(-3.0, 1e-300);
    CHECK(bool(vector_from_json(vector_to_json(v, Field::Complex)) == v));
}

TEST_CASE("tuple documents round trip bit exactly") {
    for (auto field : {Field::Real, Field::Complex}) {
        const auto t = random_tuple(Space::lq(3.0, 3, field), 2, 17);
        const auto back = tuple_from_json(json::parse(tuple_to_json(t).dump()));
        CHECK(back.source() == t.source());
        for (int i = 0; i < 2; ++i) CHECK(bool(back[i] == t[i]));
    }
    const json with_space = json::parse(R"({"space": {"lq": {"q": 1, "dim": 2}}, "mats": [[[1, 0], [0, 1]]]})");
    const auto id = tuple_from_json(with_space);
    CHECK(id.k() == 1);
    CHECK(id.is_endomorphism());
    const json ragged = json::parse(R"({"space": {"lq": {"q": 1, "dim": 2}}, "mats": [[[1, 0], [0]]]})");
    CHECK_THROWS_AS(tuple_from_json(ragged), Error);
    const json wrong_k = json::parse(R"({"k": 2, "space": {"lq": {"q": 1, "dim": 2}}, "mats": [[[1, 0], [0, 1]]]})");
    CHECK_THROWS_AS(tuple_from_json(wrong_k), Error);
}

TEST_CASE("result documents") {
    const auto t = tuple_from_json(read_json_file(JR_DATA_DIR "/linf4_diagonal_k3.json"));
    const auto r = joint_operator_norm(t, 2.0, Mode::Exact);
    const json doc = result_to_json(r, Field::Real);
    CHECK(doc["value"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(doc["exact"] == true);
    CHECK(doc["upper_bound"].is_null());
    CHECK(doc["certificate"]["x"].size() == 4);
    CHECK(doc.contains("evaluations"));
}

TEST_CASE("estimate documents carry every field") {
    IndexOptions opts;
    opts.budget = 500;
    const json doc = estimate_to_json(estimate_index(Space::lq(1.0, 3), 1.0, 2, opts));
    for (const char* key : {"estimate", "lower_bound", "closed_form", "citation", "pinched", "inner_approximate",
                            "witness", "evaluations", "seed"})
        CHECK(doc.contains(key));
    CHECK(doc["closed_form"] == 0.5);
}

TEST_CASE("file helpers") {
    CHECK_THROWS_AS(read_json_file(JR_DATA_DIR "/does-not-exist.json"), Error);
    CHECK(space_from_document(read_json_file(JR_DATA_DIR "/spaces/linf4.json")) == Space::lq(kInf, 4));
    CHECK(space_from_document(read_json_file(JR_DATA_DIR "/l1_2_shift_pair.json")) == Space::lq(1.0, 2));
}
