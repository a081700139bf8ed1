#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jointradius/index.hpp"
#include "jointradius/jointcalc.hpp"

using namespace jointradius;

namespace {

double kp(int k, double p) { return std::isinf(p) ? 1.0 : std::pow(static_cast<double>(k), 1.0 / p); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("classical index examples") {
    CHECK(*classical_index(Space::lq(kInf, 5)) == 1.0);
    CHECK(*classical_index(Space::lq(1.0, 3)) == 1.0);
    CHECK(*classical_index(Space::lq(2.0, 4, Field::Complex)) == 0.5);
    CHECK(*classical_index(Space::lq(2.0, 4)) == 0.0);
    CHECK(*classical_index(Space::lq(3.0, 1)) == 1.0);
    CHECK(!classical_index(Space::lq(3.0, 3)));
    const auto sum = Space::direct_sum({Space::lq(kInf, 2, Field::Complex), Space::lq(2.0, 2, Field::Complex)}, 1.0);
    REQUIRE(classical_index(sum));
    CHECK(*classical_index(sum) == 0.5);
    CHECK(!classical_index(Space::direct_sum({Space::lq(1.0, 2), Space::lq(1.0, 2)}, 2.0)));
}

TEST_CASE("closed form examples") {
    CHECK(closed_form_index(Space::lq(kInf, 4), 2.0, 3)->value == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(closed_form_index(Space::lq(1.0, 3), 1.0, 2)->value == 0.5);
    CHECK(closed_form_index(Space::lq(2.0, 3, Field::Complex), 3.0, 2)->value ==
          doctest::Approx(std::pow(2.0, -4.0 / 3.0)).epsilon(1e-15));
    CHECK(closed_form_index(Space::lq(2.0, 4, Field::Complex), 2.0, 3)->value ==
          doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-15));
    // k = 1 reduces to the classical index.
    CHECK(closed_form_index(Space::lq(2.0, 2, Field::Complex), 5.0, 1)->value == 0.5);
    CHECK(closed_form_index(Space::lq(2.0, 3), 2.0, 2)->value == 0.0);
    CHECK(!closed_form_index(Space::lq(3.0, 3), 2.0, 2));
}

TEST_CASE("closed form hypothesis guards") {
    CHECK(!closed_form_index(Space::lq(kInf, 3), 2.0, 4));
    CHECK(!closed_form_index(Space::lq(1.0, 3), 2.0, 3));
    CHECK(!closed_form_index(Space::lq(1.0, 3, Field::Complex), 2.0, 2));
    CHECK(!closed_form_index(Space::lq(2.0, 2, Field::Complex), 2.0, 2));  // m >= 3
    CHECK(!closed_form_index(Space::lq(2.0, 3, Field::Complex), 2.0, 3));  // k < m
    CHECK(!closed_form_index(Space::lq(2.0, 3, Field::Complex), 1.5, 2));  // p > 2 or p = 2
    CHECK(code_of([] { closed_form_index(Space::lq(1.0, 3), 0.5, 2); }) == ErrorCode::InvalidExponent);
    CHECK(code_of([] { closed_form_index(Space::lq(1.0, 3), 2.0, 0); }) == ErrorCode::InvalidK);
}

TEST_CASE("closed forms sit inside the bound theorem sandwich") {
    const std::vector<Space> spaces = {Space::lq(kInf, 4), Space::lq(1.0, 3), Space::lq(2.0, 3),
                                       Space::lq(2.0, 4, Field::Complex)};
    for (const auto& x : spaces)
        for (double p : {1.0, 2.0, 3.0, 4.0, kInf})
            for (int k = 1; k <= 4; ++k) {
                const auto cf = closed_form_index(x, p, k);
                if (!cf) continue;
                const double n = *classical_index(x);
                CHECK(n / kp(k, p) <= cf->value + 1e-15);
                CHECK(cf->value <= n + 1e-15);
                const auto b = index_bounds(x, p, k);
                CHECK(b.lower <= cf->value + 1e-15);
                CHECK(cf->value <= b.upper + 1e-15);
            }
}

TEST_CASE("bounds examples") {
    for (double p : {1.0, 2.0, kInf})
        for (int k = 1; k <= 4; ++k) {
            const auto b = index_bounds(Space::lq(kInf, 4), p, k);
            CHECK(b.lower == doctest::Approx(1.0 / kp(k, p)).epsilon(1e-15));
            CHECK(b.upper <= 1.0);
            CHECK(!b.lower_provenance.empty());
        }
    const auto hilbert_sum = Space::direct_sum({Space::lq(3.0, 2), Space::lq(kInf, 2)}, 2.0);
    CHECK(index_bounds(hilbert_sum, 1.0, 2).upper <= 0.5);
    const auto q3 = Space::direct_sum({Space::lq(1.0, 2), Space::lq(1.0, 2)}, 3.0);
    CHECK(index_bounds(q3, 2.0, 2).upper <= 2.0 / 3.0 + 1e-15);
    const auto real2 = index_bounds(Space::lq(2.0, 3), 2.0, 2);
    CHECK(real2.lower == 0.0);
    CHECK(real2.upper == 0.0);
    const auto cx = index_bounds(Space::lq(3.0, 3, Field::Complex), 2.0, 2);
    CHECK(cx.lower == doctest::Approx(1.0 / (std::numbers::e * std::sqrt(2.0))));
}

TEST_CASE("witness tuples reproduce the closed forms") {
    struct Case {
        Space space;
        double p;
        int k;
    };
    const std::vector<Case> cases = {
        {Space::lq(kInf, 4), 2.0, 3}, {Space::lq(kInf, 4), 1.0, 4}, {Space::lq(1.0, 3), 1.0, 2},
        {Space::lq(1.0, 3), 4.0, 2},  {Space::lq(2.0, 3), 2.0, 2},  {Space::lq(kInf, 2), kInf, 2},
    };
    for (const auto& c : cases) {
        const auto w = witness_tuple(c.space, c.p, c.k);
        CHECK(w.k() == c.k);
        const auto n = joint_operator_norm(w, c.p, Mode::Auto);
        if (c.space.admits_exact()) CHECK(std::abs(n.value - 1.0) <= 1e-12);
        bool exact = false;
        const double r = index_ratio(w, c.p, IndexOptions::default_inner(), &exact);
        CHECK(std::abs(r - closed_form_index(c.space, c.p, c.k)->value) <= (exact ? 1e-12 : 1e-6));
    }
    // The diagonal projections on l_inf^4 scaled by 3^{-1/2}.
    const auto d = witness_tuple(Space::lq(kInf, 4), 2.0, 3);
    CHECK(std::abs(d[1](1, 1) - 1.0 / std::sqrt(3.0)) <= 1e-15);
    CHECK(std::abs(d[1](0, 0)) == 0.0);
    CHECK(code_of([] { witness_tuple(Space::lq(3.0, 3), 2.0, 2); }) == ErrorCode::NoWitnessKnown);
}

TEST_CASE("complex Hilbert witnesses") {
    OptimizeOptions o = IndexOptions::default_inner();
    o.starts = 32;
    const auto w2 = witness_tuple(Space::lq(2.0, 3, Field::Complex), 2.0, 2);
    CHECK(std::abs(std::abs(w2[0](0, 2)) - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(index_ratio(w2, 2.0, o) - 1.0 / (2.0 * std::sqrt(2.0))) <= 1e-4);
    const auto w3 = witness_tuple(Space::lq(2.0, 3, Field::Complex), 3.0, 2);
    CHECK(std::abs(index_ratio(w3, 3.0, o) - std::pow(2.0, -4.0 / 3.0)) <= 1e-4);
}

TEST_CASE("estimate examples") {
    IndexOptions opts;
    opts.seed = 1;
    const auto e = estimate_index(Space::lq(kInf, 4), 2.0, 2, opts);
    CHECK(e.estimate >= 1.0 / std::sqrt(2.0) - 1e-9);
    CHECK(e.estimate <= 1.0 / std::sqrt(2.0) + 1e-3);
    CHECK(e.pinched);
    REQUIRE(e.witness);
    CHECK(std::abs(index_ratio(*e.witness, 2.0, opts.inner) - e.estimate) <= 1e-8);

    IndexOptions small;
    small.budget = 4000;
    const auto one = estimate_index(Space::lq(1.0, 2), 2.0, 1, small);
    CHECK(one.estimate >= 1.0 - 1e-9);
    CHECK(one.estimate <= 1.0 + 1e-3);

    const auto zero = estimate_index(Space::lq(2.0, 3), 2.0, 2, small);
    CHECK(zero.lower_bound == 0.0);
    CHECK(zero.estimate >= 0.0);
    CHECK(zero.estimate <= 1e-6);
}

TEST_CASE("estimates respect their invariants") {
    IndexOptions opts;
    opts.budget = 3000;
    opts.seed = 3;
    const auto e = estimate_index(Space::lq(1.0, 3), 1.0, 3, opts);
    CHECK(!e.closed_form);
    CHECK(e.lower_bound - 1e-9 <= e.estimate);
    for (double r : e.start_ratios) CHECK(r >= e.lower_bound - 1e-9);
    CHECK(e.evaluations <= opts.budget + 64);
    REQUIRE(e.witness);
    CHECK(std::abs(joint_operator_norm(*e.witness, 1.0, Mode::Exact).value - 1.0) <= 1e-12);
    CHECK(std::abs(joint_numerical_radius(*e.witness, 1.0, Mode::Exact).value - e.estimate) <= 1e-8);
}

TEST_CASE("more budget never worsens the estimate") {
    double previous = kInf;
    for (std::size_t budget : {200, 1000, 4000}) {
        IndexOptions opts;
        opts.budget = budget;
        opts.seed = 9;
        const double e = estimate_index(Space::lq(kInf, 3), 1.0, 3, opts).estimate;
        CHECK(e <= previous);
        previous = e;
    }
}

TEST_CASE("zero padding never increases the estimate") {
    IndexOptions opts;
    opts.budget = 2000;
    opts.seed = 5;
    const auto x = Space::lq(1.0, 3);
    const auto e2 = estimate_index(x, 2.0, 2, opts);
    REQUIRE(e2.witness);
    IndexOptions padded = opts;
    padded.extra_starts = {pad(*e2.witness, 3)};
    const auto e3 = estimate_index(x, 2.0, 3, padded);
    CHECK(e3.estimate <= e2.estimate + 1e-12);
    CHECK_THROWS_AS(
        [&] {
            IndexOptions bad = opts;
            bad.extra_starts = {random_tuple(Space::lq(1.0, 2), 3, 0)};
            estimate_index(x, 2.0, 3, bad);
        }(),
        Error);
}

TEST_CASE("complex ratios stay above 1/(e k^{1/p})") {
    const auto x = Space::lq(3.0, 2, Field::Complex);
    const auto opts = IndexOptions::default_inner();
    for (std::uint64_t s = 0; s < 6; ++s) {
        const auto t = random_tuple(x, 2, 19, s);
        CHECK(index_ratio(t, 2.0, opts) >= 1.0 / (std::numbers::e * std::sqrt(2.0)) - 1e-9);
    }
    CHECK(std::isinf(index_ratio(OperatorTuple::zero(2, x), 2.0, opts)));
}

TEST_CASE("direct sum theorems") {
    const auto host = Space::direct_sum({Space::lq(1.0, 2), Space::lq(2.0, 2)}, kInf);
    const auto r = verify_direct_sum_theorems(host, 2.0, 2, 3, 1, 500);
    CHECK(r.pass);
    CHECK(r.checks.size() == 6);
    for (const auto& c : r.checks) {
        CHECK(c.sampled_host_norm <= c.summand_norm + c.sample_margin);
        CHECK(c.sampled_host_radius <= c.summand_radius + c.sample_margin);
        if (c.slot == 0) CHECK(c.summand_exact);
    }
    const auto l1 = Space::direct_sum({Space::lq(1.0, 2), Space::lq(1.0, 2)}, 1.0);
    const auto r1 = verify_direct_sum_theorems(l1, 1.0, 2, 5, 2, 200);
    CHECK(r1.pass);
    for (const auto& c : r1.checks) {
        CHECK(c.host_exact);
        CHECK(std::abs(c.host_norm - c.summand_norm) <= 1e-10);
        CHECK(std::abs(c.host_radius - c.summand_radius) <= 1e-10);
    }
    CHECK(code_of([] { verify_direct_sum_theorems(Space::lq(1.0, 2), 1.0, 1, 1, 0); }) == ErrorCode::InvalidSpace);
}

TEST_CASE("lifted zero tuple") {
    const auto host = Space::direct_sum({Space::lq(1.0, 2), Space::lq(kInf, 2)}, kInf);
    const auto z = lift_direct_sum(OperatorTuple::zero(2, Space::lq(1.0, 2)), host, 0);
    CHECK(joint_operator_norm(z, 2.0).value == 0.0);
    CHECK(joint_numerical_radius(z, 2.0).value == 0.0);
}

TEST_CASE("sum closed forms and witnesses") {
    // n(X) = 1 with an l_inf^2 summand at 1/k^{1/p}.
    const auto x = Space::direct_sum({Space::lq(kInf, 2), Space::lq(1.0, 3)}, kInf);
    const auto cf = closed_form_index(x, 2.0, 2);
    REQUIRE(cf);
    CHECK(cf->value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    const auto w = witness_tuple(x, 2.0, 2);
    CHECK(std::abs(index_ratio(w, 2.0, IndexOptions::default_inner()) - cf->value) <= 1e-12);
}
