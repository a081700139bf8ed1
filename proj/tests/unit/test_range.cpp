#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jointradius/jointcalc.hpp"
#include "jointradius/range.hpp"
#include "oracles.hpp"

using namespace jointradius;

namespace {

OperatorTuple shift_pair() {
    Matrix t = Matrix::Zero(2, 2), s = Matrix::Zero(2, 2);
    t(0, 1) = 1.0;
    s(1, 0) = 1.0;
    return OperatorTuple({t, s}, Space::lq(1.0, 2));
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("jr_test_range_" + name)).string();
}

std::vector<std::string> lines_of(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::size_t columns(const std::string& line) {
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("the l1^2 example range lies on two segments") {
    const auto t = shift_pair();
    const auto sample = sample_range(t, 10000, 0);
    CHECK(sample.points.size() == 10000);
    double worst = 0.0;
    bool saw_plus = false, saw_minus = false;
    for (const auto& w : sample.points) {
        const double a = w[0].real(), b = w[1].real();
        // +(a, 1-a) or -(a, 1-a) with 0 <= a <= 1
        const double on_plus = std::abs(a + b - 1.0) + std::max(0.0, -a) + std::max(0.0, -b);
        const double on_minus = std::abs(a + b + 1.0) + std::max(0.0, a) + std::max(0.0, b);
        worst = std::max(worst, std::min(on_plus, on_minus));
        saw_plus |= on_plus < on_minus;
        saw_minus |= on_minus < on_plus;
    }
    CHECK(worst <= 1e-10);
    CHECK(saw_plus);
    CHECK(saw_minus);
}

TEST_CASE("points are reproducible from their generating pairs") {
    const auto x = Space::direct_sum({Space::lq(1.0, 2), Space::lq(3.0, 2)}, kInf);
    const auto t = random_tuple(x, 3, 5);
    const auto sample = sample_range(t, 500, 2);
    REQUIRE(sample.pair_index.size() == sample.points.size());
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        const auto& pair = sample.pairs[sample.pair_index[i]];
        CHECK((range_point(t, pair.x, pair.f) - sample.points[i]).norm() <= 1e-12);
        CHECK(std::abs(pairing(pair.f, pair.x) - 1.0) <= 1e-12);
    }
}

TEST_CASE("(I, O) has a single point") {
    const auto x = Space::lq(3.0, 3);
    const OperatorTuple t({Matrix::Identity(3, 3), Matrix::Zero(3, 3)}, x);
    const auto sample = sample_range(t, 200, 1);
    for (const auto& w : sample.points) {
        CHECK(std::abs(w[0] - 1.0) <= 1e-12);
        CHECK(std::abs(w[1]) == 0.0);
    }
    CHECK(convexity_report(sample, 100, 0.05, 1).convex_at_resolution);
    const auto parts = component_ranges(sample);
    REQUIRE(parts.size() == 2);
    for (const auto& w : parts[1].points) CHECK(w[0] == Scalar(0.0));
}

TEST_CASE("range of (c1 I, T, c2 I) is the product of component ranges") {
    const auto x = Space::lq(2.0, 2);
    Matrix s(2, 2);
    s << 1.0, 0.3, 0.3, -0.5;
    const OperatorTuple t({0.7 * Matrix::Identity(2, 2), s, -0.2 * Matrix::Identity(2, 2)}, x);
    const auto full = sample_range(t, 2000, 4);
    const auto single = sample_range(OperatorTuple({s}, x), 2000, 5);
    std::vector<std::vector<double>> product;
    for (const auto& w : single.points) product.push_back({0.7, w[0].real(), -0.2});
    CHECK(hausdorff_distance(flatten_points(full), product) <= 2e-2);
}

TEST_CASE("convexity report on the l1^2 example") {
    const auto sample = sample_range(shift_pair(), 10000, 0);
    const auto report = convexity_report(sample, 2000, 0.05, 0);
    CHECK(!report.convex_at_resolution);
    REQUIRE(report.witness);
    CHECK(report.witness->distance > report.threshold);
    CHECK(report.threshold == doctest::Approx(0.05 * report.scale));
    // The bounding box is [-1,1]^2, so the worst midpoint sits 1/sqrt(2) from W.
    CHECK(report.scale == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
    CHECK(report.max_distance == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-2));
    // The witness distance is recomputable from the sample.
    double nearest = kInf;
    for (const auto& q : flatten_points(sample)) {
        const double d = std::hypot(q[0] - report.witness->midpoint[0], q[1] - report.witness->midpoint[1]);
        nearest = std::min(nearest, d);
    }
    CHECK(nearest == doctest::Approx(report.witness->distance));
    CHECK_THROWS_AS(convexity_report(RangeSample(Space::lq(1.0, 2)), 10, 0.05, 0), Error);
}

TEST_CASE("k = 1 symmetric operator on real l2^3 gives the eigenvalue interval") {
    Rng rng(3, 0);
    std::array<std::array<double, 3>, 3> a{};
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) a[i][j] = a[j][i] = rng.gaussian();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a[i][j];
    const auto ev = oracle::symmetric3_eigenvalues(a);
    const auto sample = sample_range(OperatorTuple({m}, Space::lq(2.0, 3)), 4000, 6);
    double lo = kInf, hi = -kInf;
    for (const auto& w : sample.points) {
        lo = std::min(lo, w[0].real());
        hi = std::max(hi, w[0].real());
        CHECK(std::abs(w[0].imag()) == 0.0);
    }
    CHECK(lo >= ev[0] - 1e-12);
    CHECK(hi <= ev[2] + 1e-12);
    CHECK(hi - lo >= 0.9 * (ev[2] - ev[0]));
    CHECK(convexity_report(sample, 1000, 0.05, 6).convex_at_resolution);
}

TEST_CASE("component ranges of the l1^2 example cover [-1, 1]") {
    const auto sample = sample_range(shift_pair(), 10000, 0);
    const auto parts = component_ranges(sample);
    REQUIRE(parts.size() == 2);
    std::vector<std::vector<double>> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back({-1.0 + i / 100.0});
    for (const auto& part : parts) {
        CHECK(part.k == 1);
        CHECK(bool(part.pair_index == sample.pair_index));
        CHECK(hausdorff_distance(flatten_points(part), grid) <= 1e-2);
    }
}

TEST_CASE("convex full range implies convex components") {
    for (std::uint64_t s = 0; s < 3; ++s) {
        const auto t = random_tuple(Space::lq(2.0, 2, Field::Complex), 2, 40, s);
        const auto sample = sample_range(t, 3000, s);
        const auto full = convexity_report(sample, 500, 0.05, s);
        if (!full.convex_at_resolution) continue;
        for (const auto& part : component_ranges(sample))
            CHECK(convexity_report(part, 500, 0.05, s).convex_at_resolution);
    }
}

TEST_CASE("CSV export columns") {
    const auto real = sample_range(shift_pair(), 50, 0);
    const auto path = temp_path("real.csv");
    export_range(real, path, RangeFormat::CSV);
    const auto lines = lines_of(path);
    REQUIRE(lines.size() == 51);
    CHECK(lines[0] == "re_1,re_2,pair_index");
    for (const auto& l : lines) CHECK(columns(l) == 3);

    const auto cplx = sample_range(random_tuple(Space::lq(2.0, 2, Field::Complex), 2, 1), 50, 0);
    const auto cpath = temp_path("complex.csv");
    export_range(cplx, cpath, RangeFormat::CSV);
    const auto clines = lines_of(cpath);
    CHECK(clines[0] == "re_1,re_2,im_1,im_2,pair_index");
    for (const auto& l : clines) CHECK(columns(l) == 5);
    std::filesystem::remove(path);
    std::filesystem::remove(cpath);
    CHECK_THROWS_AS(export_range(real, "/nonexistent-dir/x.csv", RangeFormat::CSV), Error);
}

TEST_CASE("JSON round trip is bit exact") {
    const auto sample = sample_range(random_tuple(Space::lq(1.0, 3, Field::Complex), 2, 7), 300, 9);
    const auto path = temp_path("roundtrip.json");
    export_range(sample, path, RangeFormat::JSON);
    const auto back = load_range_json(path);
    std::filesystem::remove(path);
    REQUIRE(back.points.size() == sample.points.size());
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        CHECK(bool(back.points[i] == sample.points[i]));
        CHECK(back.pair_index[i] == sample.pair_index[i]);
    }
    CHECK(back.space == sample.space);
    CHECK(back.seed == sample.seed);
    CHECK(back.k == sample.k);
}

TEST_CASE("sampling is seed deterministic") {
    const auto t = random_tuple(Space::lq(kInf, 3), 2, 3);
    const auto a = sample_range(t, 400, 12);
    const auto b = sample_range(t, 400, 12);
    const auto c = sample_range(t, 400, 13);
    bool differs = false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(bool(a.points[i] == b.points[i]));
        differs |= a.points[i] != c.points[i];
    }
    CHECK(differs);
}

TEST_CASE("negating the tuple negates the sample") {
    const auto t = random_tuple(Space::direct_sum({Space::lq(1.0, 2), Space::lq(kInf, 2)}, 1.0), 2, 8);
    const auto a = sample_range(t, 500, 3);
    const auto b = sample_range(t.scaled(-1.0), 500, 3);
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK((a.points[i] + b.points[i]).norm() <= 1e-12);
}

TEST_CASE("sampled aggregates never exceed the radius") {
    const std::vector<Space> spaces = {Space::lq(1.0, 3), Space::lq(kInf, 3),
                                       Space::direct_sum({Space::lq(1.0, 2), Space::lq(kInf, 2)}, kInf)};
    for (const auto& x : spaces) {
        const auto t = random_tuple(x, 2, 14);
        const auto sample = sample_range(t, 2000, 1);
        for (double p : {1.0, 2.0}) {
            const double w = joint_numerical_radius(t, p, Mode::Exact).value;
            double sup = 0.0;
            for (const auto& pt : sample.points) {
                double vals[2] = {std::abs(pt[0]), std::abs(pt[1])};
                sup = std::max(sup, p_aggregate(vals, 2, p));
            }
            CHECK(sup <= w + 1e-10);
        }
    }
}

TEST_CASE("enumerated mode maps G_X") {
    const auto t = shift_pair();
    const auto sample = sample_range(t, 0, 0, RangeMode::Enumerated);
    CHECK(sample.source == RangeMode::Enumerated);
    CHECK(sample.points.size() == extreme_norming_pairs(Space::lq(1.0, 2)).size());
    CHECK_THROWS_AS(sample_range(random_tuple(Space::lq(2.0, 2), 1, 0), 10, 0, RangeMode::Enumerated), Error);
    const OperatorTuple rect({Matrix::Zero(3, 2)}, Space::lq(1.0, 2), Space::lq(1.0, 3));
    CHECK_THROWS_AS(sample_range(rect, 10, 0), Error);
}
