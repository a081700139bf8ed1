#include "jointradius/range.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "jointradius/jointcalc.hpp"
#include "jointradius/parallel.hpp"
#include "jointradius/serialize.hpp"

namespace jointradius {

const char* to_string(RangeMode mode) {
    return mode == RangeMode::Sampled ? "sampled" : "enumerated";
}

Vector range_point(const OperatorTuple& tuple, const Vector& x, const Vector& f) {
    Vector point(tuple.k());
    for (int i = 0; i < tuple.k(); ++i) point[i] = pairing(f, tuple[i] * x);
    return point;
}

namespace {

constexpr std::uint64_t kSegmentStream = 1;
constexpr std::uint64_t kGaussianStream = 2;

std::vector<NormingPair> segment_pairs(const Space& space, std::size_t count, std::uint64_t seed) {
    std::vector<NormingPair> out(count);
    parallel_for(count, [&](std::size_t i) {
        Rng rng(seed, i);
        const Vector v1 = random_extreme_point(space, rng);
        const Vector v2 = random_extreme_point(space, rng);
        const double t = rng.uniform();
        Vector y = t * v1 + (1.0 - t) * v2;
        const double ny = norm(space, y);
        if (ny < 1e-9) y = v1;
        Vector x = y / norm(space, y);
        Vector f = random_norming_functional(space, x, rng);
        out[i] = {std::move(x), std::move(f), false};
    });
    return out;
}

void fill_points(RangeSample& sample, const OperatorTuple& tuple) {
    sample.points.resize(sample.pairs.size());
    sample.pair_index.resize(sample.pairs.size());
    parallel_for(sample.pairs.size(), [&](std::size_t i) {
        sample.points[i] = range_point(tuple, sample.pairs[i].x, sample.pairs[i].f);
        sample.pair_index[i] = i;
    });
    sample.count = sample.points.size();
}

}  // namespace

RangeSample sample_range(const OperatorTuple& tuple, std::size_t count, std::uint64_t seed,
                         RangeMode mode) {
    if (!tuple.is_endomorphism())
        throw Error(ErrorCode::NotEndomorphism, "W(T) needs source == target");
    const Space& space = tuple.source();
    RangeSample sample(space);
    sample.k = tuple.k();
    sample.seed = seed;
    sample.source = mode;

    if (mode == RangeMode::Enumerated) {
        if (!space.admits_exact())
            throw Error(ErrorCode::UnsupportedExact, space.describe() + " has no finite G_X");
        sample.pairs = extreme_norming_pairs(space);
        fill_points(sample, tuple);
        return sample;
    }

    if (count == 0) throw Error(ErrorCode::EmptySample, "count must be positive");
    if (space.admits_exact() && exact_radius_admissible(space)) {
        auto gx = extreme_norming_pairs(space);
        if (gx.size() <= count / 4) sample.pairs = std::move(gx);
    }
    if (space.is_polyhedral()) {
        const std::size_t segments = (count - sample.pairs.size()) / 2;
        auto seg = segment_pairs(space, segments, split_seed(seed, kSegmentStream));
        sample.pairs.insert(sample.pairs.end(), seg.begin(), seg.end());
    }
    auto rest = sample_norming_pairs(space, count - sample.pairs.size(),
                                     split_seed(seed, kGaussianStream));
    sample.pairs.insert(sample.pairs.end(), rest.begin(), rest.end());
    fill_points(sample, tuple);
    return sample;
}

std::vector<std::vector<double>> flatten_points(const RangeSample& sample) {
    const bool cplx = sample.field() == Field::Complex;
    std::vector<std::vector<double>> out;
    out.reserve(sample.points.size());
    for (const auto& p : sample.points) {
        std::vector<double> row;
        row.reserve(cplx ? 2 * p.size() : p.size());
        for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(p[i].real());
        if (cplx)
            for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(p[i].imag());
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

double nearest_distance(const std::vector<double>& q, const std::vector<std::vector<double>>& cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cloud) best = std::min(best, squared_distance(q, c));
    return std::sqrt(best);
}

}  // namespace

ConvexityReport convexity_report(const RangeSample& sample, std::size_t trials, double tolerance,
                                 std::uint64_t seed) {
    if (sample.points.empty()) throw Error(ErrorCode::EmptySample, "empty range sample");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidExponent, "tolerance must be positive");
    const auto pts = flatten_points(sample);
    const std::size_t dim = pts.front().size();
    std::vector<double> lo(pts.front()), hi(pts.front());
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < dim; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    }
    ConvexityReport report;
    report.tolerance = tolerance;
    report.trials = trials;
    report.scale = std::sqrt(squared_distance(lo, hi));
    report.threshold = tolerance * report.scale;
    if (report.scale == 0.0 || pts.size() == 1) return report;

    std::vector<MidpointWitness> found(trials);
    parallel_for(trials, [&](std::size_t t) {
        Rng rng(seed, t);
        const auto& a = pts[rng.index(pts.size())];
        const auto& b = pts[rng.index(pts.size())];
        std::vector<double> mid(dim);
        for (std::size_t i = 0; i < dim; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        found[t] = {a, b, mid, nearest_distance(mid, pts)};
    });
    std::size_t worst = 0;
    for (std::size_t t = 0; t < found.size(); ++t)
        if (found[t].distance > found[worst].distance) worst = t;
    if (!found.empty()) {
        report.max_distance = found[worst].distance;
        if (report.max_distance > report.threshold) {
            report.convex_at_resolution = false;
            report.witness = std::move(found[worst]);
        }
    }
    return report;
}

std::vector<RangeSample> component_ranges(const RangeSample& sample) {
    if (sample.points.empty()) throw Error(ErrorCode::EmptySample, "empty range sample");
    std::vector<RangeSample> out;
    for (int i = 0; i < sample.k; ++i) {
        RangeSample c(sample.space);
        c.k = 1;
        c.seed = sample.seed;
        c.count = sample.count;
        c.source = sample.source;
        c.pairs = sample.pairs;
        c.pair_index = sample.pair_index;
        c.points.reserve(sample.points.size());
        for (const auto& p : sample.points) c.points.push_back(Vector::Constant(1, p[i]));
        out.push_back(std::move(c));
    }
    return out;
}

double hausdorff_distance(const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySample, "Hausdorff of an empty set");
    std::vector<double> da(a.size()), db(b.size());
    parallel_for(a.size(), [&](std::size_t i) { da[i] = nearest_distance(a[i], b); });
    parallel_for(b.size(), [&](std::size_t i) { db[i] = nearest_distance(b[i], a); });
    return std::max(*std::max_element(da.begin(), da.end()), *std::max_element(db.begin(), db.end()));
}

void export_range(const RangeSample& sample, const std::string& path, RangeFormat format) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    if (format == RangeFormat::JSON) {
        out << range_to_json(sample).dump() << '\n';
    } else {
        const bool cplx = sample.field() == Field::Complex;
        for (int i = 1; i <= sample.k; ++i) out << "re_" << i << ',';
        if (cplx)
            for (int i = 1; i <= sample.k; ++i) out << "im_" << i << ',';
        out << "pair_index\n";
        char buf[32];
        for (std::size_t r = 0; r < sample.points.size(); ++r) {
            const auto& p = sample.points[r];
            for (Eigen::Index i = 0; i < p.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g,", p[i].real());
                out << buf;
            }
            if (cplx) {
                for (Eigen::Index i = 0; i < p.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g,", p[i].imag());
                    out << buf;
                }
            }
            out << sample.pair_index[r] << '\n';
        }
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

RangeSample load_range_json(const std::string& path) { return range_from_json(read_json_file(path)); }

}  // namespace jointradius
