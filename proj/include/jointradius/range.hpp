#pragma once

// Sampling, export and resolution-qualified convexity analysis of the joint
// numerical range W(T) = {(f(T_1 x), ..., f(T_k x)) : (x, f) in Pi_X}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointradius/operators.hpp"
#include "jointradius/spaces.hpp"

namespace jointradius {

enum class RangeMode { Sampled, Enumerated };
enum class RangeFormat { CSV, JSON };

const char* to_string(RangeMode mode);

struct RangeSample {
    explicit RangeSample(Space s) : space(std::move(s)) {}

    /// k-vectors over the field.
    std::vector<Vector> points;
    std::vector<NormingPair> pairs;
    /// Generating pair of each point.
    std::vector<std::size_t> pair_index;
    Space space;
    int k = 0;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    /// Enumerated samples cover only the G_X slice of W(T).
    RangeMode source = RangeMode::Sampled;

    Field field() const { return space.field(); }
};

/// (f(T_1 x), ..., f(T_k x)).
Vector range_point(const OperatorTuple& tuple, const Vector& x, const Vector& f);

/// Sampled: exactly `count` points. Real polyhedral spaces get all of G_X when
/// it fits in a quarter of the budget, then points on segments between random
/// extreme points; the rest come from sample_norming_pairs. Enumerated maps
/// G_X and ignores `count`.
RangeSample sample_range(const OperatorTuple& tuple, std::size_t count, std::uint64_t seed,
                         RangeMode mode = RangeMode::Sampled);

/// Points as real coordinates (complex points become (re..., im...)).
std::vector<std::vector<double>> flatten_points(const RangeSample& sample);

struct MidpointWitness {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> midpoint;
    double distance = 0.0;
};

struct ConvexityReport {
    bool convex_at_resolution = true;
    /// Relative tolerance; the absolute threshold is tolerance * scale.
    double tolerance = 0.0;
    /// Bounding-box diagonal of the flattened sample.
    double scale = 0.0;
    double threshold = 0.0;
    /// Largest midpoint-to-sample distance seen over all trials.
    double max_distance = 0.0;
    std::size_t trials = 0;
    std::optional<MidpointWitness> witness;
};

ConvexityReport convexity_report(const RangeSample& sample, std::size_t trials, double tolerance,
                                 std::uint64_t seed);

/// Coordinate projections, one k = 1 sample per component.
std::vector<RangeSample> component_ranges(const RangeSample& sample);

/// Symmetric Hausdorff distance between two point clouds (flattened coordinates).
double hausdorff_distance(const std::vector<std::vector<double>>& a,
                          const std::vector<std::vector<double>>& b);

void export_range(const RangeSample& sample, const std::string& path, RangeFormat format);
RangeSample load_range_json(const std::string& path);

}  // namespace jointradius
