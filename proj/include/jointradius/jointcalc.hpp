#pragma once

// p-th joint operator norm and p-th joint numerical radius of operator tuples.
//
// Exact mode maximizes over the finite extreme sets E_X and G_X (real
// polyhedral spaces). Optimize mode runs a deterministic multi-start ascent on
// the unit sphere and reports a lower bound, never a certified supremum.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "jointradius/operators.hpp"
#include "jointradius/spaces.hpp"

namespace jointradius {

enum class Mode { Exact, Optimize, Auto };
enum class Quantity { Norm, Radius };

const char* to_string(Mode mode);

struct OptimizeOptions {
    /// Random starts; the 2n signed basis directions are always added.
    int starts = 64;
    std::uint64_t seed = 0;
    int max_iterations = 400;
    /// Ascent stops when the iterate moves less than this.
    double move_tol = 1e-10;
    /// Ascent stops when the value improves less than this.
    double improve_tol = 1e-12;
    /// Coordinate-pattern polish around each local maximum, shrinking to polish_min_step.
    double polish_step = 1e-2;
    double polish_min_step = 1e-10;
    /// Per-start evaluation ceiling.
    std::size_t max_evaluations_per_start = 20000;
    /// Radius: size of the independent norming-pair sample reported alongside.
    std::size_t sample_pairs = 256;
    /// Norm: also compute (sum ||T_i||^p)^(1/p).
    bool upper_bound = true;
    EnumerationLimits limits;
};

struct Certificate {
    Vector x;
    /// Present for radius results.
    std::optional<Vector> f;
    bool in_gx = false;
};

struct ComputationResult {
    double value = 0.0;
    Certificate certificate;
    bool exact = false;
    std::size_t evaluations = 0;
    std::optional<double> upper_bound;
    std::optional<double> sampled_lower_bound;
};

/// Throws InvalidExponent unless p >= 1 (p = inf is accepted as the max aggregate).
void check_exponent(double p);

/// (sum_i |f(T_i x)|^p)^(1/p).
double pair_value(const OperatorTuple& tuple, const Vector& x, const Vector& f, double p);
double pair_value(const OperatorTuple& tuple, const NormingPair& pair, double p);

/// (sum_i ||T_i x||^p)^(1/p).
double point_value(const OperatorTuple& tuple, const Vector& x, double p);

/// True when the exact path can enumerate the space's extreme set within the cap.
bool exact_norm_admissible(const Space& source, EnumerationLimits limits = {});
bool exact_radius_admissible(const Space& space, EnumerationLimits limits = {});

ComputationResult joint_operator_norm(const OperatorTuple& tuple, double p, Mode mode = Mode::Auto,
                                      const OptimizeOptions& options = {});

ComputationResult joint_numerical_radius(const OperatorTuple& tuple, double p,
                                         Mode mode = Mode::Auto,
                                         const OptimizeOptions& options = {});

/// Operator norm of a single matrix X -> Y: exact on polyhedral sources, the
/// largest singular value between Hilbert factors, optimized otherwise.
double operator_norm(const Matrix& m, const Space& source, const Space& target,
                     const OptimizeOptions& options = {});

/// Exhaustive angular grid over S_X (real dim <= 3, complex dim <= 2). The
/// radius grid scans every extreme norming functional at each grid point.
/// Returns a lower bound within O(resolution) of the supremum.
double grid_oracle(const OperatorTuple& tuple, double p, Quantity which, double resolution);

struct AdjointReport {
    double radius = 0.0;
    double adjoint_radius = 0.0;
    double difference = 0.0;
    double tolerance = 0.0;
    bool both_exact = false;
    bool pass = false;
};

/// Compares w_p(T) with w_p(T*) (equal on reflexive, e.g. finite-dimensional, spaces).
AdjointReport verify_adjoint_radius(const OperatorTuple& tuple, double p,
                                    const OptimizeOptions& options = {});

}  // namespace jointradius
