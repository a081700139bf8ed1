#pragma once

// Finite-dimensional normed spaces built from l_q^m factors and finite
// l_q-direct sums, over the real or complex field.
//
// Vectors and functionals share one coordinate representation: a complex
// coordinate vector (real spaces keep zero imaginary parts). Functionals act
// through the bilinear pairing f(x) = sum_i f_i x_i, so the duality map of a
// complex Hilbert space returns the coordinatewise conjugate of x.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jointradius/error.hpp"
#include "jointradius/rng.hpp"

namespace jointradius {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Field { Real, Complex };

const char* to_string(Field field);

/// 1/q + 1/q' = 1, with 1 <-> inf.
double conjugate_exponent(double q);

/// (sum |v_i|^p)^(1/p), or max |v_i| for p = inf.
double p_aggregate(const double* values, std::size_t n, double p);

class Space {
public:
    static Space lq(double q, int dim, Field field = Field::Real);
    static Space direct_sum(std::vector<Space> summands, double outer_q);
    /// Finite c0-sums are isometric to l_inf-sums.
    static Space c0_sum(std::vector<Space> summands) { return direct_sum(std::move(summands), kInf); }

    bool is_sum() const { return !summands_.empty(); }
    /// Exponent of an l_q factor, or the outer exponent of a direct sum.
    double q() const { return q_; }
    int dim() const { return dim_; }
    Field field() const { return field_; }
    bool is_complex() const { return field_ == Field::Complex; }
    const std::vector<Space>& summands() const { return summands_; }
    /// Starting coordinate of each summand.
    std::vector<int> offsets() const;

    /// Unit ball is a polytope: every factor is l_1 or l_inf (or one-dimensional)
    /// and every outer exponent is 1 or inf.
    bool is_polyhedral() const;
    /// Real and polyhedral: the extreme-point path is available.
    bool admits_exact() const { return field_ == Field::Real && is_polyhedral(); }
    /// A single l_q^m factor with 1 < q < inf (unique norming functionals).
    bool is_smooth_factor() const;

    /// The l_q^m space this descriptor is isometric to by coordinate identity,
    /// if any (nested sums whose exponents all agree, or one-dimensional factors).
    std::optional<Space> flattened() const;

    /// Compact human-readable form, e.g. "[l1^2 + l2^2]_inf (real)".
    std::string describe() const;

    friend bool operator==(const Space& a, const Space& b);
    friend bool operator!=(const Space& a, const Space& b) { return !(a == b); }

private:
    Space() = default;
    std::string describe_body() const;

    double q_ = 2.0;
    int dim_ = 0;
    Field field_ = Field::Real;
    std::vector<Space> summands_;
};

Space dual_space(const Space& space);

double norm(const Space& space, const Vector& x);
/// Unchecked variant for hot loops; `x` must hold space.dim() entries.
double norm(const Space& space, const Scalar* x);
/// Norm of f as an element of the dual space.
double dual_norm(const Space& space, const Vector& f);
Scalar pairing(const Vector& f, const Vector& x);

struct EnumerationLimits {
    std::size_t cap = std::size_t{1} << 20;
};

/// Number of extreme points of the unit ball of a real polyhedral space,
/// saturating at SIZE_MAX.
std::size_t extreme_point_count(const Space& space);

/// Exact extreme points of B_X. Requires a real polyhedral space.
std::vector<Vector> extreme_points(const Space& space, EnumerationLimits limits = {});

/// Norming functionals J(x) = { f in S_{X*} : f(x) = ||x|| }.
///
/// `generators` lists extreme points of J(x). When `complete` is false the
/// face has infinitely many extreme points (complex l_1 coordinates at zero,
/// smooth summands at zero inside an l_1-sum) and the list is a finite
/// selection.
struct FunctionalSet {
    std::vector<Vector> generators;
    bool complete = true;
    bool unique() const { return complete && generators.size() == 1; }
};

FunctionalSet norming_functionals(const Space& space, const Vector& x,
                                  EnumerationLimits limits = {});

/// An element of Pi_X: ||x|| = ||f||_* = 1 and f(x) = 1.
struct NormingPair {
    Vector x;
    Vector f;
    bool in_gx = false;
};

/// One extreme point x of B_X together with every extreme point of J(x).
struct ExtremeFace {
    Vector x;
    std::vector<Vector> functionals;
};

std::vector<ExtremeFace> extreme_faces(const Space& space, EnumerationLimits limits = {});

/// The finite set G_X of norming pairs made of extreme points.
std::vector<NormingPair> extreme_norming_pairs(const Space& space, EnumerationLimits limits = {});

/// A random element of E_X for a polyhedral space (real sign pattern; complex
/// spaces also get real signs, which are still extreme).
Vector random_extreme_point(const Space& space, Rng& rng);

/// Unit vector from a normalized field-Gaussian draw.
Vector random_unit_vector(const Space& space, Rng& rng);

/// A random element of J(x): free l_1 signs (or phases) and supporting faces
/// of l_inf factors are drawn uniformly among extreme choices.
Vector random_norming_functional(const Space& space, const Vector& x, Rng& rng);

/// Deterministic Monte-Carlo cover of Pi_X. Pair i uses stream i of `seed`.
std::vector<NormingPair> sample_norming_pairs(const Space& space, std::size_t count,
                                              std::uint64_t seed);

}  // namespace jointradius
