#include "jointradius/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace jointradius {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnsupportedExact: return "UnsupportedExact";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::SlotMismatch: return "SlotMismatch";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ShrinkNotAllowed: return "ShrinkNotAllowed";
        case ErrorCode::InvalidExponent: return "InvalidExponent";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::NotEndomorphism: return "NotEndomorphism";
        case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
        case ErrorCode::EmptySample: return "EmptySample";
        case ErrorCode::NoWitnessKnown: return "NoWitnessKnown";
        case ErrorCode::InvalidSpace: return "InvalidSpace";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

const char* to_string(Field field) { return field == Field::Real ? "real" : "complex"; }

double conjugate_exponent(double q) {
    if (q == 1.0) return kInf;
    if (std::isinf(q)) return 1.0;
    // Two roundings of the same value; prefer the one with a short decimal
    // form so that conjugating twice returns exponents like 3 or 4 exactly.
    const double a = q / (q - 1.0);
    const double b = 1.0 / (1.0 - 1.0 / q);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", b);
    return std::strtod(buf, nullptr) == b ? b : a;
}

double p_aggregate(const double* values, std::size_t n, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(values[i]));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(values[i]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += values[i] * values[i];
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Descriptor

namespace {

void check_exponent(double q) {
    if (!(q >= 1.0)) throw Error(ErrorCode::InvalidSpace, "exponent must be >= 1");
}

std::string format_exponent(double q) {
    if (std::isinf(q)) return "inf";
    std::ostringstream os;
    os << q;
    return os.str();
}

}  // namespace

Space Space::lq(double q, int dim, Field field) {
    check_exponent(q);
    if (dim < 1) throw Error(ErrorCode::InvalidSpace, "dimension must be positive");
    Space s;
    s.q_ = q;
    s.dim_ = dim;
    s.field_ = field;
    return s;
}

Space Space::direct_sum(std::vector<Space> summands, double outer_q) {
    check_exponent(outer_q);
    if (summands.empty()) throw Error(ErrorCode::InvalidSpace, "direct sum needs a summand");
    Space s;
    s.q_ = outer_q;
    s.field_ = summands.front().field();
    for (const auto& x : summands) {
        if (x.field() != s.field_)
            throw Error(ErrorCode::InvalidSpace, "summands must share the scalar field");
        s.dim_ += x.dim();
    }
    s.summands_ = std::move(summands);
    return s;
}

std::vector<int> Space::offsets() const {
    std::vector<int> out;
    int at = 0;
    for (const auto& s : summands_) {
        out.push_back(at);
        at += s.dim();
    }
    return out;
}

bool Space::is_polyhedral() const {
    if (!is_sum()) return dim_ == 1 || q_ == 1.0 || std::isinf(q_);
    const bool outer_ok = summands_.size() == 1 || q_ == 1.0 || std::isinf(q_);
    return outer_ok && std::all_of(summands_.begin(), summands_.end(),
                                   [](const Space& s) { return s.is_polyhedral(); });
}

bool Space::is_smooth_factor() const {
    return !is_sum() && dim_ > 1 && q_ > 1.0 && !std::isinf(q_);
}

std::optional<Space> Space::flattened() const {
    if (!is_sum()) return *this;
    std::optional<double> common;
    for (const auto& s : summands_) {
        auto flat = s.flattened();
        if (!flat) return std::nullopt;
        if (flat->dim() == 1) continue;
        if (common && *common != flat->q()) return std::nullopt;
        common = flat->q();
    }
    if (summands_.size() > 1) {
        if (common && *common != q_) return std::nullopt;
        common = q_;
    }
    return Space::lq(common.value_or(q_), dim_, field_);
}

std::string Space::describe_body() const {
    if (!is_sum()) return "l" + format_exponent(q_) + "^" + std::to_string(dim_);
    std::string out = "[";
    for (std::size_t i = 0; i < summands_.size(); ++i) {
        if (i) out += " + ";
        out += summands_[i].describe_body();
    }
    return out + "]_" + format_exponent(q_);
}

std::string Space::describe() const {
    return describe_body() + " (" + to_string(field_) + ")";
}

bool operator==(const Space& a, const Space& b) {
    return a.q_ == b.q_ && a.dim_ == b.dim_ && a.field_ == b.field_ && a.summands_ == b.summands_;
}

Space dual_space(const Space& space) {
    if (!space.is_sum()) return Space::lq(conjugate_exponent(space.q()), space.dim(), space.field());
    std::vector<Space> duals;
    duals.reserve(space.summands().size());
    for (const auto& s : space.summands()) duals.push_back(dual_space(s));
    return Space::direct_sum(std::move(duals), conjugate_exponent(space.q()));
}

// ---------------------------------------------------------------------------
// Norms

namespace {

double norm_rec(const Space& s, const Scalar* x) {
    if (!s.is_sum()) {
        const int n = s.dim();
        const double q = s.q();
        if (std::isinf(q)) {
            double m = 0.0;
            for (int i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
            return m;
        }
        if (q == 1.0) {
            double t = 0.0;
            for (int i = 0; i < n; ++i) t += std::abs(x[i]);
            return t;
        }
        if (q == 2.0) {
            double t = 0.0;
            for (int i = 0; i < n; ++i) t += std::norm(x[i]);
            return std::sqrt(t);
        }
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += std::pow(std::abs(x[i]), q);
        return std::pow(t, 1.0 / q);
    }
    const double q = s.q();
    double acc = 0.0;
    int at = 0;
    for (const auto& sub : s.summands()) {
        const double a = norm_rec(sub, x + at);
        at += sub.dim();
        if (std::isinf(q)) acc = std::max(acc, a);
        else if (q == 1.0) acc += a;
        else if (q == 2.0) acc += a * a;
        else acc += std::pow(a, q);
    }
    if (std::isinf(q) || q == 1.0) return acc;
    if (q == 2.0) return std::sqrt(acc);
    return std::pow(acc, 1.0 / q);
}

}  // namespace

double norm(const Space& space, const Vector& x) {
    if (x.size() != space.dim())
        throw Error(ErrorCode::DimensionMismatch, "vector length " + std::to_string(x.size()) +
                                                      " for space of dimension " +
                                                      std::to_string(space.dim()));
    return norm_rec(space, x.data());
}

double norm(const Space& space, const Scalar* x) { return norm_rec(space, x); }

double dual_norm(const Space& space, const Vector& f) { return norm(dual_space(space), f); }

Scalar pairing(const Vector& f, const Vector& x) {
    if (f.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "pairing length mismatch");
    Scalar s{0.0, 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i) s += f[i] * x[i];
    return s;
}

// ---------------------------------------------------------------------------
// Extreme points

namespace {

std::size_t sat_add(std::size_t a, std::size_t b) {
    return a > SIZE_MAX - b ? SIZE_MAX : a + b;
}

std::size_t sat_mul(std::size_t a, std::size_t b) {
    if (a == 0 || b == 0) return 0;
    return a > SIZE_MAX / b ? SIZE_MAX : a * b;
}

void require_exact(const Space& s) {
    if (s.field() != Field::Real)
        throw Error(ErrorCode::UnsupportedExact, "complex spaces have infinite extreme sets");
    if (!s.is_polyhedral())
        throw Error(ErrorCode::UnsupportedExact, s.describe() + " has a smooth factor");
}

/// Cartesian product of per-block candidate lists, concatenated in block order.
std::vector<Vector> block_product(const std::vector<std::vector<Vector>>& blocks, int total_dim,
                                  std::size_t cap) {
    std::size_t count = 1;
    for (const auto& b : blocks) count = sat_mul(count, b.size());
    if (count > cap)
        throw Error(ErrorCode::CapExceeded, "enumeration of " + std::to_string(count) +
                                                " entries exceeds cap " + std::to_string(cap));
    std::vector<Vector> out;
    out.reserve(count);
    std::vector<std::size_t> idx(blocks.size(), 0);
    for (std::size_t n = 0; n < count; ++n) {
        Vector v(total_dim);
        int at = 0;
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& piece = blocks[b][idx[b]];
            v.segment(at, piece.size()) = piece;
            at += static_cast<int>(piece.size());
        }
        out.push_back(std::move(v));
        for (std::size_t b = blocks.size(); b-- > 0;) {
            if (++idx[b] < blocks[b].size()) break;
            idx[b] = 0;
        }
    }
    return out;
}

std::vector<Vector> extreme_rec(const Space& s, std::size_t cap) {
    const int n = s.dim();
    if (!s.is_sum()) {
        std::vector<Vector> out;
        if (n == 1 || s.q() == 1.0) {
            for (int j = 0; j < n; ++j) {
                for (double sign : {1.0, -1.0}) {
                    Vector v = Vector::Zero(n);
                    v[j] = sign;
                    out.push_back(std::move(v));
                }
            }
            return out;
        }
        // l_inf^n: all sign patterns; bit j set means coordinate j is -1.
        const std::size_t count = std::size_t{1} << n;
        out.reserve(count);
        for (std::size_t mask = 0; mask < count; ++mask) {
            Vector v(n);
            for (int j = 0; j < n; ++j) v[j] = (mask >> j) & 1U ? -1.0 : 1.0;
            out.push_back(std::move(v));
        }
        return out;
    }
    if (s.summands().size() == 1) return extreme_rec(s.summands().front(), cap);
    if (std::isinf(s.q())) {
        std::vector<std::vector<Vector>> blocks;
        for (const auto& sub : s.summands()) blocks.push_back(extreme_rec(sub, cap));
        return block_product(blocks, n, cap);
    }
    std::vector<Vector> out;
    int at = 0;
    for (const auto& sub : s.summands()) {
        for (auto& piece : extreme_rec(sub, cap)) {
            Vector v = Vector::Zero(n);
            v.segment(at, sub.dim()) = piece;
            out.push_back(std::move(v));
        }
        at += sub.dim();
    }
    return out;
}

}  // namespace

std::size_t extreme_point_count(const Space& s) {
    if (!s.is_sum()) {
        if (s.dim() == 1 || s.q() == 1.0) return 2 * static_cast<std::size_t>(s.dim());
        return s.dim() >= 64 ? SIZE_MAX : std::size_t{1} << s.dim();
    }
    if (s.summands().size() == 1) return extreme_point_count(s.summands().front());
    std::size_t acc = std::isinf(s.q()) ? 1 : 0;
    for (const auto& sub : s.summands()) {
        const std::size_t c = extreme_point_count(sub);
        acc = std::isinf(s.q()) ? sat_mul(acc, c) : sat_add(acc, c);
    }
    return acc;
}

std::vector<Vector> extreme_points(const Space& space, EnumerationLimits limits) {
    require_exact(space);
    const std::size_t count = extreme_point_count(space);
    if (count > limits.cap)
        throw Error(ErrorCode::CapExceeded, std::to_string(count) + " extreme points exceed cap " +
                                                std::to_string(limits.cap));
    return extreme_rec(space, limits.cap);
}

// ---------------------------------------------------------------------------
// Norming functionals

namespace {

Scalar unit_phase_conj(Scalar z) { return std::conj(z) / std::abs(z); }

/// Finite selection of unit functionals for a block where x vanishes inside an
/// l_1-sum (any element of the dual ball norms it).
std::vector<Vector> dual_ball_choices(const Space& block, std::size_t cap, bool& complete) {
    const Space dual = dual_space(block);
    if (dual.admits_exact()) {
        if (extreme_point_count(dual) > cap)
            throw Error(ErrorCode::CapExceeded, "dual ball enumeration exceeds cap");
        return extreme_rec(dual, cap);
    }
    complete = false;
    std::vector<Vector> out;
    const int n = block.dim();
    std::vector<Scalar> phases{1.0, -1.0};
    if (block.is_complex()) {
        phases.emplace_back(0.0, 1.0);
        phases.emplace_back(0.0, -1.0);
    }
    for (int j = 0; j < n; ++j) {
        for (Scalar ph : phases) {
            Vector v = Vector::Zero(n);
            v[j] = ph;
            out.push_back(std::move(v));
        }
    }
    return out;
}

/// Extreme points of J(x) for one block, normalized so f(x) = ||x|| and ||f||_* = 1.
std::vector<Vector> functionals_rec(const Space& s, const Vector& x, std::size_t cap,
                                    bool& complete) {
    const int n = s.dim();
    if (!s.is_sum()) {
        const double q = s.q();
        if (n == 1) {
            Vector f(1);
            f[0] = unit_phase_conj(x[0]);
            return {f};
        }
        if (std::isinf(q)) {
            double m = 0.0;
            for (int j = 0; j < n; ++j) m = std::max(m, std::abs(x[j]));
            std::vector<Vector> out;
            for (int j = 0; j < n; ++j) {
                if (std::abs(x[j]) == m) {
                    Vector f = Vector::Zero(n);
                    f[j] = unit_phase_conj(x[j]);
                    out.push_back(std::move(f));
                }
            }
            return out;
        }
        if (q == 1.0) {
            std::vector<std::vector<Vector>> coords;
            for (int j = 0; j < n; ++j) {
                Vector c(1);
                if (x[j] != Scalar(0.0)) {
                    c[0] = unit_phase_conj(x[j]);
                    coords.push_back({c});
                    continue;
                }
                std::vector<Vector> choices;
                std::vector<Scalar> phases{1.0, -1.0};
                if (s.is_complex()) {
                    complete = false;
                    phases.emplace_back(0.0, 1.0);
                    phases.emplace_back(0.0, -1.0);
                }
                for (Scalar ph : phases) {
                    c[0] = ph;
                    choices.push_back(c);
                }
                coords.push_back(std::move(choices));
            }
            return block_product(coords, n, cap);
        }
        const double nx = norm_rec(s, x.data());
        Vector f = Vector::Zero(n);
        if (q == 2.0) {
            f = x.conjugate() / nx;
        } else {
            for (int j = 0; j < n; ++j) {
                const double a = std::abs(x[j]);
                if (a > 0.0) f[j] = unit_phase_conj(x[j]) * std::pow(a / nx, q - 1.0);
            }
        }
        return {f};
    }

    const auto& subs = s.summands();
    const std::vector<int> offs = s.offsets();
    std::vector<double> a(subs.size());
    for (std::size_t b = 0; b < subs.size(); ++b) a[b] = norm_rec(subs[b], x.data() + offs[b]);
    const double q = subs.size() == 1 ? 1.0 : s.q();

    if (std::isinf(q)) {
        const double m = *std::max_element(a.begin(), a.end());
        std::vector<Vector> out;
        for (std::size_t b = 0; b < subs.size(); ++b) {
            if (a[b] != m) continue;
            for (auto& piece : functionals_rec(subs[b], x.segment(offs[b], subs[b].dim()), cap,
                                               complete)) {
                Vector f = Vector::Zero(n);
                f.segment(offs[b], subs[b].dim()) = piece;
                out.push_back(std::move(f));
                if (out.size() > cap) throw Error(ErrorCode::CapExceeded, "norming functionals");
            }
        }
        return out;
    }

    const double total = p_aggregate(a.data(), a.size(), q);
    std::vector<std::vector<Vector>> blocks;
    for (std::size_t b = 0; b < subs.size(); ++b) {
        const int d = subs[b].dim();
        if (a[b] == 0.0) {
            if (q == 1.0) blocks.push_back(dual_ball_choices(subs[b], cap, complete));
            else blocks.push_back({Vector::Zero(d)});
            continue;
        }
        auto pieces = functionals_rec(subs[b], x.segment(offs[b], d), cap, complete);
        if (q != 1.0) {
            const double c = std::pow(a[b] / total, q - 1.0);
            for (auto& p : pieces) p *= c;
        }
        blocks.push_back(std::move(pieces));
    }
    return block_product(blocks, n, cap);
}

}  // namespace

FunctionalSet norming_functionals(const Space& space, const Vector& x, EnumerationLimits limits) {
    if (x.size() != space.dim()) throw Error(ErrorCode::DimensionMismatch, "norming_functionals");
    if (x.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "J(0) is undefined");
    FunctionalSet out;
    out.generators = functionals_rec(space, x, limits.cap, out.complete);
    return out;
}

std::vector<ExtremeFace> extreme_faces(const Space& space, EnumerationLimits limits) {
    std::vector<ExtremeFace> faces;
    std::size_t total = 0;
    for (auto& x : extreme_points(space, limits)) {
        ExtremeFace face;
        face.functionals = norming_functionals(space, x, limits).generators;
        total += face.functionals.size();
        if (total > limits.cap) throw Error(ErrorCode::CapExceeded, "G_X exceeds cap");
        face.x = std::move(x);
        faces.push_back(std::move(face));
    }
    return faces;
}

std::vector<NormingPair> extreme_norming_pairs(const Space& space, EnumerationLimits limits) {
    std::vector<NormingPair> pairs;
    for (auto& face : extreme_faces(space, limits)) {
        for (auto& f : face.functionals) pairs.push_back({face.x, std::move(f), true});
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

Vector random_extreme_rec(const Space& s, Rng& rng) {
    const int n = s.dim();
    Vector v = Vector::Zero(n);
    if (!s.is_sum()) {
        if (n == 1 || s.q() == 1.0) {
            v[static_cast<Eigen::Index>(rng.index(n))] = rng.coin() ? 1.0 : -1.0;
        } else {
            for (int j = 0; j < n; ++j) v[j] = rng.coin() ? 1.0 : -1.0;
        }
        return v;
    }
    const auto offs = s.offsets();
    const auto& subs = s.summands();
    if (std::isinf(s.q()) || subs.size() == 1) {
        for (std::size_t b = 0; b < subs.size(); ++b)
            v.segment(offs[b], subs[b].dim()) = random_extreme_rec(subs[b], rng);
        return v;
    }
    // Summand chosen with probability proportional to its extreme-point count.
    double total = 0.0;
    for (const auto& sub : subs) total += static_cast<double>(extreme_point_count(sub));
    double u = rng.uniform() * total;
    std::size_t b = 0;
    for (; b + 1 < subs.size(); ++b) {
        u -= static_cast<double>(extreme_point_count(subs[b]));
        if (u < 0.0) break;
    }
    v.segment(offs[b], subs[b].dim()) = random_extreme_rec(subs[b], rng);
    return v;
}

Scalar random_phase(const Space& s, Rng& rng) {
    if (!s.is_complex()) return rng.coin() ? 1.0 : -1.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
}

Vector random_functional_rec(const Space& s, const Vector& x, Rng& rng) {
    const int n = s.dim();
    if (!s.is_sum()) {
        if (n == 1) {
            Vector f(1);
            f[0] = unit_phase_conj(x[0]);
            return f;
        }
        if (std::isinf(s.q())) {
            double m = 0.0;
            for (int j = 0; j < n; ++j) m = std::max(m, std::abs(x[j]));
            std::vector<int> ties;
            for (int j = 0; j < n; ++j)
                if (std::abs(x[j]) == m) ties.push_back(j);
            const int j = ties[ties.size() == 1 ? 0 : rng.index(ties.size())];
            Vector f = Vector::Zero(n);
            f[j] = unit_phase_conj(x[j]);
            return f;
        }
        if (s.q() == 1.0) {
            Vector f(n);
            for (int j = 0; j < n; ++j)
                f[j] = x[j] != Scalar(0.0) ? unit_phase_conj(x[j]) : random_phase(s, rng);
            return f;
        }
        bool complete = true;
        return functionals_rec(s, x, SIZE_MAX, complete).front();
    }
    const auto& subs = s.summands();
    const auto offs = s.offsets();
    std::vector<double> a(subs.size());
    for (std::size_t b = 0; b < subs.size(); ++b) a[b] = norm_rec(subs[b], x.data() + offs[b]);
    const double q = subs.size() == 1 ? 1.0 : s.q();
    Vector f = Vector::Zero(n);
    if (std::isinf(q)) {
        const double m = *std::max_element(a.begin(), a.end());
        std::vector<std::size_t> ties;
        for (std::size_t b = 0; b < subs.size(); ++b)
            if (a[b] == m) ties.push_back(b);
        const std::size_t b = ties[ties.size() == 1 ? 0 : rng.index(ties.size())];
        f.segment(offs[b], subs[b].dim()) =
            random_functional_rec(subs[b], x.segment(offs[b], subs[b].dim()), rng);
        return f;
    }
    const double total = p_aggregate(a.data(), a.size(), q);
    for (std::size_t b = 0; b < subs.size(); ++b) {
        const int d = subs[b].dim();
        if (a[b] == 0.0) {
            if (q != 1.0) continue;
            const Space dual = dual_space(subs[b]);
            f.segment(offs[b], d) =
                dual.admits_exact() ? random_extreme_rec(dual, rng) : random_unit_vector(dual, rng);
            continue;
        }
        Vector piece = random_functional_rec(subs[b], x.segment(offs[b], d), rng);
        if (q != 1.0) piece *= std::pow(a[b] / total, q - 1.0);
        f.segment(offs[b], d) = piece;
    }
    return f;
}

}  // namespace

Vector random_extreme_point(const Space& space, Rng& rng) {
    if (!space.is_polyhedral())
        throw Error(ErrorCode::UnsupportedExact, space.describe() + " has infinitely many extreme points");
    return random_extreme_rec(space, rng);
}

Vector random_unit_vector(const Space& space, Rng& rng) {
    Vector v(space.dim());
    for (;;) {
        for (Eigen::Index i = 0; i < v.size(); ++i)
            v[i] = space.is_complex() ? rng.complex_gaussian() : Scalar(rng.gaussian(), 0.0);
        const double nv = norm_rec(space, v.data());
        if (nv > 0.0) return v / nv;
    }
}

Vector random_norming_functional(const Space& space, const Vector& x, Rng& rng) {
    if (x.size() != space.dim()) throw Error(ErrorCode::DimensionMismatch, "random functional");
    if (x.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "J(0) is undefined");
    return random_functional_rec(space, x, rng);
}

std::vector<NormingPair> sample_norming_pairs(const Space& space, std::size_t count,
                                              std::uint64_t seed) {
    std::vector<NormingPair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, i);
        Vector x = random_unit_vector(space, rng);
        Vector f = random_functional_rec(space, x, rng);
        out.push_back({std::move(x), std::move(f), false});
    }
    return out;
}

}  // namespace jointradius
