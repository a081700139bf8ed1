#include "jointradius/jointcalc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "jointradius/parallel.hpp"

namespace jointradius {

const char* to_string(Mode mode) {
    switch (mode) {
        case Mode::Exact: return "exact";
        case Mode::Optimize: return "optimize";
        case Mode::Auto: return "auto";
    }
    return "auto";
}

void check_exponent(double p) {
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidExponent, "p must be >= 1");
}

double pair_value(const OperatorTuple& tuple, const Vector& x, const Vector& f, double p) {
    check_exponent(p);
    if (x.size() != tuple.source().dim() || f.size() != tuple.target().dim())
        throw Error(ErrorCode::DimensionMismatch, "pair does not match the tuple's spaces");
    std::vector<double> vals;
    vals.reserve(tuple.mats().size());
    for (const auto& m : tuple.mats()) vals.push_back(std::abs(pairing(f, m * x)));
    return p_aggregate(vals.data(), vals.size(), p);
}

double pair_value(const OperatorTuple& tuple, const NormingPair& pair, double p) {
    return pair_value(tuple, pair.x, pair.f, p);
}

double point_value(const OperatorTuple& tuple, const Vector& x, double p) {
    check_exponent(p);
    if (x.size() != tuple.source().dim())
        throw Error(ErrorCode::DimensionMismatch, "point does not match the tuple's source");
    std::vector<double> vals;
    vals.reserve(tuple.mats().size());
    for (const auto& m : tuple.mats()) vals.push_back(norm(tuple.target(), m * x));
    return p_aggregate(vals.data(), vals.size(), p);
}

namespace {

using FaceList = std::vector<ExtremeFace>;

/// G_X depends only on the descriptor, so enumerations are memoized.
std::shared_ptr<const FaceList> cached_faces(const Space& s, EnumerationLimits limits) {
    static std::mutex mutex;
    static std::map<std::string, std::shared_ptr<const FaceList>> cache;
    const std::string key = s.describe();
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) {
            std::size_t total = 0;
            for (const auto& face : *it->second) total += face.functionals.size();
            if (total > limits.cap) throw Error(ErrorCode::CapExceeded, "G_X exceeds cap");
            return it->second;
        }
    }
    auto faces = std::make_shared<const FaceList>(extreme_faces(s, limits));
    std::lock_guard lock(mutex);
    return cache.emplace(key, std::move(faces)).first->second;
}

void require_endomorphism(const OperatorTuple& tuple) {
    if (!tuple.is_endomorphism())
        throw Error(ErrorCode::NotEndomorphism, "the numerical radius needs source == target");
}

/// Objective on S_X with preallocated workspace. Radius mode also tracks the
/// norming functional attaining the value at the last evaluated point.
class Objective {
public:
    Objective(const OperatorTuple& tuple, double p, Quantity which)
        : tuple_(tuple), p_(p), which_(which), images_(tuple.mats().size()),
          values_(tuple.mats().size()) {
        for (auto& y : images_) y.resize(tuple.target().dim());
        if (auto flat = tuple.source().flattened();
            flat && (flat->is_smooth_factor() || flat->dim() == 1)) {
            smooth_q_ = flat->dim() == 1 ? 2.0 : flat->q();
        }
        functional_.resize(tuple.source().dim());
    }

    double operator()(const Vector& x) {
        ++evaluations;
        for (std::size_t i = 0; i < images_.size(); ++i) images_[i].noalias() = tuple_[i] * x;
        if (which_ == Quantity::Norm) {
            for (std::size_t i = 0; i < images_.size(); ++i)
                values_[i] = norm(tuple_.target(), images_[i].data());
            return p_aggregate(values_.data(), values_.size(), p_);
        }
        if (smooth_q_) {
            smooth_functional(x);
            return value_at(functional_);
        }
        const auto gens = norming_functionals(tuple_.source(), x).generators;
        double best = -1.0;
        for (const auto& f : gens) {
            const double v = value_at(f);
            if (v > best) {
                best = v;
                functional_ = f;
            }
        }
        return best;
    }

    const Vector& functional() const { return functional_; }

    std::size_t evaluations = 0;

private:
    double value_at(const Vector& f) {
        for (std::size_t i = 0; i < images_.size(); ++i) {
            Scalar s{0.0, 0.0};
            for (Eigen::Index j = 0; j < f.size(); ++j) s += f[j] * images_[i][j];
            values_[i] = std::abs(s);
        }
        return p_aggregate(values_.data(), values_.size(), p_);
    }

    void smooth_functional(const Vector& x) {
        const double q = *smooth_q_;
        const double nx = norm(tuple_.source(), x.data());
        if (q == 2.0) {
            functional_ = x.conjugate() / nx;
            return;
        }
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double a = std::abs(x[j]);
            functional_[j] = a > 0.0 ? std::conj(x[j]) / a * std::pow(a / nx, q - 1.0) : Scalar(0.0);
        }
    }

    const OperatorTuple& tuple_;
    double p_;
    Quantity which_;
    std::optional<double> smooth_q_;
    std::vector<Vector> images_;
    std::vector<double> values_;
    Vector functional_;
};

struct StartOutcome {
    double value = -1.0;
    Vector x;
    Vector f;
    std::size_t evaluations = 0;
};

/// Vertices of the smallest face of B_X containing x/||x|| (real polyhedral
/// spaces). Coordinates within `tol` of a face boundary count as on it. Returns
/// an empty list past `cap` vertices.
void face_vertices_rec(const Space& space, const Scalar* x, double scale, double tol, std::size_t cap,
                       std::vector<Vector>& out) {
    const int n = space.dim();
    out.clear();
    if (!space.is_sum()) {
        if (n == 1 || space.q() == 1.0) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(x[j].real()) <= tol * scale) continue;
                Vector v = Vector::Zero(n);
                v[j] = x[j].real() > 0.0 ? 1.0 : -1.0;
                out.push_back(std::move(v));
            }
            return;
        }
        out.push_back(Vector::Zero(n));
        for (int j = 0; j < n; ++j) {
            const double a = x[j].real();
            const bool pinned = std::abs(std::abs(a) - scale) <= tol * scale;
            const std::size_t size = out.size();
            if (!pinned && size * 2 > cap) {
                out.clear();
                return;
            }
            for (std::size_t i = 0; i < size; ++i) {
                if (pinned) {
                    out[i][j] = a > 0.0 ? 1.0 : -1.0;
                } else {
                    Vector w = out[i];
                    out[i][j] = 1.0;
                    w[j] = -1.0;
                    out.push_back(std::move(w));
                }
            }
        }
        return;
    }
    const auto offsets = space.offsets();
    const auto& parts = space.summands();
    std::vector<std::vector<Vector>> blocks(parts.size());
    for (std::size_t s = 0; s < parts.size(); ++s) {
        const Scalar* xs = x + offsets[s];
        const double ns = norm(parts[s], xs);
        if (std::isinf(space.q())) {
            if (std::abs(ns - scale) <= tol * scale) {
                face_vertices_rec(parts[s], xs, ns, tol, cap, blocks[s]);
            } else if (extreme_point_count(parts[s]) <= cap) {
                blocks[s] = extreme_points(parts[s]);
            }
        } else if (ns > tol * scale) {
            face_vertices_rec(parts[s], xs, ns, tol, cap, blocks[s]);
        }
    }
    if (std::isinf(space.q())) {
        out.push_back(Vector::Zero(n));
        for (std::size_t s = 0; s < parts.size(); ++s) {
            if (blocks[s].empty() || out.size() * blocks[s].size() > cap) {
                out.clear();
                return;
            }
            std::vector<Vector> next;
            next.reserve(out.size() * blocks[s].size());
            for (const auto& v : out)
                for (const auto& b : blocks[s]) {
                    Vector w = v;
                    w.segment(offsets[s], parts[s].dim()) = b;
                    next.push_back(std::move(w));
                }
            out = std::move(next);
        }
        return;
    }
    for (std::size_t s = 0; s < parts.size(); ++s)
        for (const auto& b : blocks[s]) {
            if (out.size() >= cap) {
                out.clear();
                return;
            }
            Vector w = Vector::Zero(n);
            w.segment(offsets[s], parts[s].dim()) = b;
            out.push_back(std::move(w));
        }
}

class SphereAscent {
public:
    SphereAscent(const Space& space, Objective& objective, const OptimizeOptions& options)
        : space_(space), objective_(objective), options_(options),
          params_(space.is_complex() ? 2 * space.dim() : space.dim()) {}

    StartOutcome run(Vector x) {
        budget_ = objective_.evaluations + options_.max_evaluations_per_start;
        x = normalized(x);
        double v = objective_(x);
        gradient_ascent(x, v);
        polish(x, v);
        // On a polytope the objective is convex along each face, so the best
        // vertex of the face reached is at least as good; resume from there.
        for (int round = 0; round < 4 && vertex_round(x, v) && !exhausted(); ++round) {
            gradient_ascent(x, v);
            polish(x, v);
        }
        StartOutcome out;
        out.value = objective_(x);
        out.x = x;
        out.f = objective_.functional();
        return out;
    }

private:
    Vector normalized(const Vector& x) const { return x / norm(space_, x.data()); }

    bool exhausted() const { return objective_.evaluations >= budget_; }

    /// Gains below the rounding floor are noise, not progress.
    static bool gains(double candidate, double current) {
        return candidate > current + 1e-14 * std::max(1.0, std::abs(current));
    }

    Scalar unit(int j) const { return j < space_.dim() ? Scalar(1.0, 0.0) : Scalar(0.0, 1.0); }
    int coord(int j) const { return j < space_.dim() ? j : j - space_.dim(); }

    double shifted_value(const Vector& x, int j, double h) {
        Vector y = x;
        y[coord(j)] += h * unit(j);
        return objective_(normalized(y));
    }

    void gradient_ascent(Vector& x, double& v) {
        constexpr double h = 1e-7;
        double step = 0.1;
        Vector dir(space_.dim());
        for (int iter = 0; iter < options_.max_iterations && !exhausted(); ++iter) {
            dir.setZero();
            double gnorm = 0.0;
            for (int j = 0; j < params_; ++j) {
                const double g = (shifted_value(x, j, h) - shifted_value(x, j, -h)) / (2.0 * h);
                dir[coord(j)] += g * unit(j);
                gnorm += g * g;
            }
            gnorm = std::sqrt(gnorm);
            if (!(gnorm > 0.0)) return;
            dir /= gnorm;
            step = std::min(2.0 * step, 0.5);
            bool improved = false;
            Vector trial;
            double tv = v;
            while (step >= 1e-12 && !exhausted()) {
                trial = normalized(x + step * dir);
                tv = objective_(trial);
                if (gains(tv, v)) {
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) return;
            const double moved = (trial - x).norm();
            const double gain = tv - v;
            x = trial;
            v = tv;
            if (moved < options_.move_tol || gain < options_.improve_tol) return;
        }
    }

    bool vertex_round(Vector& x, double& v) {
        if (!space_.admits_exact()) return false;
        std::vector<Vector> vertices;
        face_vertices_rec(space_, x.data(), norm(space_, x.data()), 1e-6, 4096, vertices);
        bool moved = false;
        for (const auto& c : vertices) {
            const double tv = objective_(c);
            if (gains(tv, v)) {
                x = c;
                v = tv;
                moved = true;
            }
        }
        return moved;
    }

    void polish(Vector& x, double& v) {
        for (double step = options_.polish_step; step >= options_.polish_min_step && !exhausted();) {
            const double sweep_start = v;
            for (int j = 0; j < params_ && !exhausted(); ++j) {
                for (double sign : {1.0, -1.0}) {
                    Vector y = x;
                    y[coord(j)] += sign * step * unit(j);
                    y = normalized(y);
                    const double tv = objective_(y);
                    if (gains(tv, v)) {
                        x = y;
                        v = tv;
                    }
                }
            }
            // Creeping along a ridge at this step size is not worth another sweep.
            if (v - sweep_start <= options_.improve_tol * std::max(1.0, std::abs(v))) step *= 0.5;
        }
    }

    const Space& space_;
    Objective& objective_;
    const OptimizeOptions& options_;
    int params_;
    std::size_t budget_ = 0;
};

/// Signed basis directions first (times i for complex fields as well), then
/// `starts` seeded random unit vectors.
std::vector<Vector> start_points(const Space& space, const OptimizeOptions& options) {
    std::vector<Vector> starts;
    const int n = space.dim();
    for (int j = 0; j < n; ++j) {
        for (double sign : {1.0, -1.0}) {
            Vector e = Vector::Zero(n);
            e[j] = sign;
            starts.push_back(std::move(e));
        }
    }
    for (int s = 0; s < options.starts; ++s) {
        Rng rng(options.seed, static_cast<std::uint64_t>(s));
        starts.push_back(random_unit_vector(space, rng));
    }
    return starts;
}

StartOutcome optimize(const OperatorTuple& tuple, double p, Quantity which,
                      const OptimizeOptions& options, std::size_t& evaluations) {
    const auto starts = start_points(tuple.source(), options);
    std::vector<StartOutcome> outcomes(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        Objective objective(tuple, p, which);
        SphereAscent ascent(tuple.source(), objective, options);
        outcomes[i] = ascent.run(starts[i]);
        outcomes[i].evaluations = objective.evaluations;
    });
    std::size_t best = 0;
    evaluations = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        evaluations += outcomes[i].evaluations;
        if (outcomes[i].value > outcomes[best].value) best = i;
    }
    return outcomes[best];
}

bool hilbert_factor(const Space& s) {
    auto flat = s.flattened();
    return flat && (flat->dim() == 1 || flat->q() == 2.0);
}

}  // namespace

bool exact_norm_admissible(const Space& source, EnumerationLimits limits) {
    return source.admits_exact() && extreme_point_count(source) <= limits.cap;
}

bool exact_radius_admissible(const Space& space, EnumerationLimits limits) {
    if (!exact_norm_admissible(space, limits)) return false;
    try {
        cached_faces(space, limits);
        return true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CapExceeded) return false;
        throw;
    }
}

double operator_norm(const Matrix& m, const Space& source, const Space& target,
                     const OptimizeOptions& options) {
    if (hilbert_factor(source) && hilbert_factor(target)) {
        if (m.size() == 0) return 0.0;
        Eigen::JacobiSVD<Matrix> svd(m);
        return svd.singularValues()(0);
    }
    OptimizeOptions inner = options;
    inner.upper_bound = false;
    return joint_operator_norm(OperatorTuple({m}, source, target), 1.0, Mode::Auto, inner).value;
}

ComputationResult joint_operator_norm(const OperatorTuple& tuple, double p, Mode mode,
                                      const OptimizeOptions& options) {
    check_exponent(p);
    const Space& source = tuple.source();
    const bool exact_ok = exact_norm_admissible(source, options.limits);
    if (mode == Mode::Exact && !exact_ok) {
        if (source.admits_exact()) extreme_points(source, options.limits);  // throws CapExceeded
        throw Error(ErrorCode::UnsupportedExact, source.describe() + " has no finite extreme set");
    }
    ComputationResult result;
    if (mode != Mode::Optimize && exact_ok) {
        const auto faces = cached_faces(source, options.limits);
        Objective objective(tuple, p, Quantity::Norm);
        std::size_t best = 0;
        double best_value = -1.0;
        for (std::size_t i = 0; i < faces->size(); ++i) {
            const double v = objective((*faces)[i].x);
            if (v > best_value) {
                best_value = v;
                best = i;
            }
        }
        result.value = best_value;
        result.certificate.x = (*faces)[best].x;
        result.exact = true;
        result.evaluations = objective.evaluations;
        return result;
    }
    std::size_t evaluations = 0;
    auto outcome = optimize(tuple, p, Quantity::Norm, options, evaluations);
    result.value = outcome.value;
    result.certificate.x = std::move(outcome.x);
    result.evaluations = evaluations;
    if (options.upper_bound) {
        std::vector<double> norms;
        for (const auto& m : tuple.mats())
            norms.push_back(operator_norm(m, source, tuple.target(), options));
        result.upper_bound = p_aggregate(norms.data(), norms.size(), p);
    }
    return result;
}

ComputationResult joint_numerical_radius(const OperatorTuple& tuple, double p, Mode mode,
                                         const OptimizeOptions& options) {
    check_exponent(p);
    require_endomorphism(tuple);
    const Space& space = tuple.source();
    if (mode == Mode::Exact && !space.admits_exact())
        throw Error(ErrorCode::UnsupportedExact, space.describe() + " has no finite G_X");
    bool exact_ok = false;
    if (mode == Mode::Exact) {
        cached_faces(space, options.limits);  // throws CapExceeded
        exact_ok = true;
    } else if (mode == Mode::Auto) {
        exact_ok = exact_radius_admissible(space, options.limits);
    }

    ComputationResult result;
    if (exact_ok) {
        const auto faces = cached_faces(space, options.limits);
        std::vector<Vector> images(tuple.mats().size());
        std::vector<double> vals(tuple.mats().size());
        double best_value = -1.0;
        const ExtremeFace* best_face = nullptr;
        const Vector* best_f = nullptr;
        for (const auto& face : *faces) {
            for (std::size_t i = 0; i < images.size(); ++i) images[i].noalias() = tuple[i] * face.x;
            for (const auto& f : face.functionals) {
                for (std::size_t i = 0; i < images.size(); ++i)
                    vals[i] = std::abs(f.dot(images[i].conjugate()));
                const double v = p_aggregate(vals.data(), vals.size(), p);
                ++result.evaluations;
                if (v > best_value) {
                    best_value = v;
                    best_face = &face;
                    best_f = &f;
                }
            }
        }
        result.value = best_value;
        result.certificate = {best_face->x, *best_f, true};
        result.exact = true;
        return result;
    }

    std::size_t evaluations = 0;
    auto outcome = optimize(tuple, p, Quantity::Radius, options, evaluations);
    result.value = outcome.value;
    result.certificate = {std::move(outcome.x), std::move(outcome.f), false};
    result.evaluations = evaluations;
    if (options.sample_pairs > 0) {
        const auto pairs = sample_norming_pairs(space, options.sample_pairs,
                                                split_seed(options.seed, 0x5a4d504c45ULL));
        double best = 0.0;
        const NormingPair* best_pair = nullptr;
        for (const auto& pair : pairs) {
            const double v = pair_value(tuple, pair, p);
            if (v > best) {
                best = v;
                best_pair = &pair;
            }
        }
        result.sampled_lower_bound = best;
        result.evaluations += pairs.size();
        if (best_pair && best > result.value) {
            result.value = best;
            result.certificate = {best_pair->x, best_pair->f, false};
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Grid oracle

namespace {

/// Trigonometric rounding leaves 6e-17 where an axis point has a zero and
/// unequal moduli on a diagonal; both change J(x) on polyhedral spaces.
Vector snap_grid_point(Vector v) {
    const double m = v.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double a = std::abs(v[j]);
        if (a <= 1e-12 * m)
            v[j] = 0.0;
        else if (a >= (1.0 - 1e-12) * m)
            v[j] *= m / a;
    }
    return v;
}

double grid_point_value(const OperatorTuple& tuple, const Vector& raw, double p, Quantity which) {
    const Vector snapped = snap_grid_point(raw);
    const Vector x = snapped / norm(tuple.source(), snapped);
    if (which == Quantity::Norm) return point_value(tuple, x, p);
    double best = 0.0;
    for (const auto& f : norming_functionals(tuple.source(), x).generators)
        best = std::max(best, pair_value(tuple, x, f, p));
    return best;
}

}  // namespace

double grid_oracle(const OperatorTuple& tuple, double p, Quantity which, double resolution) {
    check_exponent(p);
    if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidExponent, "resolution must be positive");
    if (which == Quantity::Radius) require_endomorphism(tuple);
    const Space& s = tuple.source();
    const int n = s.dim();
    const bool cplx = s.is_complex();
    if ((!cplx && n > 3) || (cplx && n > 2))
        throw Error(ErrorCode::DimensionTooLarge,
                    "grid oracle supports real dim <= 3 and complex dim <= 2");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    double best = 0.0;
    auto visit = [&](const Vector& v) { best = std::max(best, grid_point_value(tuple, v, p, which)); };

    if (n == 1) {
        Vector v(1);
        for (double sign : {1.0, -1.0}) {
            v[0] = sign;
            visit(v);
        }
        return best;
    }
    // Step counts are rounded up so the grid contains the axes and diagonals,
    // where the vertices of l1 and l_inf balls sit.
    auto steps = [resolution](double span, long multiple) {
        const auto n = static_cast<long>(std::ceil(span / resolution));
        return (n + multiple - 1) / multiple * multiple;
    };
    const long around = steps(two_pi, 8);
    if (!cplx && n == 2) {
        Vector v(2);
        for (long a = 0; a < around; ++a) {
            const double t = two_pi * static_cast<double>(a) / static_cast<double>(around);
            v << std::cos(t), std::sin(t);
            visit(v);
        }
        return best;
    }
    if (!cplx) {
        const long polar = steps(std::numbers::pi, 4);
        Vector v(3);
        for (long b = 0; b <= polar; ++b) {
            const double th = std::numbers::pi * static_cast<double>(b) / static_cast<double>(polar);
            const long ring = (b == 0 || b == polar) ? 1 : around;
            for (long a = 0; a < ring; ++a) {
                const double ph = two_pi * static_cast<double>(a) / static_cast<double>(around);
                v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
                visit(v);
            }
        }
        return best;
    }
    // Complex C^2: a global phase changes neither objective, so x = (cos t, e^{ib} sin t).
    const long quarter = steps(0.5 * std::numbers::pi, 2);
    Vector v(2);
    for (long a = 0; a <= quarter; ++a) {
        const double t = 0.5 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(quarter);
        const long ring = (a == 0 || a == quarter) ? 1 : around;
        for (long b = 0; b < ring; ++b) {
            const double ph = two_pi * static_cast<double>(b) / static_cast<double>(around);
            v << std::cos(t), std::polar(std::sin(t), ph);
            visit(v);
        }
    }
    return best;
}

AdjointReport verify_adjoint_radius(const OperatorTuple& tuple, double p,
                                    const OptimizeOptions& options) {
    require_endomorphism(tuple);
    const auto direct = joint_numerical_radius(tuple, p, Mode::Auto, options);
    const auto dual = joint_numerical_radius(adjoint(tuple), p, Mode::Auto, options);
    AdjointReport report;
    report.radius = direct.value;
    report.adjoint_radius = dual.value;
    report.difference = std::abs(direct.value - dual.value);
    report.both_exact = direct.exact && dual.exact;
    report.tolerance = report.both_exact ? 1e-10 : 1e-3;
    report.pass = report.difference <= report.tolerance;
    return report;
}

}  // namespace jointradius
