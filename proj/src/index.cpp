#include "jointradius/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace jointradius {

namespace {

void check_pk(double p, int k) {
    check_exponent(p);
    if (k < 1) throw Error(ErrorCode::InvalidK, "k must be >= 1");
}

/// k^{1/p}, which is 1 for p = inf.
double root_k(double p, int k) { return std::isinf(p) ? 1.0 : std::pow(static_cast<double>(k), 1.0 / p); }

bool outer_is_l1_or_inf(const Space& s) { return s.is_sum() && (s.q() == 1.0 || std::isinf(s.q())); }

bool close(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }

/// Summand whose witness is lifted for a direct-sum closed form.
struct SumRule {
    std::size_t slot;
    ClosedForm form;
};

std::optional<SumRule> sum_rule(const Space& space, double p, int k) {
    if (!outer_is_l1_or_inf(space)) return std::nullopt;
    const auto n = classical_index(space);
    if (!n) return std::nullopt;
    const auto& subs = space.summands();
    const double target = 1.0 / root_k(p, k);
    if (*n == 1.0) {
        for (std::size_t b = 0; b < subs.size(); ++b) {
            const auto cf = closed_form_index(subs[b], p, k);
            if (cf && close(cf->value, target))
                return SumRule{b, {target, "n(X) = 1 and n_{(p,k)}(X_b) = 1/k^{1/p} => n_{(p,k)}(X) = 1/k^{1/p}"}};
        }
    }
    std::optional<std::size_t> weakest;
    for (std::size_t b = 0; b < subs.size(); ++b) {
        const auto cf = closed_form_index(subs[b], p, k);
        const auto nb = classical_index(subs[b]);
        if (!cf || !nb || !close(cf->value, *nb / root_k(p, k))) return std::nullopt;
        if (!weakest || *nb < *classical_index(subs[*weakest])) weakest = b;
    }
    return SumRule{*weakest, {*n / root_k(p, k),
                              "n_{(p,k)}(X_b) = n(X_b)/k^{1/p} for all b => n_{(p,k)}(X) = n(X)/k^{1/p}"}};
}

Matrix unit_matrix(int n, int row, int col) {
    Matrix m = Matrix::Zero(n, n);
    m(row, col) = 1.0;
    return m;
}

/// Witness on a flattened l_q^m space; coordinates match the original descriptor.
std::vector<Matrix> flat_witness(const Space& flat, double p, int k, bool zero_index) {
    const int m = flat.dim();
    std::vector<Matrix> mats;
    if (zero_index) {
        if (m == 1) throw Error(ErrorCode::NoWitnessKnown, "no vanishing tuple on the scalar field");
        mats.push_back(unit_matrix(m, 0, 1) - unit_matrix(m, 1, 0));
        for (int i = 1; i < k; ++i) mats.push_back(Matrix::Zero(m, m));
        return mats;
    }
    if (k == 1) {
        // n(X) witnesses: the identity for n = 1, a nilpotent for complex Hilbert.
        if (flat.q() == 2.0 && flat.is_complex() && m >= 2) {
            mats.push_back(unit_matrix(m, 0, 1));
        } else {
            mats.push_back(Matrix::Identity(m, m));
        }
        return mats;
    }
    if (std::isinf(flat.q())) {
        const double s = 1.0 / root_k(p, k);
        for (int i = 0; i < k; ++i) mats.push_back(s * unit_matrix(m, i, i));
        return mats;
    }
    if (flat.q() == 1.0) {
        // Coordinate projections of l_inf^2 carried through U(a,b) = ((a+b)/2, (a-b)/2).
        Matrix u(2, 2), uinv(2, 2);
        u << 0.5, 0.5, 0.5, -0.5;
        uinv << 1.0, 1.0, 1.0, -1.0;
        const double s = 1.0 / root_k(p, 2);
        for (int i = 0; i < 2; ++i) {
            Matrix d = Matrix::Zero(2, 2);
            d(i, i) = 1.0;
            Matrix block = Matrix::Zero(m, m);
            block.topLeftCorner(2, 2) = s * u * d * uinv;
            mats.push_back(block);
        }
        return mats;
    }
    // Complex Hilbert.
    if (p == 2.0) {
        const double s = 1.0 / std::sqrt(static_cast<double>(k));
        for (int i = 0; i < k; ++i) mats.push_back(s * unit_matrix(m, i, m - 1));
        return mats;
    }
    const double s = 1.0 / root_k(p, 2);
    for (int i = 0; i < 2; ++i) mats.push_back(s * unit_matrix(m, i, 2));
    return mats;
}

}  // namespace

std::optional<double> classical_index(const Space& space) {
    if (auto flat = space.flattened()) {
        if (flat->dim() == 1) return 1.0;
        if (flat->q() == 1.0 || std::isinf(flat->q())) return 1.0;
        if (flat->q() == 2.0) return flat->is_complex() ? 0.5 : 0.0;
        return std::nullopt;
    }
    if (!outer_is_l1_or_inf(space)) return std::nullopt;
    double n = 1.0;
    for (const auto& sub : space.summands()) {
        const auto nb = classical_index(sub);
        if (!nb) return std::nullopt;
        n = std::min(n, *nb);
    }
    return n;
}

std::optional<ClosedForm> closed_form_index(const Space& space, double p, int k) {
    check_pk(p, k);
    const auto n = classical_index(space);
    if (k == 1) {
        if (n) return ClosedForm{*n, "n_{(p,1)}(X) = n(X)"};
        return std::nullopt;
    }
    if (n && *n == 0.0) return ClosedForm{0.0, "0 = n(X)/k^{1/p} <= n_{(p,k)}(X) <= n(X) = 0"};
    if (auto flat = space.flattened()) {
        const int m = flat->dim();
        const double q = flat->q();
        if (m == 1) return std::nullopt;
        if (std::isinf(q) && k <= m)
            return ClosedForm{1.0 / root_k(p, k), "n_{(p,k)}(l_inf^m) = 1/k^{1/p}, 1 <= k <= m"};
        if (q == 1.0 && k == 2 && !flat->is_complex())
            return ClosedForm{1.0 / root_k(p, 2), "n_{(p,2)}(l_1^m) = 1/2^{1/p}"};
        if (q == 2.0 && flat->is_complex() && m >= 3) {
            if (p == 2.0 && k < m)
                return ClosedForm{1.0 / (2.0 * std::sqrt(static_cast<double>(k))),
                                  "n_{(2,k)}(l_2^m) = 1/(2 sqrt(k)), 1 <= k < m"};
            if (k == 2 && p > 2.0)
                return ClosedForm{0.5 / root_k(p, 2), "n_{(p,2)}(l_2^m) = 1/2^{1+1/p}, p > 2"};
        }
        return std::nullopt;
    }
    if (auto rule = sum_rule(space, p, k)) return rule->form;
    return std::nullopt;
}

IndexBounds index_bounds(const Space& space, double p, int k) {
    check_pk(p, k);
    IndexBounds b;
    const auto n = classical_index(space);
    if (n) {
        b.lower = *n / root_k(p, k);
        b.lower_provenance = "n(X)/k^{1/p} <= n_{(p,k)}(X)";
    } else if (space.is_complex()) {
        b.lower = 1.0 / (std::numbers::e * root_k(p, k));
        b.lower_provenance = "n(X) >= 1/e (complex) with n(X)/k^{1/p} <= n_{(p,k)}(X)";
    } else {
        b.lower = 0.0;
        b.lower_provenance = "n_{(p,k)}(X) >= 0";
    }
    b.upper = 1.0;
    b.upper_provenance = "w_p(T) <= ||T||_p";
    auto offer = [&](double v, const std::string& why) {
        if (v < b.upper) {
            b.upper = v;
            b.upper_provenance = why;
        }
    };
    if (n) offer(*n, "n_{(p,k)}(X) <= n(X)");
    if (space.is_sum()) {
        for (const auto& sub : space.summands()) {
            const auto cf = closed_form_index(sub, p, k);
            offer(cf ? cf->value : index_bounds(sub, p, k).upper,
                  "n_{(p,k)}(X) <= inf n_{(p,k)}(X_b)");
        }
        const double q = space.q();
        if (space.summands().size() >= 2 && q > 1.0 && !std::isinf(q))
            offer(std::max(1.0 / q, 1.0 / conjugate_exponent(q)),
                  "n_{(p,k)}([X + Y]_q) <= max{1/q, 1/q'}");
    }
    return b;
}

OperatorTuple witness_tuple(const Space& space, double p, int k) {
    const auto cf = closed_form_index(space, p, k);
    if (!cf) throw Error(ErrorCode::NoWitnessKnown, "no closed form for " + space.describe());
    if (auto flat = space.flattened()) {
        auto mats = flat_witness(*flat, p, k, cf->value == 0.0);
        return OperatorTuple(std::move(mats), space);
    }
    // Lift from the summand the closed form rests on.
    std::size_t slot = 0;
    if (cf->value == 0.0 && k > 1) {
        const auto& subs = space.summands();
        while (slot < subs.size()) {
            const auto nb = classical_index(subs[slot]);
            if (nb && *nb == 0.0) break;
            ++slot;
        }
    } else if (k == 1) {
        const auto& subs = space.summands();
        for (std::size_t b = 1; b < subs.size(); ++b)
            if (*classical_index(subs[b]) < *classical_index(subs[slot])) slot = b;
    } else {
        slot = sum_rule(space, p, k)->slot;
    }
    return lift_direct_sum(witness_tuple(space.summands()[slot], p, k), space, slot);
}

double index_ratio(const OperatorTuple& tuple, double p, const OptimizeOptions& inner, bool* exact) {
    const auto nr = joint_operator_norm(tuple, p, Mode::Auto, inner);
    if (exact) *exact = nr.exact;
    if (nr.value == 0.0) return std::numeric_limits<double>::infinity();
    const auto wr = joint_numerical_radius(tuple, p, Mode::Auto, inner);
    if (exact) *exact = nr.exact && wr.exact;
    return wr.value / nr.value;
}

namespace {

class CompassSearch {
public:
    CompassSearch(double p, const IndexOptions& options, std::size_t& evaluations, bool& approx)
        : p_(p), options_(options), evaluations_(evaluations), approx_(approx) {}

    double ratio(const OperatorTuple& t) {
        bool exact = false;
        ++evaluations_;
        const double r = index_ratio(t, p_, options_.inner, &exact);
        if (!exact) approx_ = true;
        return r;
    }

    bool exhausted() const { return evaluations_ >= options_.budget; }

    /// Minimizes the ratio from `start`; `stop_at` ends the search early.
    std::pair<double, OperatorTuple> run(const OperatorTuple& start, double stop_at) {
        OperatorTuple cur = start;
        double cur_r = ratio(cur);
        const bool cplx = start.source().is_complex();
        const int k = start.k();
        const auto rows = start[0].rows();
        const auto cols = start[0].cols();
        double step = options_.initial_step;
        while (step >= options_.min_step && !exhausted() && cur_r > stop_at) {
            bool improved = false;
            for (int i = 0; i < k && !exhausted(); ++i) {
                for (Eigen::Index r = 0; r < rows && !exhausted(); ++r) {
                    for (Eigen::Index c = 0; c < cols && !exhausted(); ++c) {
                        for (int part = 0; part < (cplx ? 2 : 1) && !exhausted(); ++part) {
                            for (double sign : {1.0, -1.0}) {
                                if (exhausted()) break;
                                auto mats = cur.mats();
                                mats[i](r, c) += sign * step * (part == 0 ? Scalar(1.0) : Scalar(0.0, 1.0));
                                OperatorTuple trial(std::move(mats), cur.source(), cur.target());
                                const double tr = ratio(trial);
                                if (tr < cur_r) {
                                    cur = std::move(trial);
                                    cur_r = tr;
                                    improved = true;
                                    break;
                                }
                            }
                        }
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        return {cur_r, cur};
    }

private:
    double p_;
    const IndexOptions& options_;
    std::size_t& evaluations_;
    bool& approx_;
};

}  // namespace

IndexEstimate estimate_index(const Space& space, double p, int k, const IndexOptions& options) {
    check_pk(p, k);
    if (options.budget < 1) throw Error(ErrorCode::InvalidK, "budget must be >= 1");
    IndexEstimate est;
    est.seed = options.seed;
    const auto bounds = index_bounds(space, p, k);
    est.lower_bound = bounds.lower;
    est.upper_bound = bounds.upper;
    est.lower_provenance = bounds.lower_provenance;
    est.upper_provenance = bounds.upper_provenance;
    est.closed_form = closed_form_index(space, p, k);

    std::vector<OperatorTuple> starts;
    if (est.closed_form) starts.push_back(witness_tuple(space, p, k));
    for (const auto& t : options.extra_starts) {
        if (t.source() != space || t.target() != space || t.k() != k)
            throw Error(ErrorCode::ShapeMismatch, "extra start does not match (space, k)");
        starts.push_back(t);
    }
    for (int s = 0; s < options.random_starts; ++s)
        starts.push_back(random_tuple(space, k, options.seed, static_cast<std::uint64_t>(s)));

    CompassSearch search(p, options, est.evaluations, est.inner_approximate);
    const double stop_at = est.lower_bound + options.pinch_tol;
    double best = std::numeric_limits<double>::infinity();
    std::optional<OperatorTuple> best_tuple;
    for (const auto& start : starts) {
        if (search.exhausted() || best <= stop_at) break;
        auto [r, t] = search.run(start, stop_at);
        est.start_ratios.push_back(r);
        if (r < best) {
            best = r;
            best_tuple = std::move(t);
        }
    }
    est.estimate = best;
    if (best_tuple) {
        const double nrm = joint_operator_norm(*best_tuple, p, Mode::Auto, options.inner).value;
        est.witness = nrm > 0.0 ? best_tuple->scaled(1.0 / nrm) : *best_tuple;
    }
    est.pinched = std::isfinite(best) && best - est.lower_bound <= options.pinch_tol;
    est.method = std::string("compass search over matrix entries; inner ") +
                 (est.inner_approximate ? "optimize" : "exact");
    if (!est.closed_form) est.method += "; no closed form";
    return est;
}

DirectSumReport verify_direct_sum_theorems(const Space& space, double p, int k, std::size_t trials,
                                           std::uint64_t seed, std::size_t host_samples) {
    check_pk(p, k);
    if (!space.is_sum()) throw Error(ErrorCode::InvalidSpace, "direct-sum checks need a sum descriptor");
    DirectSumReport report;
    OptimizeOptions opts;
    opts.seed = seed;
    const auto& subs = space.summands();
    const auto host_pairs = sample_norming_pairs(space, host_samples, split_seed(seed, 0xd5));
    for (std::size_t slot = 0; slot < subs.size(); ++slot) {
        for (std::size_t t = 0; t < trials; ++t) {
            const auto a = random_tuple(subs[slot], k, seed, slot * trials + t);
            const auto z = lift_direct_sum(a, space, slot);
            DirectSumCheck c;
            c.slot = slot;
            c.trial = t;
            const auto ny = joint_operator_norm(a, p, Mode::Auto, opts);
            const auto nz = joint_operator_norm(z, p, Mode::Auto, opts);
            const auto wy = joint_numerical_radius(a, p, Mode::Auto, opts);
            const auto wz = joint_numerical_radius(z, p, Mode::Auto, opts);
            c.summand_norm = ny.value;
            c.host_norm = nz.value;
            c.summand_radius = wy.value;
            c.host_radius = wz.value;
            c.summand_exact = ny.exact && wy.exact;
            c.host_exact = nz.exact && wz.exact;
            const bool both = c.summand_exact && c.host_exact;
            c.tolerance = both ? 1e-10 : 1e-4;
            c.sample_margin = c.summand_exact ? 1e-10 : 1e-6;
            for (const auto& pair : host_pairs) {
                c.sampled_host_norm = std::max(c.sampled_host_norm, point_value(z, pair.x, p));
                c.sampled_host_radius = std::max(c.sampled_host_radius, pair_value(z, pair, p));
            }
            c.pass = std::abs(c.summand_norm - c.host_norm) <= c.tolerance &&
                     std::abs(c.summand_radius - c.host_radius) <= c.tolerance &&
                     c.sampled_host_norm <= c.summand_norm + c.sample_margin &&
                     c.sampled_host_radius <= c.summand_radius + c.sample_margin;
            report.pass = report.pass && c.pass;
            report.checks.push_back(c);
        }
    }
    return report;
}

}  // namespace jointradius
