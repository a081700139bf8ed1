#include "jointradius/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "jointradius/index.hpp"
#include "jointradius/operators.hpp"
#include "jointradius/parallel.hpp"

namespace jointradius {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string exponent_label(double p) { return std::isinf(p) ? "inf" : fmt(p); }

std::string case_label(const Space& s, double p, int k) {
    return s.describe() + " p=" + exponent_label(p) + " k=" + std::to_string(k);
}

struct TrialOutcome {
    bool exact = true;
    double ratio = 0.0;
    std::string failure;
};

TrialOutcome one_trial(const Space& space, double p, int k, std::uint64_t seed, std::size_t t,
                       double lower, const OptimizeOptions& options) {
    TrialOutcome out;
    const auto a = random_tuple(space, k, seed, 2 * t);
    const auto b = random_tuple(space, k, seed, 2 * t + 1);
    auto norm_of = [&](const OperatorTuple& x, double q) {
        const auto r = joint_operator_norm(x, q, Mode::Auto, options);
        out.exact = out.exact && r.exact;
        return r.value;
    };
    auto radius_of = [&](const OperatorTuple& x, double q) {
        const auto r = joint_numerical_radius(x, q, Mode::Auto, options);
        out.exact = out.exact && r.exact;
        return r.value;
    };
    const double n = norm_of(a, p);
    const double w = radius_of(a, p);
    const double p2 = p + 1.0;
    const double n2 = norm_of(a, p2);
    const double w2 = radius_of(a, p2);
    std::vector<double> wi, ni;
    for (int i = 0; i < k; ++i) {
        const OperatorTuple single({a[static_cast<std::size_t>(i)]}, space);
        wi.push_back(radius_of(single, 1.0));
        ni.push_back(norm_of(single, 1.0));
    }
    const Scalar c = space.is_complex() ? std::polar(1.7, 0.9) : Scalar(-1.7);
    const double nc = norm_of(a.scaled(c), p);
    const double wc = radius_of(a.scaled(c), p);
    const auto sum = combine(a, b, 1.0, 1.0);
    const double nb = norm_of(b, p);
    const double wb = radius_of(b, p);
    const double ns = norm_of(sum, p);
    const double ws = radius_of(sum, p);

    const double tol = (out.exact ? 1e-12 : 1e-6) * std::max(1.0, n + nb);
    const double ratio_tol = out.exact ? 1e-9 : 1e-6;
    out.ratio = w / n;
    auto require = [&](bool cond, const std::string& what) {
        if (!cond && out.failure.empty()) out.failure = "trial " + std::to_string(t) + ": " + what;
    };
    require(w <= n + tol, "w_p(T) <= ||T||_p");
    require(*std::max_element(wi.begin(), wi.end()) <= w + tol, "max w(T_i) <= w_p(T)");
    require(w <= p_aggregate(wi.data(), wi.size(), p) + tol, "w_p(T) <= (sum w(T_i)^p)^{1/p}");
    require(*std::max_element(ni.begin(), ni.end()) <= n + tol, "max ||T_i|| <= ||T||_p");
    require(n <= p_aggregate(ni.data(), ni.size(), p) + tol, "||T||_p <= (sum ||T_i||^p)^{1/p}");
    require(w2 <= w + tol && n2 <= n + tol, "p1 <= p2 => w_{p2} <= w_{p1}, ||T||_{p2} <= ||T||_{p1}");
    require(std::abs(nc - std::abs(c) * n) <= std::abs(c) * tol &&
                std::abs(wc - std::abs(c) * w) <= std::abs(c) * tol,
            "homogeneity |c| w_p(T) = w_p(cT)");
    require(ws <= w + wb + tol && ns <= n + nb + tol, "triangle inequality");
    require(out.ratio >= lower - ratio_tol, "w_p(T)/||T||_p >= n(X)/k^{1/p}");
    return out;
}

}  // namespace

PropertyOutcome check_tuple_properties(const Space& space, double p, int k, std::size_t trials,
                                       std::uint64_t seed, const OptimizeOptions& options) {
    PropertyOutcome out;
    out.lower_bound = index_bounds(space, p, k).lower;
    out.tuples = trials;
    std::vector<TrialOutcome> results(trials);
    auto body = [&](std::size_t t) {
        results[t] = one_trial(space, p, k, seed, t, out.lower_bound, options);
    };
    // Exact trials are cheap and independent; optimized ones parallelize internally.
    if (space.admits_exact()) {
        parallel_for(trials, body);
    } else {
        for (std::size_t t = 0; t < trials; ++t) body(t);
    }
    out.min_ratio = trials ? results.front().ratio : 0.0;
    for (const auto& r : results) {
        out.exact = out.exact && r.exact;
        out.min_ratio = std::min(out.min_ratio, r.ratio);
        if (!r.failure.empty()) {
            ++out.failures;
            if (out.first_failure.empty()) out.first_failure = r.failure;
        }
    }
    out.tolerance = out.exact ? 1e-12 : 1e-6;
    return out;
}

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names = {"bounds", "adjoint", "directsum", "closedforms"};
    return names;
}

namespace {

std::vector<CheckLine> bounds_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<CheckLine> lines;
    const std::vector<Space> spaces = {Space::lq(1.0, 3), Space::lq(kInf, 3),
                                       Space::lq(2.0, 3, Field::Complex)};
    OptimizeOptions opts;
    opts.starts = 16;
    opts.sample_pairs = 0;
    opts.upper_bound = false;
    opts.seed = seed;
    for (const auto& s : spaces) {
        for (double p : {1.0, 2.0}) {
            for (int k = 1; k <= 3; ++k) {
                const auto r = check_tuple_properties(s, p, k, trials, seed, opts);
                CheckLine line;
                line.ok = r.failures == 0;
                line.description = "bounds " + case_label(s, p, k) + ": " + std::to_string(r.tuples) +
                                   " random tuples, min ratio " + fmt(r.min_ratio);
                line.anchor = "n(X)/k^{1/p} <= n_{(p,k)}(X) <= n(X)";
                line.detail = r.failures ? r.first_failure
                                         : std::string(r.exact ? "exact" : "optimized") + ", tol " +
                                               fmt(r.tolerance);
                lines.push_back(std::move(line));
            }
        }
    }
    return lines;
}

std::vector<CheckLine> adjoint_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<CheckLine> lines;
    struct Case {
        Space space;
        double p;
        std::size_t trials;
    };
    const std::vector<Case> cases = {
        {Space::lq(1.0, 3), 1.0, trials},
        {Space::lq(1.0, 3), 2.0, trials},
        {Space::lq(kInf, 3), 2.0, trials},
        {Space::lq(2.0, 2, Field::Complex), 2.0, std::min<std::size_t>(trials, 5)},
    };
    for (const auto& c : cases) {
        double worst = 0.0;
        double tol = 0.0;
        bool ok = true;
        OptimizeOptions opts;
        opts.seed = seed;
        for (std::size_t t = 0; t < c.trials; ++t) {
            const auto rep = verify_adjoint_radius(random_tuple(c.space, 2, seed, t), c.p, opts);
            worst = std::max(worst, rep.difference);
            tol = std::max(tol, rep.tolerance);
            ok = ok && rep.pass;
        }
        lines.push_back({ok,
                         "adjoint " + case_label(c.space, c.p, 2) + ": " + std::to_string(c.trials) +
                             " tuples, max |w_p(T) - w_p(T*)| = " + fmt(worst),
                         "w_p(T) = w_p(T*) (reflexive X)", "tol " + fmt(tol)});
    }
    // The norm is not self-dual: diagonal projections on l_inf^4 against l_1^4.
    std::vector<Matrix> mats;
    for (int i = 0; i < 3; ++i) {
        Matrix m = Matrix::Zero(4, 4);
        m(i, i) = 1.0;
        mats.push_back(m);
    }
    const OperatorTuple diag(mats, Space::lq(kInf, 4));
    const double n = joint_operator_norm(diag, 2.0, Mode::Exact).value;
    const double na = joint_operator_norm(adjoint(diag), 2.0, Mode::Exact).value;
    lines.push_back({std::abs(n - std::sqrt(3.0)) <= 1e-12 && std::abs(na - 1.0) <= 1e-12,
                     "adjoint l_inf^4 diagonal projections k=3 p=2: ||T||_2 = " + fmt(n) +
                         ", ||T*||_2 = " + fmt(na),
                     "||T*||_p = 1 != ||T||_p", "exact, tol 1e-12"});
    return lines;
}

std::vector<CheckLine> directsum_suite(std::uint64_t seed, std::size_t trials) {
    std::vector<CheckLine> lines;
    const Space l1_2 = Space::lq(1.0, 2);
    const std::vector<Space> hosts = {Space::direct_sum({l1_2, Space::lq(2.0, 2)}, kInf),
                                      Space::direct_sum({l1_2, l1_2}, 1.0)};
    for (const auto& host : hosts) {
        for (double p : {1.0, 2.0}) {
            const auto rep = verify_direct_sum_theorems(host, p, 2, trials, seed);
            double worst = 0.0;
            std::string failure;
            for (const auto& c : rep.checks) {
                worst = std::max({worst, std::abs(c.summand_norm - c.host_norm),
                                  std::abs(c.summand_radius - c.host_radius)});
                if (!c.pass && failure.empty())
                    failure = "slot " + std::to_string(c.slot) + " trial " + std::to_string(c.trial);
            }
            lines.push_back({rep.pass,
                             "directsum " + case_label(host, p, 2) + ": " +
                                 std::to_string(rep.checks.size()) + " lifted tuples, max gap " + fmt(worst),
                             "||T_Z||_p = ||T_Y||_p, w_p(T_Z) = w_p(T_Y)", failure});
        }
    }
    // [l1^2 + l1^2]_1 is l1^4 by coordinate identity.
    const Space l1_4 = Space::lq(1.0, 4);
    double gap = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const auto z = lift_direct_sum(random_tuple(l1_2, 2, seed, t), hosts[1], t % 2);
        const OperatorTuple flat(z.mats(), l1_4);
        gap = std::max({gap,
                        std::abs(joint_numerical_radius(z, 2.0, Mode::Exact).value -
                                 joint_numerical_radius(flat, 2.0, Mode::Exact).value),
                        std::abs(joint_operator_norm(z, 2.0, Mode::Exact).value -
                                 joint_operator_norm(flat, 2.0, Mode::Exact).value)});
    }
    lines.push_back({gap == 0.0, "directsum [l1^2 + l1^2]_1 against l1^4: max gap " + fmt(gap),
                     "[l1^2 + l1^2]_1 = l1^4", "exact, bit-identical"});
    const auto bq = index_bounds(Space::direct_sum({Space::lq(3.0, 2), Space::lq(kInf, 2)}, 2.0), 2.0, 2);
    lines.push_back({bq.upper <= 0.5, "directsum [l3^2 + l_inf^2]_2 upper bound " + fmt(bq.upper),
                     "n_{(p,k)}([X + Y]_q) <= max{1/q, 1/q'}", bq.upper_provenance});
    const auto bi = index_bounds(Space::direct_sum({Space::lq(kInf, 2), Space::lq(1.0, 3)}, kInf), 2.0, 2);
    lines.push_back({bi.upper <= std::sqrt(0.5) + 1e-15,
                     "directsum [l_inf^2 + l1^3]_inf upper bound " + fmt(bi.upper),
                     "n_{(p,k)}(X) <= inf n_{(p,k)}(X_b)", bi.upper_provenance});
    return lines;
}

std::vector<CheckLine> closedforms_suite(std::uint64_t seed) {
    std::vector<CheckLine> lines;
    struct Case {
        Space space;
        double p;
        int k;
    };
    std::vector<Case> cases;
    for (double p : {1.0, 2.0, 3.0})
        for (int k = 1; k <= 4; ++k) cases.push_back({Space::lq(kInf, 4), p, k});
    for (double p : {1.0, 2.0, 4.0}) cases.push_back({Space::lq(1.0, 3), p, 2});
    const Space c3 = Space::lq(2.0, 3, Field::Complex);
    cases.push_back({c3, 2.0, 1});
    cases.push_back({c3, 2.0, 2});
    cases.push_back({c3, 3.0, 2});
    cases.push_back({c3, 4.0, 2});
    cases.push_back({Space::lq(2.0, 3), 2.0, 2});
    cases.push_back({Space::direct_sum({Space::lq(kInf, 3), Space::lq(1.0, 2)}, 1.0), 2.0, 3});
    cases.push_back({Space::direct_sum({Space::lq(kInf, 2), Space::lq(1.0, 2)}, kInf), 2.0, 2});

    OptimizeOptions opts;
    opts.seed = seed;
    for (const auto& c : cases) {
        const auto cf = closed_form_index(c.space, c.p, c.k);
        const auto bounds = index_bounds(c.space, c.p, c.k);
        CheckLine line;
        line.anchor = cf ? cf->citation : "closed form";
        if (!cf) {
            line.description = "closedforms " + case_label(c.space, c.p, c.k) + ": missing";
            lines.push_back(line);
            continue;
        }
        const auto w = witness_tuple(c.space, c.p, c.k);
        const auto nr = joint_operator_norm(w, c.p, Mode::Auto, opts);
        const auto wr = joint_numerical_radius(w, c.p, Mode::Auto, opts);
        const bool exact = nr.exact && wr.exact;
        const double tol = exact ? 1e-12 : 1e-4;
        const double ratio = wr.value / nr.value;
        line.ok = std::abs(nr.value - 1.0) <= (exact ? 1e-12 : 1e-6) && std::abs(ratio - cf->value) <= tol &&
                  bounds.lower - 1e-9 <= cf->value && cf->value <= bounds.upper + 1e-9;
        line.description = "closedforms " + case_label(c.space, c.p, c.k) + ": value " + fmt(cf->value) +
                           ", witness ratio " + fmt(ratio) + ", ||T||_p " + fmt(nr.value);
        line.detail = std::string(exact ? "exact" : "optimized") + ", tol " + fmt(tol) + ", bounds [" +
                      fmt(bounds.lower) + ", " + fmt(bounds.upper) + "]";
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

std::vector<CheckLine> run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials) {
    if (suite == "all") {
        std::vector<CheckLine> all;
        for (const auto& name : verify_suites()) {
            auto part = run_suite(name, seed, trials);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    if (suite == "bounds") return bounds_suite(seed, trials);
    if (suite == "adjoint") return adjoint_suite(seed, trials);
    if (suite == "directsum") return directsum_suite(seed, trials);
    if (suite == "closedforms") return closedforms_suite(seed);
    throw Error(ErrorCode::ParseError, "unknown suite '" + suite + "'");
}

void write_tap(std::ostream& out, const std::vector<CheckLine>& lines) {
    out << "TAP version 13\n1.." << lines.size() << '\n';
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        out << (l.ok ? "ok " : "not ok ") << (i + 1) << " - " << l.description << " [" << l.anchor << "]";
        if (!l.detail.empty()) out << " # " << l.detail;
        out << '\n';
    }
}

}  // namespace jointradius
