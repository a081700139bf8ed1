#pragma once

// The (p,k)-th joint numerical index
//   n_{(p,k)}(X) = inf { w_p(T) : T in L(X)^k, ||T||_p = 1 }:
// known values, theoretical bounds, witness tuples and a direct-search estimator.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jointradius/jointcalc.hpp"
#include "jointradius/operators.hpp"
#include "jointradius/spaces.hpp"

namespace jointradius {

/// n(X) for l_1^m, l_inf^m (1), real l_2^m (0), complex l_2^m (1/2), the scalar
/// field (1), and l_1 / l_inf sums of those (infimum over summands).
std::optional<double> classical_index(const Space& space);

struct ClosedForm {
    double value = 0.0;
    /// Formula the value comes from.
    std::string citation;
};

/// Known value of n_{(p,k)}(X); absent outside the theorems' hypotheses.
std::optional<ClosedForm> closed_form_index(const Space& space, double p, int k);

struct IndexBounds {
    double lower = 0.0;
    double upper = 1.0;
    std::string lower_provenance;
    std::string upper_provenance;
};

IndexBounds index_bounds(const Space& space, double p, int k);

/// Normalized tuple (||T||_p = 1) whose ratio equals the closed form.
/// Throws NoWitnessKnown when no closed form applies.
OperatorTuple witness_tuple(const Space& space, double p, int k);

/// w_p(T) / ||T||_p, or +inf for the zero tuple. `exact` reports whether both
/// sides came from enumeration.
double index_ratio(const OperatorTuple& tuple, double p, const OptimizeOptions& inner,
                   bool* exact = nullptr);

struct IndexOptions {
    /// Ratio evaluations across all starts.
    std::size_t budget = 100000;
    std::uint64_t seed = 0;
    int random_starts = 4;
    double initial_step = 0.25;
    double min_step = 1e-7;
    /// estimate - lower_bound at or below this counts as pinched and stops the search.
    double pinch_tol = 1e-9;
    /// Inner optimizer settings for spaces without an exact path.
    OptimizeOptions inner = default_inner();
    /// Additional starting tuples, searched right after the witness.
    std::vector<OperatorTuple> extra_starts;

    static OptimizeOptions default_inner() {
        OptimizeOptions o;
        o.starts = 8;
        o.sample_pairs = 0;
        o.upper_bound = false;
        o.max_evaluations_per_start = 4000;
        return o;
    }
};

struct IndexEstimate {
    double estimate = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 1.0;
    std::string lower_provenance;
    std::string upper_provenance;
    std::optional<ClosedForm> closed_form;
    std::optional<OperatorTuple> witness;
    std::string method;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    bool pinched = false;
    /// Some ratio used an optimizer radius, which may underestimate w_p.
    bool inner_approximate = false;
    /// Smallest ratio seen at every start (each is >= n_{(p,k)}(X)).
    std::vector<double> start_ratios;
};

IndexEstimate estimate_index(const Space& space, double p, int k, const IndexOptions& options = {});

struct DirectSumCheck {
    std::size_t slot = 0;
    std::size_t trial = 0;
    double summand_norm = 0.0;
    double host_norm = 0.0;
    double summand_radius = 0.0;
    double host_radius = 0.0;
    bool summand_exact = false;
    bool host_exact = false;
    double tolerance = 0.0;
    /// Largest sampled host values; never above the summand values.
    double sampled_host_norm = 0.0;
    double sampled_host_radius = 0.0;
    double sample_margin = 0.0;
    bool pass = false;
};

struct DirectSumReport {
    std::vector<DirectSumCheck> checks;
    bool pass = true;
};

/// Lifts random summand tuples into the host and compares ||.||_p and w_p.
/// Both-exact comparisons use 1e-10; optimized hosts use a two-sided 1e-4 and
/// a sampled one-sided check.
DirectSumReport verify_direct_sum_theorems(const Space& space, double p, int k, std::size_t trials,
                                           std::uint64_t seed, std::size_t host_samples = 2000);

}  // namespace jointradius
