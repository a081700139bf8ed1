#pragma once

// Property suites that check the theorems on random and witness tuples.
// Each check is one TAP line anchored to the formula it verifies.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "jointradius/jointcalc.hpp"
#include "jointradius/spaces.hpp"

namespace jointradius {

struct CheckLine {
    bool ok = false;
    std::string description;
    /// Formula the check verifies.
    std::string anchor;
    std::string detail;
};

/// Per-(space, p, k) property sweep over random tuples: domination, component
/// sandwiches, p-monotonicity, homogeneity, triangle inequality and the
/// bound theorem.
struct PropertyOutcome {
    std::size_t tuples = 0;
    std::size_t failures = 0;
    bool exact = true;
    double tolerance = 0.0;
    double min_ratio = 0.0;
    double lower_bound = 0.0;
    std::string first_failure;
};

PropertyOutcome check_tuple_properties(const Space& space, double p, int k, std::size_t trials,
                                       std::uint64_t seed, const OptimizeOptions& options = {});

const std::vector<std::string>& verify_suites();

/// Runs "bounds", "adjoint", "directsum", "closedforms" or "all".
std::vector<CheckLine> run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials);

void write_tap(std::ostream& out, const std::vector<CheckLine>& lines);

}  // namespace jointradius
