#pragma once

#include <stdexcept>
#include <string>

namespace fpsearch {

// Selective phase asked to act on an empty selection in strict mode.
struct DegenerateSelectionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A measurement branch with probability below tol::kZeroBranch was requested;
// the post-measurement state would be a null vector.
struct ZeroBranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// queries_to_threshold cannot converge (eps_up = 1 has no decaying power).
struct UnreachableThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

// Doubling the quadrature order moved the result more than the allowed bound.
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace fpsearch
