#pragma once

#include <stdexcept>

namespace qoctl {

/// Argument outside the validity range of a closed form (asin/acos argument
/// off [-1,1] beyond clamping tolerance, ratio outside a regime interval, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The transcendental-condition scan found no bracketable root; usually means
/// the requested ratio lies outside the validity interval of the branch.
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Brute-force search finished without any candidate meeting the terminal
/// feasibility bound.
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qoctl
