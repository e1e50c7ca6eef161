#pragma once

#include <span>
#include <vector>

namespace sumeval {

/// Benjamini-Hochberg step-up adjustment: with p sorted ascending,
/// adjusted p_(i) = min_{j >= i} (m / j) p_(j), capped at 1, returned in input
/// order. Throws DataError for values outside [0, 1].
std::vector<double> benjamini_hochberg(std::span<const double> p_values);

}  // namespace sumeval
