#pragma once

// Reference computations that share no code with the chain DP.

#include <cstdint>
#include <span>
#include <vector>

namespace swapschur::oracle {

/// Distribution of X_1 + ... + X_k for independent X_i ~ Geom(rates[i])
/// (support >= 1), truncated to values 0..tmax, by direct convolution of
/// the individual mass functions. Terms with rate 0 are rejected.
std::vector<double> geometric_sum_pmf(std::span<const double> rates, std::int64_t tmax);

/// Pr(X_1 + ... + X_k > T) from geometric_sum_pmf.
double geometric_sum_tail(std::span<const double> rates, std::int64_t steps);

}  // namespace swapschur::oracle
