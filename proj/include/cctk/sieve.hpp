#pragma once

#include <vector>

#include "cctk/arith.hpp"

namespace cctk {

/// Primes up to limit (inclusive), plain Eratosthenes.
std::vector<u64> primes_up_to(u64 limit);

/// Primes in [lo, hi], sieved in fixed-size segments against base primes up
/// to sqrt(hi). Empty when hi < lo.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

}  // namespace cctk
