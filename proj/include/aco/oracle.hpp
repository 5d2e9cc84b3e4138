#pragma once

#include <vector>

#include "aco/types.hpp"

namespace aco {

enum class OracleMethod { Enumeration, HeldKarp };

struct OracleResult {
    double optimal_length = 0.0;
    std::vector<int> optimal_order;  // starts at city 0
    OracleMethod method = OracleMethod::Enumeration;
};

/// Exhaustive search with city 0 fixed as the start. Symmetric instances
/// enumerate (n-1)!/2 distinct cycles (each direction counted once),
/// asymmetric ones all (n-1)!. Ties resolve to the lexicographically first
/// permutation. n > 10 throws Error{SizeLimit}.
OracleResult brute_force_optimum(const DistanceMatrix& d);

/// Held-Karp bitmask DP over subsets of cities 1..n-1. Works for symmetric
/// and asymmetric instances; n > 20 throws Error{SizeLimit} (n = 20 needs
/// roughly 80 MB for the DP table).
OracleResult held_karp_optimum(const DistanceMatrix& d);

} // namespace aco
