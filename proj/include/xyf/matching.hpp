#pragma once

#include <cstdint>
#include <vector>

namespace xyf {

// Exact minimum-weight perfect matching on a dense even-order graph
// (primal-dual blossom algorithm, O(n^3)). Weights are non-negative
// integers; absent edges are passed as `forbidden` (large) weights.
// Returns mate[i] for every vertex. Throws if no perfect matching exists
// within allowed edges.
std::vector<int> min_weight_perfect_matching(int n,
                                             const std::vector<std::vector<int64_t>>& w,
                                             int64_t forbidden);

// Brute-force reference (n <= ~12): minimum total weight over all perfect
// matchings, for equivalence tests.
int64_t brute_force_min_matching(int n, const std::vector<std::vector<int64_t>>& w,
                                 int64_t forbidden);

}  // namespace xyf
