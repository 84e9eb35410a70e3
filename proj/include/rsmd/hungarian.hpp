#pragma once

#include <vector>

#include "rsmd/util.hpp"

namespace rsmd {

// Exact minimum-cost assignment on a square cost matrix (potentials method,
// O(n^3)). Returns the matched column of each row.
std::vector<int> hungarian_min_cost(const Mat& cost);

// Exact maximum-weight assignment; thin wrapper negating the weights.
std::vector<int> hungarian_max_weight(const Mat& weight);

}  // namespace rsmd
