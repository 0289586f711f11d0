#pragma once
// Problem instances and test outcomes for the noiseless OR channel: a test
// is positive exactly when it contains at least one defective item.

#include <cstdint>
#include <vector>

#include "gt/design.hpp"

namespace gt {

struct ProblemInstance {
  int32_t num_items = 0;
  std::vector<int32_t> defective_set;  // sorted, distinct, subset of [0, num_items)
};

struct OutcomeVector {
  std::vector<uint8_t> positive;  // one flag per test
  int32_t positive_count = 0;
};

// Uniform K-subset of [0, N) by partial Fisher-Yates over a sparse virtual
// permutation (O(K) extra memory). K = 0 and K = N are both allowed.
ProblemInstance sample_defective_set(int32_t num_items, int32_t num_defectives, uint64_t seed);

// defective_set entries must lie in [0, design.num_items()).
OutcomeVector compute_outcomes(const DesignMatrix& design, const std::vector<int32_t>& defective_set);

}  // namespace gt
