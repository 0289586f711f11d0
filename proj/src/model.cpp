#include "gt/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "gt/rng.hpp"

namespace gt {

ProblemInstance sample_defective_set(int32_t num_items, int32_t num_defectives, uint64_t seed) {
  if (num_items < 1) throw std::invalid_argument("sample_defective_set: need at least one item");
  if (num_defectives < 0 || num_defectives > num_items) {
    throw std::invalid_argument("sample_defective_set: defective count out of range");
  }
  SplitMix64 rng(seed);
  // Virtual array a[i] = i with only the displaced entries materialised.
  std::unordered_map<int32_t, int32_t> displaced;
  displaced.reserve(static_cast<size_t>(num_defectives) * 2);
  auto value_at = [&](int32_t idx) {
    auto it = displaced.find(idx);
    return it == displaced.end() ? idx : it->second;
  };
  ProblemInstance inst;
  inst.num_items = num_items;
  inst.defective_set.reserve(static_cast<size_t>(num_defectives));
  for (int32_t j = 0; j < num_defectives; ++j) {
    const int32_t r = j + static_cast<int32_t>(rng.uniform_below(static_cast<uint64_t>(num_items - j)));
    const int32_t picked = value_at(r);
    displaced[r] = value_at(j);
    inst.defective_set.push_back(picked);
  }
  std::sort(inst.defective_set.begin(), inst.defective_set.end());
  return inst;
}

OutcomeVector compute_outcomes(const DesignMatrix& design, const std::vector<int32_t>& defective_set) {
  OutcomeVector y;
  y.positive.assign(static_cast<size_t>(design.num_tests()), 0);
  for (int32_t i : defective_set) {
    if (i < 0 || i >= design.num_items()) {
      throw std::invalid_argument("compute_outcomes: defective item out of range");
    }
    for (int32_t t : design.tests_of(i)) {
      if (!y.positive[static_cast<size_t>(t)]) {
        y.positive[static_cast<size_t>(t)] = 1;
        ++y.positive_count;
      }
    }
  }
  return y;
}

}  // namespace gt
