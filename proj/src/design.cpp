#include "gt/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "gt/rng.hpp"

namespace gt {

DesignMatrix::DesignMatrix(int32_t num_tests, std::vector<std::vector<int32_t>> item_tests)
    : num_tests_(num_tests), item_tests_(std::move(item_tests)) {
  if (num_tests_ < 0) throw std::invalid_argument("DesignMatrix: negative test count");
  const size_t n = item_tests_.size();
  words_per_test_ = (n + 63) / 64;
  bits_.assign(static_cast<size_t>(num_tests_) * words_per_test_, 0);
  test_items_.assign(static_cast<size_t>(num_tests_), {});
  for (size_t i = 0; i < n; ++i) {
    int32_t prev = -1;
    for (int32_t t : item_tests_[i]) {
      if (t < 0 || t >= num_tests_) throw std::invalid_argument("DesignMatrix: test id out of range");
      if (t <= prev) throw std::invalid_argument("DesignMatrix: item tests not sorted and distinct");
      prev = t;
      test_items_[static_cast<size_t>(t)].push_back(static_cast<int32_t>(i));
      bits_[static_cast<size_t>(t) * words_per_test_ + (i >> 6)] |= uint64_t{1} << (i & 63);
    }
  }
}

int32_t column_weight(const DesignSpec& spec, int32_t num_tests, int32_t num_defectives) {
  if (std::holds_alternative<Bernoulli>(spec)) {
    throw std::logic_error("column_weight: Bernoulli designs have no column weight");
  }
  if (num_tests < 1) throw std::invalid_argument("column_weight: need at least one test");
  if (num_defectives < 1) throw std::invalid_argument("column_weight: need at least one defective");
  const double nu = std::get<ConstantColumnWeight>(spec).nu;
  if (!(nu > 0.0)) throw std::invalid_argument("column_weight: nu must be positive");
  const long long rounded = std::llround(nu * num_tests / num_defectives);
  return static_cast<int32_t>(std::max(1LL, rounded));
}

DesignMatrix generate_bernoulli(int32_t num_items, int32_t num_tests, double p, uint64_t seed) {
  if (num_items < 1 || num_tests < 1) throw std::invalid_argument("generate_bernoulli: dimensions must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("generate_bernoulli: p must lie in (0,1)");
  // Entries of a column are iid Bernoulli(p); equivalently the gaps between
  // set entries are geometric. Sampling the gaps keeps the cost proportional
  // to the number of ones instead of N*T.
  const double log1mp = std::log1p(-p);
  std::vector<std::vector<int32_t>> columns(static_cast<size_t>(num_items));
  for (int32_t i = 0; i < num_items; ++i) {
    SplitMix64 rng(derive_seed(seed, {static_cast<uint64_t>(i)}));
    std::vector<int32_t>& col = columns[static_cast<size_t>(i)];
    int64_t t = -1;
    for (;;) {
      double u = rng.next_double();
      if (u <= 0.0) u = 0x1.0p-53;  // log(0) guard; probability 2^-53 per draw
      t += 1 + static_cast<int64_t>(std::floor(std::log(u) / log1mp));
      if (t >= num_tests) break;
      col.push_back(static_cast<int32_t>(t));
    }
  }
  return DesignMatrix(num_tests, std::move(columns));
}

DesignMatrix generate_ccw(int32_t num_items, int32_t num_tests, int32_t weight,
                          Replacement replacement, uint64_t seed) {
  if (num_items < 1 || num_tests < 1) throw std::invalid_argument("generate_ccw: dimensions must be positive");
  if (weight < 1) throw std::invalid_argument("generate_ccw: weight must be at least 1");
  if (replacement == Replacement::without_replacement && weight > num_tests) {
    throw std::invalid_argument("generate_ccw: weight exceeds test count without replacement");
  }
  std::vector<std::vector<int32_t>> columns(static_cast<size_t>(num_items));
  // Scratch permutation for without-replacement draws; swaps are undone after
  // each column so no per-column reinitialisation is needed.
  std::vector<int32_t> perm(static_cast<size_t>(num_tests));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int32_t> swaps;
  for (int32_t i = 0; i < num_items; ++i) {
    SplitMix64 rng(derive_seed(seed, {static_cast<uint64_t>(i)}));
    std::vector<int32_t>& col = columns[static_cast<size_t>(i)];
    if (replacement == Replacement::with_replacement) {
      col.reserve(static_cast<size_t>(weight));
      for (int32_t j = 0; j < weight; ++j) {
        col.push_back(static_cast<int32_t>(rng.uniform_below(static_cast<uint64_t>(num_tests))));
      }
      std::sort(col.begin(), col.end());
      col.erase(std::unique(col.begin(), col.end()), col.end());
    } else {
      swaps.clear();
      for (int32_t j = 0; j < weight; ++j) {
        const int32_t r = j + static_cast<int32_t>(rng.uniform_below(static_cast<uint64_t>(num_tests - j)));
        std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(r)]);
        swaps.push_back(r);
      }
      col.assign(perm.begin(), perm.begin() + weight);
      std::sort(col.begin(), col.end());
      for (int32_t j = weight - 1; j >= 0; --j) {
        std::swap(perm[static_cast<size_t>(j)], perm[static_cast<size_t>(swaps[static_cast<size_t>(j)])]);
      }
    }
  }
  return DesignMatrix(num_tests, std::move(columns));
}

DesignMatrix generate_design(const DesignSpec& spec, int32_t num_items, int32_t num_tests,
                             int32_t num_defectives, uint64_t seed) {
  if (const auto* b = std::get_if<Bernoulli>(&spec)) {
    return generate_bernoulli(num_items, num_tests, b->p, seed);
  }
  const auto& ccw = std::get<ConstantColumnWeight>(spec);
  const int32_t weight = column_weight(spec, num_tests, num_defectives);
  return generate_ccw(num_items, num_tests, weight, ccw.replacement, seed);
}

std::string design_family(const DesignSpec& spec) {
  return std::holds_alternative<Bernoulli>(spec) ? "bernoulli" : "ccw";
}

uint64_t design_spec_id(const DesignSpec& spec) {
  if (const auto* b = std::get_if<Bernoulli>(&spec)) {
    uint64_t bits;
    static_assert(sizeof bits == sizeof b->p);
    std::memcpy(&bits, &b->p, sizeof bits);
    return derive_seed(1, {bits});
  }
  const auto& ccw = std::get<ConstantColumnWeight>(spec);
  uint64_t bits;
  std::memcpy(&bits, &ccw.nu, sizeof bits);
  return derive_seed(2, {bits, ccw.replacement == Replacement::with_replacement ? 0ULL : 1ULL});
}

std::string format_design(const DesignMatrix& design) {
  std::string out = std::to_string(design.num_tests());
  out += ' ';
  out += std::to_string(design.num_items());
  out += '\n';
  for (const auto& tests : design.item_tests()) {
    bool first = true;
    for (int32_t t : tests) {
      if (!first) out += ' ';
      first = false;
      out += std::to_string(t);
    }
    out += '\n';
  }
  return out;
}

}  // namespace gt
