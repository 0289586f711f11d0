#pragma once
// Pooling designs: which tests each item takes part in.
//
// A design is the T x N binary inclusion matrix of a group testing scheme,
// stored as sorted per-item test lists (columns), the transposed per-test
// item lists (rows), and a dense bit matrix for O(1) membership checks.
// Generation is deterministic: column i of a design with seed s is drawn
// from the SplitMix64 stream seeded with derive_seed(s, {i}), so columns are
// mutually independent and a column's content never depends on how many
// other columns were generated before it.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace gt {

class DesignMatrix {
 public:
  DesignMatrix() = default;

  // Takes ownership of the per-item test lists. Each list must hold sorted,
  // distinct test ids in [0, num_tests); throws std::invalid_argument
  // otherwise. Builds the transpose and the bit matrix.
  DesignMatrix(int32_t num_tests, std::vector<std::vector<int32_t>> item_tests);

  int32_t num_tests() const { return num_tests_; }
  int32_t num_items() const { return static_cast<int32_t>(item_tests_.size()); }

  const std::vector<std::vector<int32_t>>& item_tests() const { return item_tests_; }
  const std::vector<std::vector<int32_t>>& test_items() const { return test_items_; }
  const std::vector<int32_t>& tests_of(int32_t item) const { return item_tests_[static_cast<size_t>(item)]; }
  const std::vector<int32_t>& items_of(int32_t test) const { return test_items_[static_cast<size_t>(test)]; }

  bool contains(int32_t test, int32_t item) const {
    const size_t w = static_cast<size_t>(test) * words_per_test_ + (static_cast<uint32_t>(item) >> 6);
    return (bits_[w] >> (item & 63)) & 1u;
  }

 private:
  int32_t num_tests_ = 0;
  std::vector<std::vector<int32_t>> item_tests_;
  std::vector<std::vector<int32_t>> test_items_;
  size_t words_per_test_ = 0;
  std::vector<uint64_t> bits_;
};

enum class Replacement { with_replacement, without_replacement };

// Each matrix entry is set independently with probability p, p in (0, 1).
struct Bernoulli {
  double p = 0.0;
};

// Each item is assigned tests by nu*T/K draws; see column_weight for the
// rounding rule. With replacement, repeated draws collapse, so the realised
// column weight can land anywhere in [1, L]. Without replacement it is
// exactly L.
struct ConstantColumnWeight {
  double nu = 0.0;
  Replacement replacement = Replacement::with_replacement;
};

using DesignSpec = std::variant<Bernoulli, ConstantColumnWeight>;

// Number of test draws per item: L = max(1, round(nu*T/K)), rounding half
// away from zero. Throws std::logic_error for a Bernoulli spec (no column
// weight exists) and std::invalid_argument for out-of-range T or K.
int32_t column_weight(const DesignSpec& spec, int32_t num_tests, int32_t num_defectives);

DesignMatrix generate_bernoulli(int32_t num_items, int32_t num_tests, double p, uint64_t seed);

// weight > num_tests is an error without replacement (a column cannot hold
// that many distinct tests) and is allowed with replacement.
DesignMatrix generate_ccw(int32_t num_items, int32_t num_tests, int32_t weight,
                          Replacement replacement, uint64_t seed);

// Dispatch on the spec; num_defectives only enters through column_weight.
DesignMatrix generate_design(const DesignSpec& spec, int32_t num_items, int32_t num_tests,
                             int32_t num_defectives, uint64_t seed);

std::string design_family(const DesignSpec& spec);  // "bernoulli" or "ccw"

// Stable content hash of a spec, used to key per-cell RNG sub-streams.
uint64_t design_spec_id(const DesignSpec& spec);

// Debug serialization: first line "T N", then one line per item with its
// sorted test ids separated by single spaces.
std::string format_design(const DesignMatrix& design);

}  // namespace gt
