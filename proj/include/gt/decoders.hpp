#pragma once
// Decoders for noiseless group testing outcomes.
//
// COMP returns every item that appears in no negative test (the possible
// defectives, PD). DD returns the PD items that are the sole PD member of
// some positive test; these are definitely defective. SCOMP grows the DD
// estimate greedily until it explains every positive test. SSS searches for
// the unique smallest satisfying set by branch and bound.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gt/design.hpp"
#include "gt/model.hpp"

namespace gt {

enum class DecodeFailure : uint8_t {
  non_unique_smallest_set,  // two or more smallest satisfying sets
  budget_exhausted,         // node limit hit before the search was certified
};

struct DecodeResult {
  std::vector<int32_t> items;  // sorted estimate, meaningful only when no error
  std::optional<DecodeFailure> error;

  bool is_estimate() const { return !error.has_value(); }

  static DecodeResult estimate(std::vector<int32_t> items) { return {std::move(items), std::nullopt}; }
  static DecodeResult declared(DecodeFailure f) { return {{}, f}; }
};

enum class DecoderKind : uint8_t { comp, dd, scomp, sss };

std::string_view decoder_name(DecoderKind kind);
std::optional<DecoderKind> decoder_from_name(std::string_view name);

inline constexpr uint64_t kDefaultSssBudget = 10'000'000;

// Items contained in no negative test. Items that appear in no test at all
// are vacuously possible defectives.
std::vector<int32_t> possible_defectives(const DesignMatrix& design, const OutcomeVector& y);

DecodeResult decode_comp(const DesignMatrix& design, const OutcomeVector& y);
DecodeResult decode_dd(const DesignMatrix& design, const OutcomeVector& y);

// Ties in the greedy extension break towards the lowest item id.
DecodeResult decode_scomp(const DesignMatrix& design, const OutcomeVector& y);

// True when the candidate set reproduces y exactly (every positive test
// covered, no negative test touched).
bool is_satisfying(const DesignMatrix& design, const OutcomeVector& y,
                   const std::vector<int32_t>& candidate);

// Smallest satisfying set if it is unique; otherwise declares
// non_unique_smallest_set, or budget_exhausted when the branch and bound
// search exceeds `budget` nodes before optimality and uniqueness are both
// certified. Outcome vectors with no satisfying set at all (impossible when
// y was generated from a real defective set) also declare
// non_unique_smallest_set.
DecodeResult decode_sss(const DesignMatrix& design, const OutcomeVector& y,
                        uint64_t budget = kDefaultSssBudget);

DecodeResult decode_with(DecoderKind kind, const DesignMatrix& design, const OutcomeVector& y,
                         uint64_t sss_budget = kDefaultSssBudget);

}  // namespace gt
