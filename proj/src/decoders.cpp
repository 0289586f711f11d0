#include "gt/decoders.hpp"

#include <algorithm>
#include <bit>
#include <climits>
#include <stdexcept>

namespace gt {

namespace {

void check_shape(const DesignMatrix& design, const OutcomeVector& y, const char* who) {
  if (y.positive.size() != static_cast<size_t>(design.num_tests())) {
    throw std::invalid_argument(std::string(who) + ": outcome length does not match test count");
  }
}

}  // namespace

std::string_view decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::comp: return "COMP";
    case DecoderKind::dd: return "DD";
    case DecoderKind::scomp: return "SCOMP";
    case DecoderKind::sss: return "SSS";
  }
  return "?";
}

std::optional<DecoderKind> decoder_from_name(std::string_view name) {
  if (name == "COMP") return DecoderKind::comp;
  if (name == "DD") return DecoderKind::dd;
  if (name == "SCOMP") return DecoderKind::scomp;
  if (name == "SSS") return DecoderKind::sss;
  return std::nullopt;
}

std::vector<int32_t> possible_defectives(const DesignMatrix& design, const OutcomeVector& y) {
  check_shape(design, y, "possible_defectives");
  std::vector<int32_t> pd;
  for (int32_t i = 0; i < design.num_items(); ++i) {
    bool in_negative = false;
    for (int32_t t : design.tests_of(i)) {
      if (!y.positive[static_cast<size_t>(t)]) {
        in_negative = true;
        break;
      }
    }
    if (!in_negative) pd.push_back(i);
  }
  return pd;
}

DecodeResult decode_comp(const DesignMatrix& design, const OutcomeVector& y) {
  return DecodeResult::estimate(possible_defectives(design, y));
}

DecodeResult decode_dd(const DesignMatrix& design, const OutcomeVector& y) {
  check_shape(design, y, "decode_dd");
  const std::vector<int32_t> pd = possible_defectives(design, y);
  std::vector<uint8_t> is_pd(static_cast<size_t>(design.num_items()), 0);
  for (int32_t i : pd) is_pd[static_cast<size_t>(i)] = 1;
  std::vector<uint8_t> definite(static_cast<size_t>(design.num_items()), 0);
  for (int32_t t = 0; t < design.num_tests(); ++t) {
    if (!y.positive[static_cast<size_t>(t)]) continue;
    int32_t count = 0;
    int32_t sole = -1;
    for (int32_t i : design.items_of(t)) {
      if (is_pd[static_cast<size_t>(i)]) {
        sole = i;
        if (++count > 1) break;
      }
    }
    if (count == 1) definite[static_cast<size_t>(sole)] = 1;
  }
  std::vector<int32_t> items;
  for (int32_t i = 0; i < design.num_items(); ++i) {
    if (definite[static_cast<size_t>(i)]) items.push_back(i);
  }
  return DecodeResult::estimate(std::move(items));
}

DecodeResult decode_scomp(const DesignMatrix& design, const OutcomeVector& y) {
  check_shape(design, y, "decode_scomp");
  const std::vector<int32_t> pd = possible_defectives(design, y);
  std::vector<uint8_t> is_pd(static_cast<size_t>(design.num_items()), 0);
  for (int32_t i : pd) is_pd[static_cast<size_t>(i)] = 1;

  std::vector<uint8_t> declared(static_cast<size_t>(design.num_items()), 0);
  for (int32_t i : decode_dd(design, y).items) declared[static_cast<size_t>(i)] = 1;

  std::vector<uint8_t> explained(static_cast<size_t>(design.num_tests()), 0);
  int32_t unexplained = 0;
  for (int32_t t = 0; t < design.num_tests(); ++t) {
    if (!y.positive[static_cast<size_t>(t)]) continue;
    for (int32_t i : design.items_of(t)) {
      if (declared[static_cast<size_t>(i)]) {
        explained[static_cast<size_t>(t)] = 1;
        break;
      }
    }
    if (!explained[static_cast<size_t>(t)]) ++unexplained;
  }

  // How many still-unexplained positive tests each possible defective covers.
  std::vector<int32_t> covers(static_cast<size_t>(design.num_items()), 0);
  for (int32_t t = 0; t < design.num_tests(); ++t) {
    if (!y.positive[static_cast<size_t>(t)] || explained[static_cast<size_t>(t)]) continue;
    for (int32_t i : design.items_of(t)) {
      if (is_pd[static_cast<size_t>(i)]) ++covers[static_cast<size_t>(i)];
    }
  }

  while (unexplained > 0) {
    int32_t pick = -1;
    int32_t pick_covers = 0;
    for (int32_t i : pd) {
      if (!declared[static_cast<size_t>(i)] && covers[static_cast<size_t>(i)] > pick_covers) {
        pick = i;
        pick_covers = covers[static_cast<size_t>(i)];
      }
    }
    // Every positive test generated from a real defective set contains a
    // possible defective, so pick_covers > 0 there; this guard only fires on
    // hand-built inconsistent outcomes.
    if (pick < 0) break;
    declared[static_cast<size_t>(pick)] = 1;
    for (int32_t t : design.tests_of(pick)) {
      if (!y.positive[static_cast<size_t>(t)] || explained[static_cast<size_t>(t)]) continue;
      explained[static_cast<size_t>(t)] = 1;
      --unexplained;
      for (int32_t i : design.items_of(t)) {
        if (is_pd[static_cast<size_t>(i)]) --covers[static_cast<size_t>(i)];
      }
    }
  }

  std::vector<int32_t> items;
  for (int32_t i = 0; i < design.num_items(); ++i) {
    if (declared[static_cast<size_t>(i)]) items.push_back(i);
  }
  return DecodeResult::estimate(std::move(items));
}

bool is_satisfying(const DesignMatrix& design, const OutcomeVector& y,
                   const std::vector<int32_t>& candidate) {
  check_shape(design, y, "is_satisfying");
  std::vector<uint8_t> hit(static_cast<size_t>(design.num_tests()), 0);
  for (int32_t i : candidate) {
    if (i < 0 || i >= design.num_items()) {
      throw std::invalid_argument("is_satisfying: candidate item out of range");
    }
    for (int32_t t : design.tests_of(i)) hit[static_cast<size_t>(t)] = 1;
  }
  return std::equal(hit.begin(), hit.end(), y.positive.begin());
}

namespace {

// Branch and bound for the smallest satisfying set, phrased as minimum set
// cover: candidates are the possible defectives (a satisfying set cannot
// contain an item that appears in a negative test, since that test would
// come out positive, so restricting the search to PD loses nothing), and the
// elements to cover are the positive tests. Every PD item's tests are all
// positive by construction, so adding one never breaks a negative test.
//
// Branching picks an uncovered test and tries each remaining candidate that
// covers it; candidates already tried at this node are excluded from the
// branches to their right, which makes the enumeration visit every cover
// exactly once and lets distinct minimum covers be counted exactly.
struct SssSearch {
  size_t words = 0;
  int32_t num_cands = 0;
  std::vector<uint64_t> masks;                  // num_cands x words, bit = positive test
  std::vector<int32_t> cand_items;              // candidate index -> item id
  std::vector<std::vector<int32_t>> test_cands; // per positive-test bit, covering candidates
  std::vector<uint8_t> available;
  std::vector<int32_t> chosen;

  uint64_t nodes = 0;
  uint64_t budget = 0;
  bool exhausted = false;

  int32_t best = INT_MAX;
  int32_t tie_count = 0;
  std::vector<int32_t> best_set;

  std::vector<std::vector<uint64_t>> depth_masks;  // uncovered bits per depth
  std::vector<int32_t> lb_stamp;
  int32_t lb_epoch = 0;

  const uint64_t* mask_of(int32_t c) const { return &masks[static_cast<size_t>(c) * words]; }

  // Greedy lower bound from uncovered tests with pairwise disjoint candidate
  // sets: each such test needs its own item. INT_MAX flags an uncoverable
  // test, which kills the whole branch.
  int32_t lower_bound(const std::vector<uint64_t>& uncovered) {
    ++lb_epoch;
    int32_t lb = 0;
    for (size_t w = 0; w < words; ++w) {
      uint64_t bits = uncovered[w];
      while (bits) {
        const int32_t b = static_cast<int32_t>(w * 64 + static_cast<size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
        int32_t avail = 0;
        bool disjoint = true;
        for (int32_t c : test_cands[static_cast<size_t>(b)]) {
          if (!available[static_cast<size_t>(c)]) continue;
          ++avail;
          if (lb_stamp[static_cast<size_t>(c)] == lb_epoch) disjoint = false;
        }
        if (avail == 0) return INT_MAX;
        if (disjoint) {
          ++lb;
          for (int32_t c : test_cands[static_cast<size_t>(b)]) {
            if (available[static_cast<size_t>(c)]) lb_stamp[static_cast<size_t>(c)] = lb_epoch;
          }
        }
      }
    }
    return lb;
  }

  void record_cover() {
    const int32_t size = static_cast<int32_t>(chosen.size());
    if (size > best) return;
    std::vector<int32_t> sorted = chosen;
    std::sort(sorted.begin(), sorted.end());
    if (size < best) {
      best = size;
      best_set = std::move(sorted);
      tie_count = 1;
    } else if (tie_count == 0) {
      best_set = std::move(sorted);
      tie_count = 1;
    } else if (sorted != best_set) {
      tie_count = 2;
    }
  }

  void dfs(int32_t depth, int32_t uncovered_count) {
    if (exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    if (uncovered_count == 0) {
      record_cover();
      return;
    }
    const std::vector<uint64_t>& uncovered = depth_masks[static_cast<size_t>(depth)];
    const int32_t lb = lower_bound(uncovered);
    if (lb == INT_MAX) return;
    const int32_t at_least = static_cast<int32_t>(chosen.size()) + lb;
    if (at_least > best) return;
    if (at_least == best && tie_count >= 2) return;

    // Fail-first: branch on the uncovered test with the fewest candidates.
    int32_t pick = -1;
    size_t pick_count = SIZE_MAX;
    for (size_t w = 0; w < words && pick_count > 1; ++w) {
      uint64_t bits = uncovered[w];
      while (bits) {
        const int32_t b = static_cast<int32_t>(w * 64 + static_cast<size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
        size_t count = 0;
        for (int32_t c : test_cands[static_cast<size_t>(b)]) {
          if (available[static_cast<size_t>(c)]) ++count;
        }
        if (count < pick_count) {
          pick = b;
          pick_count = count;
          if (count <= 1) break;
        }
      }
    }

    std::vector<int32_t> branch_cands;
    branch_cands.reserve(pick_count);
    for (int32_t c : test_cands[static_cast<size_t>(pick)]) {
      if (available[static_cast<size_t>(c)]) branch_cands.push_back(c);
    }

    std::vector<uint64_t>& next = depth_masks[static_cast<size_t>(depth) + 1];
    for (int32_t c : branch_cands) {
      const uint64_t* m = mask_of(c);
      int32_t next_count = 0;
      for (size_t w = 0; w < words; ++w) {
        next[w] = uncovered[w] & ~m[w];
        next_count += std::popcount(next[w]);
      }
      chosen.push_back(c);
      available[static_cast<size_t>(c)] = 0;
      dfs(depth + 1, next_count);
      chosen.pop_back();
      // c stays unavailable: branches to the right cover the sets without it.
      if (exhausted) break;
    }
    for (int32_t c : branch_cands) available[static_cast<size_t>(c)] = 1;
  }
};

}  // namespace

DecodeResult decode_sss(const DesignMatrix& design, const OutcomeVector& y, uint64_t budget) {
  check_shape(design, y, "decode_sss");
  if (budget < 1) throw std::invalid_argument("decode_sss: budget must be positive");

  // Map positive tests to bit positions.
  std::vector<int32_t> test_bit(static_cast<size_t>(design.num_tests()), -1);
  int32_t num_positive = 0;
  for (int32_t t = 0; t < design.num_tests(); ++t) {
    if (y.positive[static_cast<size_t>(t)]) test_bit[static_cast<size_t>(t)] = num_positive++;
  }
  if (num_positive == 0) {
    // The empty set satisfies an all-negative outcome and is strictly
    // smaller than any alternative, so it is always the unique answer.
    return DecodeResult::estimate({});
  }

  SssSearch s;
  s.budget = budget;
  s.words = static_cast<size_t>(num_positive + 63) / 64;
  s.test_cands.assign(static_cast<size_t>(num_positive), {});
  for (int32_t item : possible_defectives(design, y)) {
    const auto& tests = design.tests_of(item);
    if (tests.empty()) continue;  // covers nothing, never part of a smallest set
    const int32_t c = s.num_cands++;
    s.cand_items.push_back(item);
    s.masks.resize(static_cast<size_t>(s.num_cands) * s.words, 0);
    uint64_t* m = &s.masks[static_cast<size_t>(c) * s.words];
    for (int32_t t : tests) {
      const int32_t b = test_bit[static_cast<size_t>(t)];
      m[static_cast<size_t>(b) >> 6] |= uint64_t{1} << (b & 63);
    }
  }

  // Big columns first so greedy descent finds small covers early.
  std::vector<int32_t> order(static_cast<size_t>(s.num_cands));
  for (int32_t c = 0; c < s.num_cands; ++c) order[static_cast<size_t>(c)] = c;
  auto weight_of = [&](int32_t c) { return design.tests_of(s.cand_items[static_cast<size_t>(c)]).size(); };
  std::stable_sort(order.begin(), order.end(),
                   [&](int32_t a, int32_t b) { return weight_of(a) > weight_of(b); });
  {
    std::vector<uint64_t> masks(s.masks.size());
    std::vector<int32_t> items(s.cand_items.size());
    for (int32_t rank = 0; rank < s.num_cands; ++rank) {
      const int32_t c = order[static_cast<size_t>(rank)];
      std::copy_n(s.mask_of(c), s.words, &masks[static_cast<size_t>(rank) * s.words]);
      items[static_cast<size_t>(rank)] = s.cand_items[static_cast<size_t>(c)];
    }
    s.masks = std::move(masks);
    s.cand_items = std::move(items);
  }
  for (int32_t c = 0; c < s.num_cands; ++c) {
    const uint64_t* m = s.mask_of(c);
    for (size_t w = 0; w < s.words; ++w) {
      uint64_t bits = m[w];
      while (bits) {
        const size_t b = w * 64 + static_cast<size_t>(std::countr_zero(bits));
        bits &= bits - 1;
        s.test_cands[b].push_back(c);
      }
    }
  }
  for (int32_t b = 0; b < num_positive; ++b) {
    if (s.test_cands[static_cast<size_t>(b)].empty()) {
      // No candidate covers this positive test: no satisfying set exists, so
      // there is in particular no unique smallest one. Unreachable when y
      // was generated from a real defective set.
      return DecodeResult::declared(DecodeFailure::non_unique_smallest_set);
    }
  }

  s.available.assign(static_cast<size_t>(s.num_cands), 1);
  s.lb_stamp.assign(static_cast<size_t>(s.num_cands), 0);
  s.depth_masks.assign(static_cast<size_t>(num_positive) + 2,
                       std::vector<uint64_t>(s.words, 0));

  // Greedy cover gives the initial pruning bound.
  {
    std::vector<uint64_t> uncovered(s.words, ~uint64_t{0});
    if (num_positive % 64) uncovered[s.words - 1] = (uint64_t{1} << (num_positive % 64)) - 1;
    int32_t remaining = num_positive;
    int32_t size = 0;
    while (remaining > 0) {
      int32_t pick = -1;
      int32_t pick_gain = 0;
      for (int32_t c = 0; c < s.num_cands; ++c) {
        const uint64_t* m = s.mask_of(c);
        int32_t gain = 0;
        for (size_t w = 0; w < s.words; ++w) gain += std::popcount(m[w] & uncovered[w]);
        if (gain > pick_gain) {
          pick = c;
          pick_gain = gain;
        }
      }
      const uint64_t* m = s.mask_of(pick);
      for (size_t w = 0; w < s.words; ++w) uncovered[w] &= ~m[w];
      remaining -= pick_gain;
      ++size;
    }
    s.best = size;
  }

  std::vector<uint64_t>& root = s.depth_masks[0];
  root.assign(s.words, ~uint64_t{0});
  if (num_positive % 64) root[s.words - 1] = (uint64_t{1} << (num_positive % 64)) - 1;
  s.dfs(0, num_positive);

  if (s.exhausted) return DecodeResult::declared(DecodeFailure::budget_exhausted);
  if (s.tie_count >= 2) return DecodeResult::declared(DecodeFailure::non_unique_smallest_set);
  std::vector<int32_t> items;
  items.reserve(s.best_set.size());
  for (int32_t c : s.best_set) items.push_back(s.cand_items[static_cast<size_t>(c)]);
  std::sort(items.begin(), items.end());
  return DecodeResult::estimate(std::move(items));
}

DecodeResult decode_with(DecoderKind kind, const DesignMatrix& design, const OutcomeVector& y,
                         uint64_t sss_budget) {
  switch (kind) {
    case DecoderKind::comp: return decode_comp(design, y);
    case DecoderKind::dd: return decode_dd(design, y);
    case DecoderKind::scomp: return decode_scomp(design, y);
    case DecoderKind::sss: return decode_sss(design, y, sss_budget);
  }
  throw std::invalid_argument("decode_with: unknown decoder");
}

}  // namespace gt
