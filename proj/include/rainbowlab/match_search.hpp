#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rainbowlab/budget.hpp"
#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/matching.hpp"

namespace rainbowlab {

/// picks[i] is drawn from family i; all picks pairwise disjoint.
struct RainbowMatching {
  std::vector<Tuple> picks;

  bool operator==(const RainbowMatching&) const = default;
};

enum class SearchStatus { found, none, budget_exhausted };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::none: return "none";
    case SearchStatus::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

struct SearchResult {
  SearchStatus status = SearchStatus::none;
  std::optional<RainbowMatching> matching;
  std::uint64_t nodes = 0;
};

namespace detail {

/// Backtracking over families in ascending size order with per-coordinate
/// used-value masks. Candidates are given as flattened coordinate rows
/// (k ints each, 1-based values).
class RainbowSearcher {
 public:
  RainbowSearcher(int n, int k, std::vector<std::vector<int>> candidates)
      : n_(n), k_(k), cands_(std::move(candidates)) {
    order_.resize(cands_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return cands_[a].size() < cands_[b].size();
    });
    dense_ = static_cast<std::uint64_t>(n_) <= (std::uint64_t{1} << 20);
    if (dense_) {
      words_ = (static_cast<std::size_t>(n_) + 64) / 64;
      used_.assign(words_ * static_cast<std::size_t>(k_), 0);
    }
    pick_.assign(cands_.size(), 0);
  }

  /// On success, chosen()[i] is the candidate row index taken from family i.
  SearchStatus run(BudgetMeter& meter) {
    for (const auto& c : cands_)
      if (c.empty()) return SearchStatus::none;
    return dfs(0, meter);
  }

  const std::vector<std::size_t>& chosen() const { return pick_; }

 private:
  bool free_row(const int* row, std::size_t depth) const {
    if (dense_) {
      for (int j = 0; j < k_; ++j) {
        const auto v = static_cast<std::size_t>(row[j]);
        if (used_[static_cast<std::size_t>(j) * words_ + v / 64] >> (v % 64) & 1U) return false;
      }
      return true;
    }
    for (std::size_t d = 0; d < depth; ++d) {
      const int* other = cands_[order_[d]].data() + pick_[order_[d]] * static_cast<std::size_t>(k_);
      for (int j = 0; j < k_; ++j)
        if (other[j] == row[j]) return false;
    }
    return true;
  }

  void toggle(const int* row) {
    if (!dense_) return;
    for (int j = 0; j < k_; ++j) {
      const auto v = static_cast<std::size_t>(row[j]);
      used_[static_cast<std::size_t>(j) * words_ + v / 64] ^= std::uint64_t{1} << (v % 64);
    }
  }

  SearchStatus dfs(std::size_t depth, BudgetMeter& meter) {
    if (depth == order_.size()) return SearchStatus::found;
    const auto fam = order_[depth];
    const auto& rows = cands_[fam];
    const auto count = rows.size() / static_cast<std::size_t>(k_);
    for (std::size_t r = 0; r < count; ++r) {
      if (!meter.charge()) return SearchStatus::budget_exhausted;
      const int* row = rows.data() + r * static_cast<std::size_t>(k_);
      if (!free_row(row, depth)) continue;
      pick_[fam] = r;
      toggle(row);
      const auto st = dfs(depth + 1, meter);
      toggle(row);
      if (st != SearchStatus::none) return st;
    }
    return SearchStatus::none;
  }

  int n_;
  int k_;
  std::vector<std::vector<int>> cands_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> pick_;
  bool dense_ = true;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> used_;
};

inline std::vector<int> flatten(const Universe& u, const std::vector<std::uint64_t>& codes) {
  std::vector<int> rows;
  rows.reserve(codes.size() * static_cast<std::size_t>(u.k()));
  for (auto c : codes)
    for (int j = 1; j <= u.k(); ++j) rows.push_back(u.coord(c, j));
  return rows;
}

inline SearchResult search_codes(const Universe& u,
                                 const std::vector<const std::vector<std::uint64_t>*>& families,
                                 BudgetMeter& meter) {
  std::vector<std::vector<int>> cands;
  cands.reserve(families.size());
  for (const auto* f : families) cands.push_back(flatten(u, *f));
  const auto before = meter.nodes();
  RainbowSearcher searcher(u.n(), u.k(), std::move(cands));
  SearchResult result;
  result.status = searcher.run(meter);
  result.nodes = meter.nodes() - before;
  if (result.status == SearchStatus::found) {
    RainbowMatching m;
    for (std::size_t i = 0; i < families.size(); ++i)
      m.picks.push_back(u.decode((*families[i])[searcher.chosen()[i]]));
    result.matching = std::move(m);
  }
  return result;
}

}  // namespace detail

/// Exact decision with witness. "none" is only reported after an exhaustive search.
inline SearchResult find_rainbow(const FamilySystem& system, BudgetMeter& meter) {
  std::vector<const std::vector<std::uint64_t>*> fams;
  for (const auto& f : system.families()) fams.push_back(&f.codes());
  return detail::search_codes(system.universe(), fams, meter);
}

inline SearchResult find_rainbow(const FamilySystem& system, const SearchBudget& budget = {}) {
  BudgetMeter meter(budget);
  return find_rainbow(system, meter);
}

/// Is there a rainbow matching whose pick from family `index` is `code`?
inline SearchResult find_rainbow_through(const Universe& u, const std::vector<Family>& families,
                                         std::size_t index, std::uint64_t code,
                                         BudgetMeter& meter) {
  const std::vector<std::uint64_t> forced{code};
  std::vector<const std::vector<std::uint64_t>*> fams;
  for (std::size_t i = 0; i < families.size(); ++i)
    fams.push_back(i == index ? &forced : &families[i].codes());
  return detail::search_codes(u, fams, meter);
}

inline SearchResult find_rainbow_through(const FamilySystem& system, std::size_t index,
                                         std::uint64_t code, BudgetMeter& meter) {
  return find_rainbow_through(system.universe(), system.families(), index, code, meter);
}

/// Membership plus pairwise disjointness.
inline bool is_valid_rainbow(const FamilySystem& system, const RainbowMatching& m) {
  if (m.picks.size() != system.s()) return false;
  for (std::size_t i = 0; i < m.picks.size(); ++i) {
    if (!system[i].contains(m.picks[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (!disjoint(m.picks[i], m.picks[j])) return false;
  }
  return true;
}

struct GreedyResult {
  std::optional<RainbowMatching> matching;
  std::size_t failed_at = 0;  // 1-based family index, 0 on success

  bool ok() const { return matching.has_value(); }
};

/// Walks i = 1..s and takes the first not-yet-used member of m that lies in F_i.
/// Succeeds whenever |m ∩ F_i| >= i for every i.
inline GreedyResult greedy_extract(const PerfectMatching& m, const FamilySystem& system) {
  require_same(m.universe(), system.universe());
  const int n = m.universe().n();
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  RainbowMatching out;
  for (std::size_t i = 0; i < system.s(); ++i) {
    bool picked = false;
    for (int member = 1; member <= n && !picked; ++member) {
      if (used[static_cast<std::size_t>(member)]) continue;
      if (system[i].contains(m.member_code(member))) {
        used[static_cast<std::size_t>(member)] = true;
        out.picks.push_back(m.member(member));
        picked = true;
      }
    }
    if (!picked) return GreedyResult{std::nullopt, i + 1};
  }
  return GreedyResult{std::move(out), 0};
}

/// Thrown when saturation runs out of budget; carries the partial result.
class PartialSaturation : public BudgetExhausted {
 public:
  explicit PartialSaturation(FamilySystem partial)
      : BudgetExhausted("saturation stopped early: search budget exhausted"),
        partial_(std::move(partial)) {}
  const FamilySystem& partial() const { return partial_; }

 private:
  FamilySystem partial_;
};

/// Grows a no-rainbow system to an inclusion-maximal one. Scan order is
/// family index ascending, then tuples in lexicographic order; a single pass
/// suffices because a tuple rejected once stays rejected as families grow.
inline FamilySystem saturate(const FamilySystem& system, BudgetMeter& meter) {
  const auto pre = find_rainbow(system, meter);
  if (pre.status == SearchStatus::budget_exhausted) throw PartialSaturation(system);
  if (pre.status == SearchStatus::found)
    throw InvalidInput("saturate: the system already has a rainbow matching");

  std::vector<Family> families = system.families();
  const auto& u = system.universe();
  for (std::size_t i = 0; i < families.size(); ++i) {
    for (std::uint64_t code = 0; code < u.size(); ++code) {
      if (families[i].contains(code)) continue;
      const auto r = find_rainbow_through(u, families, i, code, meter);
      if (r.status == SearchStatus::budget_exhausted)
        throw PartialSaturation(FamilySystem(u, families, system.thresholds()));
      if (r.status == SearchStatus::none) families[i].insert(code);
    }
  }
  return FamilySystem(u, std::move(families), system.thresholds());
}

inline FamilySystem saturate(const FamilySystem& system, const SearchBudget& budget = {}) {
  BudgetMeter meter(budget);
  return saturate(system, meter);
}

/// True iff no rainbow matching exists and adding any single tuple to any family creates one.
inline bool is_saturated(const FamilySystem& system, BudgetMeter& meter) {
  const auto r = find_rainbow(system, meter);
  if (r.status != SearchStatus::none) {
    if (r.status == SearchStatus::budget_exhausted)
      throw BudgetExhausted("is_saturated: budget exhausted");
    return false;
  }
  const auto& u = system.universe();
  for (std::size_t i = 0; i < system.s(); ++i)
    for (std::uint64_t code = 0; code < u.size(); ++code) {
      if (system[i].contains(code)) continue;
      const auto t = find_rainbow_through(system, i, code, meter);
      if (t.status == SearchStatus::budget_exhausted)
        throw BudgetExhausted("is_saturated: budget exhausted");
      if (t.status == SearchStatus::none) return false;
    }
  return true;
}

/// The extremal family [s-1] × [n]^{k-1}.
inline Family construct_stripe(const Universe& u, int s) {
  if (s < 2) throw InvalidInput("construct_stripe: s must be >= 2");
  if (s - 1 > u.n()) throw InvalidInput("construct_stripe: s-1 exceeds n");
  const auto block = u.power(u.k() - 1);
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(s - 1) * block);
  std::iota(codes.begin(), codes.end(), std::uint64_t{0});
  return Family(u, std::move(codes));
}

}  // namespace rainbowlab
