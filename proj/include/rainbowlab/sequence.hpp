#pragma once

// Deciding whether a threshold sequence f_1..f_s is satisfying, i.e. whether
// every system with |F_i| > f_i has a rainbow matching.
//
// Monotone reduction: adding tuples to a family can only create rainbow
// matchings, and every system with |F_i| > f_i contains one with
// |F_i| = f_i + 1. So it suffices to check the systems of exactly those sizes.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "rainbowlab/budget.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/match_search.hpp"
#include "rainbowlab/rng.hpp"
#include "rainbowlab/symmetry.hpp"

namespace rainbowlab {

struct SequenceSpec {
  Universe universe;
  std::vector<std::uint64_t> f;

  SequenceSpec(Universe u, std::vector<std::uint64_t> thresholds)
      : universe(std::move(u)), f(std::move(thresholds)) {
    if (f.empty()) throw InvalidInput("sequence: s must be >= 1");
  }

  std::size_t s() const { return f.size(); }

  /// Some position needs more than n^k tuples, so no system qualifies.
  bool vacuous() const {
    return std::any_of(f.begin(), f.end(), [&](std::uint64_t v) { return v >= universe.size(); });
  }
};

enum class VerdictStatus { satisfying, not_satisfying, unknown };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::satisfying: return "satisfying";
    case VerdictStatus::not_satisfying: return "not-satisfying";
    case VerdictStatus::unknown: return "unknown";
  }
  return "?";
}

struct Verdict {
  VerdictStatus status = VerdictStatus::unknown;
  std::optional<FamilySystem> witness;  // present iff not_satisfying
  std::uint64_t systems = 0;
  std::uint64_t nodes = 0;
  bool vacuous = false;
  bool symmetry_pruned = false;
};

struct EnumerationOptions {
  bool symmetry_pruning = true;
  unsigned workers = 1;
};

/// A counterexample has |F_i| = f_i + 1 and no rainbow matching (exhaustively).
inline bool is_valid_counterexample(const SequenceSpec& spec, const FamilySystem& system,
                                    const SearchBudget& budget = {}) {
  if (!(system.universe() == spec.universe) || system.s() != spec.s()) return false;
  for (std::size_t i = 0; i < spec.s(); ++i)
    if (system[i].size() != spec.f[i] + 1) return false;
  return find_rainbow(system, budget).status == SearchStatus::none;
}

namespace detail {

struct ShardOutcome {
  std::optional<std::size_t> rep;  // index into first-family representatives
  std::optional<FamilySystem> witness;
  std::uint64_t systems = 0;
  std::uint64_t nodes = 0;
  bool exhausted = false;
};

/// Scans the representatives rep_indices (ascending) for the first family and
/// every combination of the others, stopping at the first counterexample or
/// once `best` drops below the current representative.
inline ShardOutcome scan_shard(const SequenceSpec& spec,
                               const std::vector<std::vector<std::uint64_t>>& first_reps,
                               const std::vector<std::size_t>& rep_indices, BudgetMeter& meter,
                               std::atomic<std::size_t>& best) {
  ShardOutcome out;
  const auto& u = spec.universe;
  const auto s = spec.s();
  const auto before = meter.nodes();
  std::vector<Combination> combos;
  for (std::size_t i = 1; i < s; ++i) combos.emplace_back(u.size(), spec.f[i] + 1);
  std::vector<std::vector<std::uint64_t>> current(s);

  for (auto r : rep_indices) {
    if (r > best.load()) break;
    current[0] = first_reps[r];
    for (auto& c : combos) c.reset();
    for (std::size_t i = 1; i < s; ++i) current[i] = combos[i - 1].current();
    while (true) {
      if (!meter.charge()) {
        out.exhausted = true;
        out.nodes = meter.nodes() - before;
        return out;
      }
      ++out.systems;
      std::vector<const std::vector<std::uint64_t>*> fams;
      for (const auto& c : current) fams.push_back(&c);
      const auto res = search_codes(u, fams, meter);
      if (res.status == SearchStatus::budget_exhausted) {
        out.exhausted = true;
        out.nodes = meter.nodes() - before;
        return out;
      }
      if (res.status == SearchStatus::none) {
        std::vector<Family> families;
        for (const auto& c : current) families.emplace_back(u, c);
        out.rep = r;
        out.witness = FamilySystem(u, std::move(families), spec.f);
        auto prev = best.load();
        while (r < prev && !best.compare_exchange_weak(prev, r)) {
        }
        out.nodes = meter.nodes() - before;
        return out;
      }
      // odometer over families 2..s, last family fastest
      std::size_t i = s;
      bool advanced = false;
      while (i > 1) {
        --i;
        if (combos[i - 1].next()) {
          current[i] = combos[i - 1].current();
          advanced = true;
          break;
        }
        combos[i - 1].reset();
        current[i] = combos[i - 1].current();
      }
      if (!advanced) break;
    }
  }
  out.nodes = meter.nodes() - before;
  return out;
}

}  // namespace detail

/// Exhaustive decision over all systems with |F_i| = f_i + 1. With symmetry
/// pruning, the first family ranges only over lexicographically minimal
/// representatives of its orbit under value relabeling. The witness is the
/// first counterexample in enumeration order (first family, then the rest
/// lexicographically), independent of the worker count.
inline Verdict is_satisfying(const SequenceSpec& spec, BudgetMeter& meter,
                             const EnumerationOptions& options = {}) {
  Verdict v;
  if (spec.vacuous()) {
    v.status = VerdictStatus::satisfying;
    v.vacuous = true;
    return v;
  }
  const auto& u = spec.universe;
  const auto group = options.symmetry_pruning ? ValueRelabelingGroup::make(u) : std::nullopt;
  v.symmetry_pruned = group.has_value();

  std::vector<std::vector<std::uint64_t>> reps;
  for (Combination c(u.size(), spec.f[0] + 1); c.valid(); c.next()) {
    if (!meter.charge()) return v;
    if (!group || group->is_canonical(c.current())) reps.push_back(c.current());
  }

  const unsigned workers = std::max(1U, options.workers);
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  std::vector<detail::ShardOutcome> outcomes(workers);

  if (workers == 1) {
    std::vector<std::size_t> all(reps.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    outcomes[0] = detail::scan_shard(spec, reps, all, meter, best);
  } else {
    const auto& b = meter.budget();
    const auto remaining_nodes = b.max_nodes > meter.nodes() ? b.max_nodes - meter.nodes() : 1;
    auto remaining_time = b.time_limit - meter.elapsed();
    if (remaining_time.count() <= 0) remaining_time = std::chrono::milliseconds(1);
    const SearchBudget shard_budget{std::max<std::uint64_t>(1, remaining_nodes / workers),
                                    remaining_time};
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        std::vector<std::size_t> mine;
        for (std::size_t i = w; i < reps.size(); i += workers) mine.push_back(i);
        BudgetMeter local(shard_budget);
        outcomes[w] = detail::scan_shard(spec, reps, mine, local, best);
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& o : outcomes) meter.add(o.nodes);
  }

  const detail::ShardOutcome* winner = nullptr;
  bool exhausted = false;
  for (const auto& o : outcomes) {
    v.systems += o.systems;
    v.nodes += o.nodes;
    exhausted = exhausted || o.exhausted;
    if (o.rep && (!winner || *o.rep < *winner->rep)) winner = &o;
  }
  if (winner) {
    v.status = VerdictStatus::not_satisfying;
    v.witness = winner->witness;
  } else {
    v.status = exhausted ? VerdictStatus::unknown : VerdictStatus::satisfying;
  }
  return v;
}

inline Verdict is_satisfying(const SequenceSpec& spec, const SearchBudget& budget = {},
                             const EnumerationOptions& options = {}) {
  BudgetMeter meter(budget);
  return is_satisfying(spec, meter, options);
}

struct FalsifyResult {
  std::optional<FamilySystem> witness;  // nullopt: none found (inconclusive)
  std::uint64_t iterations = 0;
  bool budget_exhausted = false;
};

/// Random search for a counterexample. Each iteration draws independent
/// uniform subsets of sizes f_i + 1 from a counter-based stream keyed by seed.
inline FalsifyResult falsify_random(const SequenceSpec& spec, std::uint64_t seed,
                                    std::uint64_t iterations, const SearchBudget& budget = {}) {
  FalsifyResult out;
  if (spec.vacuous()) return out;
  BudgetMeter meter(budget);
  CounterRng rng(seed);
  const auto& u = spec.universe;
  for (std::uint64_t it = 0; it < iterations; ++it) {
    std::vector<Family> families;
    for (auto f : spec.f) families.emplace_back(u, sample_subset(u.size(), f + 1, rng));
    FamilySystem system(u, std::move(families), spec.f);
    ++out.iterations;
    const auto res = find_rainbow(system, meter);
    if (res.status == SearchStatus::budget_exhausted) {
      out.budget_exhausted = true;
      return out;
    }
    if (res.status == SearchStatus::none) {
      out.witness = std::move(system);
      return out;
    }
  }
  return out;
}

/// f_i = (i-1) n^{k-1} + c.
inline SequenceSpec progression(const Universe& u, std::size_t s, std::uint64_t c) {
  std::vector<std::uint64_t> f(s);
  for (std::size_t i = 0; i < s; ++i) f[i] = static_cast<std::uint64_t>(i) * u.power(u.k() - 1) + c;
  return SequenceSpec(u, std::move(f));
}

struct MinimalCResult {
  std::optional<std::uint64_t> c;         // nullopt: unknown (budget)
  std::vector<Verdict> scanned;           // verdict for c = 0, 1, ...
  std::optional<FamilySystem> witness_below;  // counterexample at c - 1
};

/// Smallest c >= 0 for which the progression is satisfying, scanning upward.
/// Terminates: once (s-1) n^{k-1} + c >= n^k the last position is vacuous.
inline MinimalCResult minimal_c_search(const Universe& u, std::size_t s,
                                       const SearchBudget& budget = {},
                                       const EnumerationOptions& options = {}) {
  if (s < 1) throw InvalidInput("minimal_c_search: s must be >= 1");
  MinimalCResult out;
  BudgetMeter meter(budget);
  for (std::uint64_t c = 0;; ++c) {
    auto v = is_satisfying(progression(u, s, c), meter, options);
    const auto status = v.status;
    if (status == VerdictStatus::not_satisfying) out.witness_below = v.witness;
    out.scanned.push_back(std::move(v));
    if (status == VerdictStatus::unknown) return out;
    if (status == VerdictStatus::satisfying) {
      out.c = c;
      return out;
    }
  }
}

}  // namespace rainbowlab
