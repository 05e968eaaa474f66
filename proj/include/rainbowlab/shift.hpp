#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rainbowlab/budget.hpp"
#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/match_search.hpp"

namespace rainbowlab {

/// S_{j,a,b}: every member with value b in coordinate j moves to value a,
/// unless the moved tuple is already a member.
inline Family shift_once(const Family& f, int j, int a, int b) {
  const auto& u = f.universe();
  u.require_coordinate(j);
  u.require_value(a);
  u.require_value(b);
  if (a == b) throw InvalidInput("shift: a and b must differ");
  std::vector<std::uint64_t> out;
  out.reserve(f.size());
  for (auto code : f.codes()) {
    if (u.coord(code, j) == b) {
      const auto moved = u.replace(code, j, a);
      out.push_back(f.contains(moved) ? code : moved);
    } else {
      out.push_back(code);
    }
  }
  return Family(u, std::move(out));
}

inline FamilySystem shift_system(const FamilySystem& system, int j, int a, int b) {
  std::vector<Family> out;
  out.reserve(system.s());
  for (const auto& f : system.families()) out.push_back(shift_once(f, j, a, b));
  return FamilySystem(system.universe(), std::move(out), system.thresholds());
}

/// For each coordinate j ascending: S_{j,1,2}, ..., S_{j,1,n}, S_{j,2,3}, ..., S_{j,n-1,n}.
inline FamilySystem shift_schedule(const FamilySystem& system) {
  const auto& u = system.universe();
  std::vector<Family> families = system.families();
  for (int j = 1; j <= u.k(); ++j)
    for (int a = 1; a < u.n(); ++a)
      for (int b = a + 1; b <= u.n(); ++b)
        for (auto& f : families) f = shift_once(f, j, a, b);
  return FamilySystem(u, std::move(families), system.thresholds());
}

inline Family shift_schedule(const Family& f) {
  return shift_schedule(FamilySystem(f.universe(), {f}))[0];
}

/// Closed under lowering the value in coordinate j.
inline bool is_compressed(const Family& f, int j) {
  const auto& u = f.universe();
  u.require_coordinate(j);
  for (auto code : f.codes()) {
    const int b = u.coord(code, j);
    for (int a = 1; a < b; ++a)
      if (!f.contains(u.replace(code, j, a))) return false;
  }
  return true;
}

inline bool is_compressed(const FamilySystem& system) {
  for (const auto& f : system.families())
    for (int j = 1; j <= system.universe().k(); ++j)
      if (!is_compressed(f, j)) return false;
  return true;
}

struct HyperplaneCore {
  std::vector<std::pair<int, int>> t_set;  // (j, a) with H_{j,a} ⊆ F, lexicographic
  Family covered;                          // union of those hyperplanes
  Family leftover;                         // F \ covered
  TupleMultiset b_multiset;                // covered ⊕ B = ⊕ H_{j,a}
  double leftover_bound = 0;               // C(k,2) s^2 n^{k-2}
};

inline HyperplaneCore hyperplane_core(const Family& f, std::size_t s) {
  const auto& u = f.universe();
  const int n = u.n(), k = u.k();
  // count[j][a] = |F ∩ H_{j,a}|
  std::vector<std::vector<std::uint64_t>> count(static_cast<std::size_t>(k),
                                                std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  for (auto code : f.codes())
    for (int j = 1; j <= k; ++j) ++count[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(u.coord(code, j))];

  HyperplaneCore core{{}, Family(u), Family(u), TupleMultiset(u), 0};
  const auto plane = u.power(k - 1);
  std::vector<std::vector<bool>> in_t(static_cast<std::size_t>(k), std::vector<bool>(static_cast<std::size_t>(n) + 1, false));
  for (int j = 1; j <= k; ++j)
    for (int a = 1; a <= n; ++a)
      if (count[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(a)] == plane) {
        core.t_set.emplace_back(j, a);
        in_t[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(a)] = true;
      }

  std::vector<std::uint64_t> covered, leftover;
  for (auto code : f.codes()) {
    std::uint64_t hits = 0;
    for (int j = 1; j <= k; ++j)
      if (in_t[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(u.coord(code, j))]) ++hits;
    if (hits == 0) {
      leftover.push_back(code);
    } else {
      covered.push_back(code);
      if (hits > 1) core.b_multiset.add(code, hits - 1);
    }
  }
  core.covered = Family(u, std::move(covered));
  core.leftover = Family(u, std::move(leftover));
  const double S = static_cast<double>(s);
  core.leftover_bound = static_cast<double>(k) * (k - 1) / 2.0 * S * S * std::pow(static_cast<double>(n), k - 2);
  return core;
}

struct LowDegreeViolation {
  std::size_t family = 0;  // 1-based
  Tuple member;
  int j = 0, a = 0, b = 0;  // member with b in place of a at coordinate j is missing
};

struct LowDegreeReport {
  bool certified = false;
  std::string diagnostic;
  std::vector<LowDegreeViolation> replacement_violations;
  std::vector<std::pair<std::size_t, Tuple>> leftover_violations;  // fewer than 2 coords in [s-1]
  std::uint64_t replacements_checked = 0;
  std::uint64_t leftover_checked = 0;
  std::vector<HyperplaneCore> cores;

  bool ok() const {
    return certified && replacement_violations.empty() && leftover_violations.empty();
  }
};

/// Checks, on a compressed and saturated no-rainbow system, that every member
/// with a value a >= s in coordinate j stays in its family under any
/// replacement of that value, and that every member outside the full
/// hyperplanes has at least two coordinates in [s-1]. Refuses uncertified input.
inline LowDegreeReport check_low_degree(const FamilySystem& system, const SearchBudget& budget = {}) {
  LowDegreeReport report;
  if (!is_compressed(system)) {
    report.diagnostic = "refused: system is not compressed in every coordinate";
    return report;
  }
  BudgetMeter meter(budget);
  bool saturated = false;
  try {
    saturated = is_saturated(system, meter);
  } catch (const BudgetExhausted&) {
    report.diagnostic = "refused: saturation could not be certified within budget";
    return report;
  }
  if (!saturated) {
    report.diagnostic = "refused: system is not a saturated no-rainbow system";
    return report;
  }
  report.certified = true;
  report.diagnostic = "certified: compressed and saturated";

  const auto& u = system.universe();
  const auto s = static_cast<int>(system.s());
  for (std::size_t i = 0; i < system.s(); ++i) {
    const auto& f = system[i];
    for (auto code : f.codes())
      for (int j = 1; j <= u.k(); ++j) {
        const int a = u.coord(code, j);
        if (a < s) continue;
        for (int b = 1; b <= u.n(); ++b) {
          ++report.replacements_checked;
          if (!f.contains(u.replace(code, j, b)))
            report.replacement_violations.push_back({i + 1, u.decode(code), j, a, b});
        }
      }
    auto core = hyperplane_core(f, system.s());
    for (auto code : core.leftover.codes()) {
      ++report.leftover_checked;
      int low = 0;
      for (int j = 1; j <= u.k(); ++j)
        if (u.coord(code, j) <= s - 1) ++low;
      if (low < 2) report.leftover_violations.emplace_back(i + 1, u.decode(code));
    }
    report.cores.push_back(std::move(core));
  }
  return report;
}

/// Alternates saturation and the shifting schedule until the system is both
/// saturated and compressed. Terminates because saturation only grows the
/// families and shifting preserves their sizes.
inline FamilySystem saturate_and_compress(const FamilySystem& system, const SearchBudget& budget = {}) {
  BudgetMeter meter(budget);
  FamilySystem current = saturate(system, meter);
  while (true) {
    FamilySystem shifted = shift_schedule(current);
    FamilySystem next = saturate(shifted, meter);
    if (next == shifted && is_compressed(next)) return next;
    current = std::move(next);
  }
}

}  // namespace rainbowlab
