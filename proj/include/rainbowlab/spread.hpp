#pragma once

// Spread approximation of a family of tuples. Tuples are read as k-element
// subsets of [k] x [n]; a pattern is a subset with at most one pair per
// coordinate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/match_search.hpp"

namespace rainbowlab {

class Pattern {
 public:
  Pattern() = default;

  /// Pairs (j, a); sorted, one per coordinate.
  Pattern(const Universe& u, std::vector<std::pair<int, int>> elems) : elems_(std::move(elems)) {
    std::sort(elems_.begin(), elems_.end());
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      u.require_coordinate(elems_[i].first);
      u.require_value(elems_[i].second);
      if (i && elems_[i].first == elems_[i - 1].first)
        throw InvalidInput("pattern: two pairs for coordinate " + std::to_string(elems_[i].first));
    }
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<std::pair<int, int>>& elems() const { return elems_; }

  bool within(const Universe& u, std::uint64_t code) const {
    return std::all_of(elems_.begin(), elems_.end(),
                       [&](const auto& p) { return u.coord(code, p.first) == p.second; });
  }

  bool contains(std::pair<int, int> e) const {
    return std::binary_search(elems_.begin(), elems_.end(), e);
  }

  bool subset_of(const Pattern& o) const {
    return std::includes(o.elems_.begin(), o.elems_.end(), elems_.begin(), elems_.end());
  }

  auto operator<=>(const Pattern&) const = default;

 private:
  std::vector<std::pair<int, int>> elems_;
};

inline std::string to_string(const Pattern& p) {
  std::string out = "{";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += "(" + std::to_string(p.elems()[i].first) + "," + std::to_string(p.elems()[i].second) + ")";
  }
  return out + "}";
}

/// No common pair.
inline bool disjoint(const Pattern& a, const Pattern& b) {
  return std::none_of(a.elems().begin(), a.elems().end(), [&](const auto& e) { return b.contains(e); });
}

/// F[X]: the members containing x.
inline Family restrict(const Family& f, const Pattern& x) {
  std::vector<std::uint64_t> out;
  for (auto code : f.codes())
    if (x.within(f.universe(), code)) out.push_back(code);
  return Family(f.universe(), std::move(out));
}

/// F(X): members containing x with the coordinates of x removed.
struct Quotient {
  std::vector<int> coordinates;  // the remaining coordinates, ascending
  std::vector<Tuple> members;    // sorted
};

inline Quotient quotient(const Family& f, const Pattern& x) {
  const auto& u = f.universe();
  Quotient q;
  for (int j = 1; j <= u.k(); ++j)
    if (std::none_of(x.elems().begin(), x.elems().end(), [&](const auto& e) { return e.first == j; }))
      q.coordinates.push_back(j);
  for (auto code : f.codes()) {
    if (!x.within(u, code)) continue;
    std::vector<int> rest;
    for (int j : q.coordinates) rest.push_back(u.coord(code, j));
    q.members.emplace_back(std::move(rest));
  }
  // code order restricted to the remaining coordinates is still lexicographic
  return q;
}

/// F[S]: union of restrictions over a pattern collection.
inline Family cover(const Family& f, const std::vector<Pattern>& patterns) {
  std::vector<std::uint64_t> out;
  for (auto code : f.codes())
    if (std::any_of(patterns.begin(), patterns.end(), [&](const Pattern& p) { return p.within(f.universe(), code); }))
      out.push_back(code);
  return Family(f.universe(), std::move(out));
}

struct SpreadStep {
  Pattern pattern;
  std::uint64_t g_before = 0;
  std::uint64_t restricted = 0;  // |G(S)|
  bool stopped = false;          // |S| >= 3: recorded, not peeled
};

struct SpreadResult {
  std::vector<Pattern> s0, s1, s2;
  Family leftover;
  std::vector<SpreadStep> trace;
  double r_used = 0;
  bool small_n_warning = false;  // n <= r_used: the leftover bound is not guaranteed
  // post-processing record
  std::vector<std::pair<int, int>> promoted;
  std::string collapsed;  // empty, "s2-cap" or "s1-cap"

  std::vector<Pattern> patterns() const {
    std::vector<Pattern> all = s0;
    all.insert(all.end(), s1.begin(), s1.end());
    all.insert(all.end(), s2.begin(), s2.end());
    return all;
  }
};

/// 2^5 s log2(sk).
inline double default_spread_radius(std::size_t s, int k) {
  return 32.0 * static_cast<double>(s) * std::log2(static_cast<double>(s) * k);
}

namespace detail {

// A pattern as k values, 0 meaning the coordinate is free.
using PatternValues = std::vector<int>;

inline Pattern to_pattern(const Universe& u, const PatternValues& v) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j]) e.emplace_back(static_cast<int>(j) + 1, v[j]);
  return Pattern(u, std::move(e));
}

// Inclusion-maximal pattern S with |G(S)| >= r^{-|S|} |G|, grown from the
// empty pattern by repeatedly moving to a qualifying strict superset of
// smallest size (then largest count, then lexicographically smallest).
inline std::pair<Pattern, std::uint64_t> maximal_pattern(const Universe& u,
                                                         const std::vector<std::uint64_t>& g,
                                                         double r) {
  const int k = u.k();
  const auto base = static_cast<std::uint64_t>(u.n()) + 1;
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  std::vector<int> vals(static_cast<std::size_t>(k));
  for (auto code : g) {
    for (int j = 1; j <= k; ++j) vals[static_cast<std::size_t>(j - 1)] = u.coord(code, j);
    for (std::uint32_t mask = 0; mask < (1U << k); ++mask) {
      std::uint64_t key = 0;
      for (int j = 0; j < k; ++j)
        key = key * base + ((mask >> j) & 1U ? static_cast<std::uint64_t>(vals[static_cast<std::size_t>(j)]) : 0);
      ++counts[key];
    }
  }
  struct Candidate {
    std::size_t size;
    std::uint64_t count;
    Pattern pattern;
    PatternValues values;
  };
  const auto total = static_cast<long double>(g.size());
  std::vector<Candidate> qualifying;
  for (const auto& [key, count] : counts) {
    PatternValues v(static_cast<std::size_t>(k));
    auto rest = key;
    std::size_t size = 0;
    for (int j = k - 1; j >= 0; --j) {
      v[static_cast<std::size_t>(j)] = static_cast<int>(rest % base);
      rest /= base;
      if (v[static_cast<std::size_t>(j)]) ++size;
    }
    if (static_cast<long double>(count) * std::pow(static_cast<long double>(r), static_cast<long double>(size)) >= total)
      qualifying.push_back({size, count, to_pattern(u, v), std::move(v)});
  }
  std::sort(qualifying.begin(), qualifying.end(), [](const Candidate& a, const Candidate& b) {
    if (a.size != b.size) return a.size < b.size;
    if (a.count != b.count) return a.count > b.count;
    return a.pattern < b.pattern;
  });

  PatternValues current(static_cast<std::size_t>(k), 0);
  std::size_t current_size = 0;
  std::uint64_t current_count = g.size();
  while (true) {
    const Candidate* next = nullptr;
    for (const auto& c : qualifying) {
      if (c.size <= current_size) continue;
      bool superset = true;
      for (std::size_t j = 0; j < current.size() && superset; ++j)
        superset = current[j] == 0 || current[j] == c.values[j];
      if (superset) {
        next = &c;
        break;
      }
    }
    if (!next) break;
    current = next->values;
    current_size = next->size;
    current_count = next->count;
  }
  return {to_pattern(u, current), current_count};
}

}  // namespace detail

/// The peeling loop: with G = f, pick an inclusion-maximal pattern S with
/// |G(S)| >= r^{-|S|}|G|; stop if |S| >= 3 or G is empty; otherwise record S
/// and remove G[S] from G. The final G is the leftover.
inline SpreadResult build_spread(const Family& f, std::size_t s, std::optional<double> r_override = std::nullopt) {
  const auto& u = f.universe();
  if (s < 1) throw InvalidInput("spread: s must be >= 1");
  if (u.k() > 20) throw InvalidInput("spread: k must be <= 20");
  {
    long double span = 1;
    for (int j = 0; j < u.k(); ++j) span *= static_cast<long double>(u.n()) + 1;
    if (span >= 9.2e18L) throw InvalidInput("spread: (n+1)^k must fit in 63 bits");
  }
  const double r = r_override ? *r_override : default_spread_radius(s, u.k());
  if (!(r > 1)) throw InvalidInput("spread: r must be > 1, got " + std::to_string(r));

  SpreadResult out{{}, {}, {}, Family(u), {}, r, static_cast<double>(u.n()) <= r, {}, {}};
  std::vector<std::uint64_t> g = f.codes();
  while (!g.empty()) {
    auto [pattern, count] = detail::maximal_pattern(u, g, r);
    SpreadStep step{pattern, g.size(), count, pattern.size() >= 3};
    out.trace.push_back(step);
    if (step.stopped) break;
    std::erase_if(g, [&](std::uint64_t code) { return pattern.within(u, code); });
    (pattern.size() == 0 ? out.s0 : pattern.size() == 1 ? out.s1 : out.s2).push_back(std::move(pattern));
  }
  std::sort(out.s1.begin(), out.s1.end());
  std::sort(out.s2.begin(), out.s2.end());
  out.leftover = Family(u, std::move(g));
  return out;
}

/// Post-processing: any pair lying in >= 2s-1 patterns of s2 is promoted to a
/// singleton of s1 and those patterns dropped; then the whole collection
/// becomes {∅} if |s2| > 4(s-1)^2 or |s1| >= 2s-1.
inline SpreadResult postprocess(SpreadResult result, std::size_t s) {
  if (s < 1) throw InvalidInput("spread: s must be >= 1");
  const auto& u = result.leftover.universe();
  const std::size_t promote_at = 2 * s - 1;
  while (true) {
    std::map<std::pair<int, int>, std::size_t> occurrences;
    for (const auto& p : result.s2)
      for (const auto& e : p.elems()) ++occurrences[e];
    auto hit = std::find_if(occurrences.begin(), occurrences.end(),
                            [&](const auto& kv) { return kv.second >= promote_at; });
    if (hit == occurrences.end()) break;
    const auto e = hit->first;
    result.promoted.push_back(e);
    Pattern single(u, {e});
    if (!std::binary_search(result.s1.begin(), result.s1.end(), single)) {
      result.s1.push_back(single);
      std::sort(result.s1.begin(), result.s1.end());
    }
    std::erase_if(result.s2, [&](const Pattern& p) { return p.contains(e); });
  }
  const auto collapse = [&](const char* why) {
    result.s0 = {Pattern()};
    result.s1.clear();
    result.s2.clear();
    result.collapsed = why;
  };
  if (result.s2.size() > 4 * (s - 1) * (s - 1)) collapse("s2-cap");
  if (result.s1.size() >= promote_at) collapse("s1-cap");
  result.leftover = set_difference(result.leftover, cover(result.leftover, result.patterns()));
  return result;
}

inline SpreadResult spread_approximation(const Family& f, std::size_t s, std::optional<double> r_override = std::nullopt) {
  return postprocess(build_spread(f, s, r_override), s);
}

/// Finds A_i in patterns[i], pairwise disjoint, if any.
inline std::optional<std::vector<Pattern>> disjoint_selection(const std::vector<std::vector<Pattern>>& patterns) {
  std::vector<Pattern> chosen;
  const auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == patterns.size()) return true;
    for (const auto& p : patterns[i]) {
      if (std::any_of(chosen.begin(), chosen.end(), [&](const Pattern& q) { return !disjoint(p, q); })) continue;
      chosen.push_back(p);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (rec(rec, 0)) return chosen;
  return std::nullopt;
}

struct SpreadReport {
  bool partition = false;   // (a)
  bool covers = false;
  bool cap_s1 = false;      // (d) |s1| <= 2(s-1)
  bool cap_s2 = false;      // (e) |s2| <= 4(s-1)^2
  bool leftover_applicable = false;  // n > r_used
  bool leftover_ok = true;  // (b), when applicable
  double leftover_bound = 0;
  bool disjointness_checked = false;
  bool disjointness_ok = true;  // (c), when checked
  std::string disjointness_detail;

  bool ok() const {
    return partition && covers && cap_s1 && cap_s2 && leftover_ok && disjointness_ok;
  }
};

/// 2^15 s^3 log2(sk)^3 n^{k-3}.
inline double spread_leftover_bound(std::size_t s, const Universe& u) {
  const double l = std::log2(static_cast<double>(s) * u.k());
  return std::pow(2.0, 15) * std::pow(static_cast<double>(s), 3) * l * l * l *
         std::pow(static_cast<double>(u.n()), u.k() - 3);
}

/// Structural checks of a post-processed result for f. When a system is
/// given and has no rainbow matching, also spreads every family with the same
/// r and searches for pairwise disjoint patterns, one per family.
inline SpreadReport verify_spread(const Family& f, const SpreadResult& result, std::size_t s,
                                  const FamilySystem* system = nullptr, const SearchBudget& budget = {}) {
  const auto& u = f.universe();
  SpreadReport rep;
  rep.partition =
      std::all_of(result.s0.begin(), result.s0.end(), [](const Pattern& p) { return p.size() == 0; }) &&
      result.s0.size() <= 1 &&
      std::all_of(result.s1.begin(), result.s1.end(), [](const Pattern& p) { return p.size() == 1; }) &&
      std::all_of(result.s2.begin(), result.s2.end(), [](const Pattern& p) { return p.size() == 2; });
  const auto covered = cover(f, result.patterns());
  rep.covers = set_union(covered, result.leftover) == set_union(f, result.leftover);
  rep.cap_s1 = result.s1.size() <= 2 * (s - 1);
  rep.cap_s2 = result.s2.size() <= 4 * (s - 1) * (s - 1);
  rep.leftover_bound = spread_leftover_bound(s, u);
  rep.leftover_applicable = static_cast<double>(u.n()) > result.r_used;
  if (rep.leftover_applicable)
    rep.leftover_ok = static_cast<double>(result.leftover.size()) <= rep.leftover_bound;

  if (system) {
    const auto res = find_rainbow(*system, budget);
    if (res.status == SearchStatus::found) {
      rep.disjointness_detail = "system has a rainbow matching; not applicable";
    } else if (res.status == SearchStatus::budget_exhausted) {
      rep.disjointness_detail = "rainbow search exhausted its budget; not checked";
    } else {
      std::vector<std::vector<Pattern>> all;
      for (const auto& g : system->families())
        all.push_back(spread_approximation(g, system->s(), result.r_used).patterns());
      const auto sel = disjoint_selection(all);
      rep.disjointness_checked = true;
      rep.disjointness_ok = !sel.has_value();
      if (sel) {
        rep.disjointness_detail = "pairwise disjoint selection:";
        for (const auto& p : *sel) rep.disjointness_detail += " " + to_string(p);
      } else {
        rep.disjointness_detail = "no pairwise disjoint selection";
      }
    }
  }
  return rep;
}

}  // namespace rainbowlab
