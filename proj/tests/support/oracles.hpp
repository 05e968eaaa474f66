#pragma once

// Independent reference implementations used only by the tests. They favour
// obviousness over speed and share no search code with the library.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rainbowlab/rainbowlab.hpp"

namespace oracle {

namespace rl = rainbowlab;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline bool tuples_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] == b[j]) return false;
  return true;
}

/// Nested loops over families in index order.
inline bool has_rainbow(const std::vector<std::vector<std::vector<int>>>& families) {
  std::vector<const std::vector<int>*> chosen;
  const auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == families.size()) return true;
    for (const auto& t : families[i]) {
      bool ok = true;
      for (const auto* c : chosen) ok = ok && tuples_disjoint(*c, t);
      if (!ok) continue;
      chosen.push_back(&t);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return rec(rec, 0);
}

inline bool has_rainbow(const rl::FamilySystem& system) {
  std::vector<std::vector<std::vector<int>>> fams;
  for (const auto& f : system.families()) {
    std::vector<std::vector<int>> rows;
    for (const auto& t : f.tuples()) rows.push_back(t.coords());
    fams.push_back(std::move(rows));
  }
  return has_rainbow(fams);
}

/// All subsets of {0..size-1} as bitmasks (size <= 20).
inline std::vector<std::vector<std::uint64_t>> subsets_of_size_at_least(std::uint64_t size, std::uint64_t min) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << size); ++mask) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) < min) continue;
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < size; ++c)
      if (mask >> c & 1) codes.push_back(c);
    out.push_back(std::move(codes));
  }
  return out;
}

/// Checks every system with |F_i| > f_i, of every size (no monotone reduction).
/// Returns true iff all have a rainbow matching.
inline bool satisfying_all_sizes(const rl::Universe& u, const std::vector<std::uint64_t>& f) {
  std::vector<std::vector<std::vector<std::uint64_t>>> options;
  for (auto fi : f) options.push_back(subsets_of_size_at_least(u.size(), fi + 1));
  for (const auto& o : options)
    if (o.empty()) return true;
  std::vector<std::size_t> idx(f.size(), 0);
  while (true) {
    std::vector<rl::Family> fams;
    for (std::size_t i = 0; i < f.size(); ++i) fams.emplace_back(u, options[i][idx[i]]);
    if (!has_rainbow(rl::FamilySystem(u, fams))) return false;
    std::size_t i = 0;
    while (i < f.size() && ++idx[i] == options[i].size()) idx[i++] = 0;
    if (i == f.size()) return true;
  }
}

/// Perfect matchings found by brute force over all n-subsets of [n]^k.
inline std::uint64_t count_perfect_matchings(const rl::Universe& u) {
  std::uint64_t count = 0;
  const auto n = static_cast<std::uint64_t>(u.n());
  std::vector<std::uint64_t> pick;
  const auto rec = [&](auto&& self, std::uint64_t start) -> void {
    if (pick.size() == n) {
      ++count;
      return;
    }
    for (std::uint64_t c = start; c < u.size(); ++c) {
      const auto t = u.decode(c).coords();
      bool ok = true;
      for (auto p : pick) ok = ok && tuples_disjoint(u.decode(p).coords(), t);
      if (!ok) continue;
      pick.push_back(c);
      self(self, c + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return count;
}

/// Sparse polynomial in s variables with integer coefficients.
using Poly = std::map<std::vector<int>, BigInt>;

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

/// prod_{i<j} (x_i - x_j)^power, fully expanded.
inline Poly vandermonde_power(std::size_t s, int power) {
  Poly p{{std::vector<int>(s, 0), 1}};
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i + 1; j < s; ++j) {
      std::vector<int> ei(s, 0), ej(s, 0);
      ei[i] = 1;
      ej[j] = 1;
      const Poly factor{{ei, 1}, {ej, -1}};
      for (int r = 0; r < power; ++r) p = multiply(p, factor);
    }
  return p;
}

inline BigInt coefficient(const Poly& p, const std::vector<int>& e) {
  auto it = p.find(e);
  return it == p.end() ? BigInt(0) : it->second;
}

/// Rank over Q by plain Gaussian elimination with rationals.
inline std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
  std::size_t r = 0;
  const auto cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational factor = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= factor * m[r][j];
    }
    ++r;
  }
  return r;
}

/// Minimum vanishing degree by rational elimination on the monomial matrix.
inline int vanishing_degree(const std::vector<std::pair<Rational, Rational>>& points) {
  for (int d = 1;; ++d) {
    std::vector<std::vector<Rational>> m;
    for (const auto& [x, y] : points) {
      std::vector<Rational> row;
      for (int i = 0; i <= d; ++i)
        for (int j = 0; i + j <= d; ++j) {
          Rational v = 1;
          for (int t = 0; t < i; ++t) v *= x;
          for (int t = 0; t < j; ++t) v *= y;
          row.push_back(v);
        }
      m.push_back(std::move(row));
    }
    const auto monos = static_cast<std::size_t>((d + 1) * (d + 2) / 2);
    if (rational_rank(m) < monos) return d;
  }
}

/// k-subsets of [n] meeting [s-1], counted directly; and C(sk-1, k) by Pascal's rule.
inline std::uint64_t erdos_threshold(int n, int s, int k) {
  std::uint64_t meeting = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (__builtin_popcountll(mask) != k) continue;
    if (mask & ((std::uint64_t{1} << (s - 1)) - 1)) ++meeting;
  }
  const int top = s * k - 1;
  std::vector<std::vector<std::uint64_t>> pascal(static_cast<std::size_t>(std::max(top, 0)) + 1);
  for (int i = 0; i <= top; ++i) {
    pascal[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j)
      pascal[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          pascal[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j) - 1] +
          pascal[static_cast<std::size_t>(i) - 1][static_cast<std::size_t>(j)];
  }
  const std::uint64_t clique = top >= k ? pascal[static_cast<std::size_t>(top)][static_cast<std::size_t>(k)] : 0;
  return std::max(meeting, clique);
}

/// Random family with members drawn independently with probability p.
inline rl::Family random_family(const rl::Universe& u, double p, rl::CounterRng& rng) {
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c = 0; c < u.size(); ++c)
    if (rng.uniform() < p) codes.push_back(c);
  return rl::Family(u, std::move(codes));
}

/// Random system without a rainbow matching: random families, members removed
/// from a random family until the oracle finds no rainbow matching.
inline rl::FamilySystem random_no_rainbow(const rl::Universe& u, std::size_t s, double p, rl::CounterRng& rng) {
  std::vector<rl::Family> fams;
  for (std::size_t i = 0; i < s; ++i) fams.push_back(random_family(u, p, rng));
  while (has_rainbow(rl::FamilySystem(u, fams))) {
    auto& f = fams[rng.below(s)];
    if (f.empty()) continue;
    f.erase(f.codes()[rng.below(f.size())]);
  }
  return rl::FamilySystem(u, std::move(fams));
}

}  // namespace oracle
