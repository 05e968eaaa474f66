#pragma once

// k = 2 polynomial method: coefficients of Vandermonde products, sequences
// built from permutation pairs, and the vanishing degree of planar point sets.
// Everything here is exact.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include "rainbowlab/bounds.hpp"
#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"
#include "rainbowlab/sequence.hpp"

namespace rainbowlab {

using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline bool is_permutation_of_range(const std::vector<int>& a) {
  std::vector<bool> seen(a.size(), false);
  for (int v : a) {
    if (v < 0 || static_cast<std::size_t>(v) >= a.size() || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

inline int permutation_sign(const std::vector<int>& a) {
  int inversions = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (a[i] > a[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

inline void require_length(std::size_t s, const std::vector<int>& e, const char* what) {
  if (s < 1) throw InvalidInput(std::string(what) + ": s must be >= 1");
  if (e.size() != s)
    throw InvalidInput(std::string(what) + ": exponent vector has " + std::to_string(e.size()) +
                       " entries, expected " + std::to_string(s));
  for (int v : e)
    if (v < 0) throw InvalidInput(std::string(what) + ": exponents must be nonnegative");
}

}  // namespace detail

/// Coefficient of x_1^{a_1}...x_s^{a_s} in prod_{i<j} (x_i - x_j).
/// The leading monomial x_1^{s-1} x_2^{s-2} ... x_s^0 has coefficient +1.
inline int vandermonde_coeff(std::size_t s, const std::vector<int>& a) {
  detail::require_length(s, a, "vandermonde_coeff");
  if (!detail::is_permutation_of_range(a)) return 0;
  const auto pairs = s * (s - 1) / 2;  // sign of the reversal
  return (pairs % 2 ? -1 : 1) * detail::permutation_sign(a);
}

struct SquaredCoefficient {
  BigInt value = 0;
  std::uint64_t pairs = 0;  // contributing (σ, τ)
  std::optional<std::pair<std::vector<int>, std::vector<int>>> witness;  // first contributing pair
};

/// Coefficient of x^e in prod_{i<j} (x_i - x_j)^2 as the signed count of
/// permutation pairs (σ, τ) of {0..s-1} with σ + τ = e.
inline SquaredCoefficient squared_coeff_detail(std::size_t s, const std::vector<int>& e) {
  detail::require_length(s, e, "squared_coeff");
  SquaredCoefficient out;
  long long sum = 0;
  for (int v : e) sum += v;
  if (sum != static_cast<long long>(s * (s - 1))) return out;
  if (std::any_of(e.begin(), e.end(), [&](int v) { return v > 2 * static_cast<int>(s - 1); })) return out;

  std::vector<int> sigma(s), tau(s);
  std::vector<bool> used_s(s, false), used_t(s, false);
  long long total = 0;
  const auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == s) {
      total += detail::permutation_sign(sigma) * detail::permutation_sign(tau);
      ++out.pairs;
      if (!out.witness) out.witness.emplace(sigma, tau);
      return;
    }
    for (int v = 0; v < static_cast<int>(s); ++v) {
      const int w = e[i] - v;
      if (used_s[static_cast<std::size_t>(v)] || w < 0 || w >= static_cast<int>(s) || used_t[static_cast<std::size_t>(w)])
        continue;
      used_s[static_cast<std::size_t>(v)] = used_t[static_cast<std::size_t>(w)] = true;
      sigma[i] = v;
      tau[i] = w;
      self(self, i + 1);
      used_s[static_cast<std::size_t>(v)] = used_t[static_cast<std::size_t>(w)] = false;
    }
  };
  rec(rec, 0);
  out.value = total;
  return out;
}

inline BigInt squared_coeff(std::size_t s, const std::vector<int>& e) { return squared_coeff_detail(s, e).value; }

struct ModularCoefficient {
  std::uint64_t p = 0;
  std::uint64_t value = 0;  // in [0, p)
  bool nonzero() const { return value != 0; }
};

inline bool is_prime(std::uint64_t p) {
  return p >= 2 && boost::multiprecision::miller_rabin_test(boost::multiprecision::cpp_int(p), 25);
}

inline ModularCoefficient coeff_mod_p(std::size_t s, const std::vector<int>& e, std::uint64_t p) {
  if (!is_prime(p)) throw InvalidInput("coeff_mod_p: " + std::to_string(p) + " is not prime");
  BigInt c = squared_coeff(s, e) % p;
  if (c < 0) c += p;
  return {p, static_cast<std::uint64_t>(c)};
}

struct PermutationPair {
  std::vector<int> a, b;

  PermutationPair(std::vector<int> a_, std::vector<int> b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a.empty() || a.size() != b.size()) throw InvalidInput("permutation pair: a and b must have equal length >= 1");
    if (!detail::is_permutation_of_range(a) || !detail::is_permutation_of_range(b))
      throw InvalidInput("permutation pair: a and b must be permutations of {0, ..., s-1}");
  }
  std::size_t s() const { return a.size(); }
};

struct PermutationSequence {
  SequenceSpec spec;
  int split_coefficient = 0;  // coefficient of x^a y^b in V(x) V(y), always ±1
  BigInt squared_coefficient;  // coefficient of x^{a+b} in V(x)^2, for reference
  std::string provenance;
};

/// f_i = n (a_i + b_i) on [n]^2.
inline PermutationSequence sequence_from_perms(int n, const PermutationPair& pp) {
  const auto s = pp.s();
  std::vector<std::uint64_t> f(s);
  std::vector<int> e(s);
  for (std::size_t i = 0; i < s; ++i) {
    e[i] = pp.a[i] + pp.b[i];
    f[i] = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(e[i]);
  }
  PermutationSequence out{SequenceSpec(Universe(n, 2), std::move(f)), 0, 0, {}};
  out.split_coefficient = vandermonde_coeff(s, pp.a) * vandermonde_coeff(s, pp.b);
  if (out.split_coefficient != 1 && out.split_coefficient != -1)
    throw std::logic_error("sequence_from_perms: split coefficient is not ±1");
  out.squared_coefficient = squared_coeff(s, e);
  out.provenance = "coefficient of x^a y^b in prod_{i<j}(x_i-x_j)(y_i-y_j) is " +
                   std::to_string(out.split_coefficient) + "; coefficient of x^(a+b) in prod_{i<j}(x_i-x_j)^2 is " +
                   out.squared_coefficient.str();
  return out;
}

/// Exhaustive check that f_i = n (a_i + b_i) is satisfying.
inline Verdict verify_thm15(int n, const PermutationPair& pp, const SearchBudget& budget = {},
                            const EnumerationOptions& options = {}) {
  return is_satisfying(sequence_from_perms(n, pp).spec, budget, options);
}

using Point2 = std::pair<Rational, Rational>;

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<BigInt>> m) {
  if (m.empty()) return 0;
  const auto rows = m.size(), cols = m[0].size();
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return r;
}

/// Monomials x^i y^j with i + j <= d, graded then lexicographic (x before y).
inline std::vector<std::pair<int, int>> monomials_up_to(int d) {
  std::vector<std::pair<int, int>> out;
  for (int total = 0; total <= d; ++total)
    for (int i = total; i >= 0; --i) out.emplace_back(i, total - i);
  return out;
}

/// Evaluation matrix of the monomials of degree <= d at the points, each row
/// scaled to integers by the d-th powers of the coordinate denominators.
inline std::vector<std::vector<BigInt>> evaluation_matrix(const std::vector<Point2>& points, int d) {
  const auto monos = monomials_up_to(d);
  std::vector<std::vector<BigInt>> m;
  m.reserve(points.size());
  for (const auto& [x, y] : points) {
    const BigInt px = numerator(x), qx = denominator(x), py = numerator(y), qy = denominator(y);
    std::vector<BigInt> row;
    row.reserve(monos.size());
    for (const auto& [i, j] : monos)
      row.push_back(pow(px, static_cast<unsigned>(i)) * pow(qx, static_cast<unsigned>(d - i)) *
                    pow(py, static_cast<unsigned>(j)) * pow(qy, static_cast<unsigned>(d - j)));
    m.push_back(std::move(row));
  }
  return m;
}

/// Minimum d >= 1 such that a nonzero polynomial of degree <= d vanishes on
/// every point. Duplicate points are ignored.
inline int deg_set(std::vector<Point2> points) {
  if (points.empty()) throw InvalidInput("deg_set: the point set is empty");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (int d = 1;; ++d) {
    const auto monos = static_cast<std::size_t>((d + 1) * (d + 2) / 2);
    if (monos > points.size()) return d;  // more unknowns than equations
    if (bareiss_rank(evaluation_matrix(points, d)) < monos) return d;
  }
}

inline std::vector<Point2> points_of(const Family& f) {
  if (f.universe().k() != 2) throw InvalidInput("points_of: family must have k = 2");
  std::vector<Point2> out;
  for (const auto& t : f.tuples()) out.emplace_back(Rational(t[0]), Rational(t[1]));
  return out;
}

struct SzReport {
  std::uint64_t size = 0;
  int n = 0;
  int degree = 0;
  bool holds() const { return size <= static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(degree); }
};

/// |F| <= n deg(F) for a nonempty F ⊆ [n]^2.
inline SzReport sz_check(const Family& f) {
  if (f.universe().k() != 2) throw InvalidInput("sz_check: family must have k = 2");
  return {f.size(), f.universe().n(), deg_set(points_of(f))};
}

}  // namespace rainbowlab
