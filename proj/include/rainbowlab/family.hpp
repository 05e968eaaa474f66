#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rainbowlab/error.hpp"

namespace rainbowlab {

/// A point of [n]^k. Values are 1-based; operator[] indexes positions from 0,
/// at(j) takes a 1-based coordinate index.
class Tuple {
 public:
  Tuple() = default;
  explicit Tuple(std::vector<int> coords) : coords_(std::move(coords)) {}
  Tuple(std::initializer_list<int> coords) : coords_(coords) {}

  std::size_t size() const { return coords_.size(); }
  int operator[](std::size_t pos) const { return coords_[pos]; }
  int at(int j) const { return coords_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<int>& coords() const { return coords_; }

  auto operator<=>(const Tuple&) const = default;

 private:
  std::vector<int> coords_;
};

inline std::string to_string(const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t[i]);
  }
  return out + ")";
}

/// [n]^k. Tuples are encoded as integers in [0, n^k) with the first
/// coordinate most significant, so code order equals lexicographic order.
class Universe {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 40;

  Universe(int n, int k) : n_(n), k_(k) {
    if (n < 1) throw InvalidInput("universe: n must be >= 1, got " + std::to_string(n));
    if (k < 1) throw InvalidInput("universe: k must be >= 1, got " + std::to_string(k));
    weights_.assign(static_cast<std::size_t>(k), 1);
    std::uint64_t size = 1;
    for (int i = 0; i < k; ++i) {
      if (size > kMaxSize / static_cast<std::uint64_t>(n))
        throw InvalidInput("universe: n^k exceeds 2^40 (n=" + std::to_string(n) +
                           ", k=" + std::to_string(k) + ")");
      size *= static_cast<std::uint64_t>(n);
    }
    size_ = size;
    for (int i = k - 2; i >= 0; --i)
      weights_[static_cast<std::size_t>(i)] =
          weights_[static_cast<std::size_t>(i) + 1] * static_cast<std::uint64_t>(n);
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t size() const { return size_; }

  /// n^e for 0 <= e <= k.
  std::uint64_t power(int e) const {
    if (e < 0 || e > k_) throw InvalidInput("universe: exponent out of range");
    return e == 0 ? 1 : weights_[static_cast<std::size_t>(k_ - e)] * static_cast<std::uint64_t>(n_);
  }

  bool valid(const Tuple& t) const {
    if (t.size() != static_cast<std::size_t>(k_)) return false;
    return std::all_of(t.coords().begin(), t.coords().end(),
                       [&](int v) { return v >= 1 && v <= n_; });
  }

  void require(const Tuple& t) const {
    if (!valid(t))
      throw InvalidInput("tuple " + to_string(t) + " is not a point of [" + std::to_string(n_) +
                         "]^" + std::to_string(k_));
  }

  std::uint64_t encode(const Tuple& t) const {
    require(t);
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
      code += static_cast<std::uint64_t>(t[i] - 1) * weights_[i];
    return code;
  }

  Tuple decode(std::uint64_t code) const {
    std::vector<int> coords(static_cast<std::size_t>(k_));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      coords[i] = static_cast<int>(code / weights_[i]) + 1;
      code %= weights_[i];
    }
    return Tuple(std::move(coords));
  }

  /// Value (1-based) of coordinate j (1-based) of an encoded tuple.
  int coord(std::uint64_t code, int j) const {
    const auto w = weights_[static_cast<std::size_t>(j - 1)];
    return static_cast<int>((code / w) % static_cast<std::uint64_t>(n_)) + 1;
  }

  /// Encoded tuple with coordinate j replaced by value.
  std::uint64_t replace(std::uint64_t code, int j, int value) const {
    const auto w = weights_[static_cast<std::size_t>(j - 1)];
    const auto old = static_cast<std::uint64_t>(coord(code, j) - 1);
    return code - old * w + static_cast<std::uint64_t>(value - 1) * w;
  }

  void require_coordinate(int j) const {
    if (j < 1 || j > k_)
      throw InvalidInput("coordinate index " + std::to_string(j) + " outside 1.." +
                         std::to_string(k_));
  }
  void require_value(int a) const {
    if (a < 1 || a > n_)
      throw InvalidInput("value " + std::to_string(a) + " outside 1.." + std::to_string(n_));
  }

  bool operator==(const Universe& o) const { return n_ == o.n_ && k_ == o.k_; }

 private:
  int n_;
  int k_;
  std::uint64_t size_ = 1;
  std::vector<std::uint64_t> weights_;
};

inline void require_same(const Universe& a, const Universe& b) {
  if (!(a == b)) throw InvalidInput("universe mismatch");
}

/// True iff the tuples differ in every coordinate.
inline bool disjoint(const Tuple& a, const Tuple& b) {
  if (a.size() != b.size()) throw InvalidInput("disjoint: tuples of different length");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == b[i]) return false;
  return true;
}

inline bool disjoint(const Universe& u, const Tuple& a, const Tuple& b) {
  u.require(a);
  u.require(b);
  return disjoint(a, b);
}

inline bool disjoint_codes(const Universe& u, std::uint64_t a, std::uint64_t b) {
  for (int j = 1; j <= u.k(); ++j)
    if (u.coord(a, j) == u.coord(b, j)) return false;
  return true;
}

/// A set of points of [n]^k, stored as sorted tuple codes.
class Family {
 public:
  explicit Family(Universe u) : universe_(std::move(u)) {}

  Family(Universe u, std::vector<std::uint64_t> codes)
      : universe_(std::move(u)), codes_(std::move(codes)) {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    if (!codes_.empty() && codes_.back() >= universe_.size())
      throw InvalidInput("family: tuple code outside the universe");
  }

  static Family from_tuples(const Universe& u, std::span<const Tuple> tuples) {
    std::vector<std::uint64_t> codes;
    codes.reserve(tuples.size());
    for (const auto& t : tuples) codes.push_back(u.encode(t));
    return Family(u, std::move(codes));
  }

  static Family from_tuples(const Universe& u, std::initializer_list<Tuple> tuples) {
    return from_tuples(u, std::span<const Tuple>(tuples.begin(), tuples.size()));
  }

  /// All of T_{n,k}.
  static Family all(const Universe& u) {
    std::vector<std::uint64_t> codes(u.size());
    for (std::uint64_t c = 0; c < u.size(); ++c) codes[c] = c;
    return Family(u, std::move(codes));
  }

  const Universe& universe() const { return universe_; }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

  bool contains(std::uint64_t code) const {
    return std::binary_search(codes_.begin(), codes_.end(), code);
  }
  bool contains(const Tuple& t) const { return universe_.valid(t) && contains(universe_.encode(t)); }

  /// Inserting an existing member is a no-op; returns whether the set grew.
  bool insert(std::uint64_t code) {
    if (code >= universe_.size()) throw InvalidInput("family: tuple code outside the universe");
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it != codes_.end() && *it == code) return false;
    codes_.insert(it, code);
    return true;
  }
  bool insert(const Tuple& t) { return insert(universe_.encode(t)); }

  bool erase(std::uint64_t code) {
    auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return false;
    codes_.erase(it);
    return true;
  }

  std::vector<Tuple> tuples() const {
    std::vector<Tuple> out;
    out.reserve(codes_.size());
    for (auto c : codes_) out.push_back(universe_.decode(c));
    return out;
  }

  bool subset_of(const Family& other) const {
    return universe_ == other.universe_ &&
           std::includes(other.codes_.begin(), other.codes_.end(), codes_.begin(), codes_.end());
  }

  bool operator==(const Family& o) const { return universe_ == o.universe_ && codes_ == o.codes_; }

 private:
  Universe universe_;
  std::vector<std::uint64_t> codes_;
};

inline Family set_union(const Family& a, const Family& b) {
  require_same(a.universe(), b.universe());
  std::vector<std::uint64_t> out;
  std::set_union(a.codes().begin(), a.codes().end(), b.codes().begin(), b.codes().end(),
                 std::back_inserter(out));
  return Family(a.universe(), std::move(out));
}

inline Family set_difference(const Family& a, const Family& b) {
  require_same(a.universe(), b.universe());
  std::vector<std::uint64_t> out;
  std::set_difference(a.codes().begin(), a.codes().end(), b.codes().begin(), b.codes().end(),
                      std::back_inserter(out));
  return Family(a.universe(), std::move(out));
}

/// The hyperplane H_{j,a}: every tuple whose j-th coordinate equals a.
inline Family hyperplane(const Universe& u, int j, int a) {
  u.require_coordinate(j);
  u.require_value(a);
  std::vector<std::uint64_t> codes;
  codes.reserve(u.power(u.k() - 1));
  for (std::uint64_t c = 0; c < u.size(); ++c)
    if (u.coord(c, j) == a) codes.push_back(c);
  return Family(u, std::move(codes));
}

/// Tuples with positive multiplicities.
class TupleMultiset {
 public:
  explicit TupleMultiset(Universe u) : universe_(std::move(u)) {}

  explicit TupleMultiset(const Family& f) : universe_(f.universe()) {
    for (auto c : f.codes()) entries_.emplace_hint(entries_.end(), c, 1);
  }

  const Universe& universe() const { return universe_; }
  const std::map<std::uint64_t, std::uint64_t>& entries() const { return entries_; }

  void add(std::uint64_t code, std::uint64_t multiplicity = 1) {
    if (code >= universe_.size()) throw InvalidInput("multiset: tuple code outside the universe");
    if (multiplicity == 0) return;
    entries_[code] += multiplicity;
  }

  /// Removes up to `multiplicity` copies; entries reaching zero disappear.
  void remove(std::uint64_t code, std::uint64_t multiplicity = 1) {
    auto it = entries_.find(code);
    if (it == entries_.end()) return;
    if (it->second <= multiplicity)
      entries_.erase(it);
    else
      it->second -= multiplicity;
  }

  std::uint64_t multiplicity(std::uint64_t code) const {
    auto it = entries_.find(code);
    return it == entries_.end() ? 0 : it->second;
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& [code, m] : entries_) sum += m;
    return sum;
  }

  std::uint64_t max_multiplicity() const {
    std::uint64_t best = 0;
    for (const auto& [code, m] : entries_) best = std::max(best, m);
    return best;
  }

  std::size_t distinct() const { return entries_.size(); }

  bool operator==(const TupleMultiset& o) const {
    return universe_ == o.universe_ && entries_ == o.entries_;
  }

 private:
  Universe universe_;
  std::map<std::uint64_t, std::uint64_t> entries_;
};

/// A ⊕ B: multiplicities add.
inline TupleMultiset multiset_sum(const TupleMultiset& x, const TupleMultiset& y) {
  require_same(x.universe(), y.universe());
  TupleMultiset out = x;
  for (const auto& [code, m] : y.entries()) out.add(code, m);
  return out;
}
inline TupleMultiset multiset_sum(const Family& x, const Family& y) {
  return multiset_sum(TupleMultiset(x), TupleMultiset(y));
}
inline TupleMultiset multiset_sum(const Family& x, const TupleMultiset& y) {
  return multiset_sum(TupleMultiset(x), y);
}
inline TupleMultiset multiset_sum(const TupleMultiset& x, const Family& y) {
  return multiset_sum(x, TupleMultiset(y));
}

/// An ordered list of s families over one universe, with optional thresholds f_i.
class FamilySystem {
 public:
  FamilySystem(Universe u, std::vector<Family> families,
               std::optional<std::vector<std::uint64_t>> thresholds = std::nullopt)
      : universe_(std::move(u)), families_(std::move(families)), thresholds_(std::move(thresholds)) {
    if (families_.empty()) throw InvalidInput("family system: s must be >= 1");
    for (const auto& f : families_) require_same(universe_, f.universe());
    if (thresholds_ && thresholds_->size() != families_.size())
      throw InvalidInput("family system: " + std::to_string(thresholds_->size()) +
                         " thresholds for " + std::to_string(families_.size()) + " families");
  }

  const Universe& universe() const { return universe_; }
  std::size_t s() const { return families_.size(); }
  const std::vector<Family>& families() const { return families_; }
  const Family& operator[](std::size_t i) const { return families_[i]; }
  const std::optional<std::vector<std::uint64_t>>& thresholds() const { return thresholds_; }

  /// Copy with family i replaced.
  FamilySystem with_family(std::size_t i, Family f) const {
    FamilySystem out = *this;
    require_same(universe_, f.universe());
    out.families_.at(i) = std::move(f);
    return out;
  }

  /// Pointwise F_i ⊆ other.F_i.
  bool subset_of(const FamilySystem& other) const {
    if (s() != other.s()) return false;
    for (std::size_t i = 0; i < s(); ++i)
      if (!families_[i].subset_of(other.families_[i])) return false;
    return true;
  }

  bool operator==(const FamilySystem& o) const {
    return universe_ == o.universe_ && families_ == o.families_ && thresholds_ == o.thresholds_;
  }

 private:
  Universe universe_;
  std::vector<Family> families_;
  std::optional<std::vector<std::uint64_t>> thresholds_;
};

}  // namespace rainbowlab
