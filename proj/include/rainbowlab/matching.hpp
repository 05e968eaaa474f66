#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rainbowlab/error.hpp"
#include "rainbowlab/family.hpp"

namespace rainbowlab {

/// A perfect matching of T_{n,k}, parameterized by k-1 permutations of [n].
/// Member i (1-based) is the tuple (i, perms[0][i-1], ..., perms[k-2][i-1]).
/// Fixing the first coordinate to the identity makes this a bijection between
/// (k-1)-tuples of permutations and perfect matchings.
class PerfectMatching {
 public:
  PerfectMatching(Universe u, std::vector<std::vector<int>> perms)
      : universe_(std::move(u)), perms_(std::move(perms)) {
    validate();
  }

  /// The matching {(i, i, ..., i)}.
  static PerfectMatching diagonal(const Universe& u) {
    std::vector<int> id(static_cast<std::size_t>(u.n()));
    for (int i = 0; i < u.n(); ++i) id[static_cast<std::size_t>(i)] = i + 1;
    return PerfectMatching(u, std::vector<std::vector<int>>(static_cast<std::size_t>(u.k() - 1), id));
  }

  const Universe& universe() const { return universe_; }
  const std::vector<std::vector<int>>& perms() const { return perms_; }
  std::size_t size() const { return static_cast<std::size_t>(universe_.n()); }

  Tuple member(int i) const {
    std::vector<int> coords;
    coords.reserve(static_cast<std::size_t>(universe_.k()));
    coords.push_back(i);
    for (const auto& p : perms_) coords.push_back(p[static_cast<std::size_t>(i - 1)]);
    return Tuple(std::move(coords));
  }

  std::uint64_t member_code(int i) const {
    std::uint64_t code = static_cast<std::uint64_t>(i - 1) * universe_.power(universe_.k() - 1);
    for (std::size_t j = 0; j < perms_.size(); ++j)
      code += static_cast<std::uint64_t>(perms_[j][static_cast<std::size_t>(i - 1)] - 1) *
              universe_.power(universe_.k() - 2 - static_cast<int>(j));
    return code;
  }

  std::vector<Tuple> members() const {
    std::vector<Tuple> out;
    for (int i = 1; i <= universe_.n(); ++i) out.push_back(member(i));
    return out;
  }

  Family as_family() const {
    std::vector<std::uint64_t> codes;
    for (int i = 1; i <= universe_.n(); ++i) codes.push_back(member_code(i));
    return Family(universe_, std::move(codes));
  }

  bool operator==(const PerfectMatching& o) const {
    return universe_ == o.universe_ && perms_ == o.perms_;
  }

 private:
  void validate() const {
    if (perms_.size() != static_cast<std::size_t>(universe_.k() - 1))
      throw InvalidInput("perfect matching: expected " + std::to_string(universe_.k() - 1) +
                         " permutations");
    for (const auto& p : perms_) {
      if (p.size() != static_cast<std::size_t>(universe_.n()))
        throw InvalidInput("perfect matching: permutation of wrong length");
      std::vector<bool> seen(p.size() + 1, false);
      for (int v : p) {
        if (v < 1 || v > universe_.n() || seen[static_cast<std::size_t>(v)])
          throw InvalidInput("perfect matching: not a permutation of [n]");
        seen[static_cast<std::size_t>(v)] = true;
      }
    }
  }

  Universe universe_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace rainbowlab
