#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "rainbowlab/family.hpp"

namespace rainbowlab {

/// The group (S_n)^k acting on [n]^k by relabeling values independently in
/// each coordinate. Rainbow-matching existence is invariant under it.
class ValueRelabelingGroup {
 public:
  static constexpr std::uint64_t kDefaultMaxOrder = 200000;

  /// Returns nullopt if the group order exceeds max_order.
  static std::optional<ValueRelabelingGroup> make(const Universe& u,
                                                  std::uint64_t max_order = kDefaultMaxOrder) {
    std::uint64_t fact = 1;
    for (int i = 2; i <= u.n(); ++i) {
      fact *= static_cast<std::uint64_t>(i);
      if (fact > max_order) return std::nullopt;
    }
    std::uint64_t order = 1;
    for (int j = 0; j < u.k(); ++j) {
      order *= fact;
      if (order > max_order) return std::nullopt;
    }
    return ValueRelabelingGroup(u, fact);
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (int j = 0; j < universe_.k(); ++j) o *= perm_count_;
    return o;
  }

  /// Calls visit(image) for every group element, with image the sorted codes.
  /// Stops early when visit returns false.
  template <typename Visit>
  void for_each_image(const std::vector<std::uint64_t>& codes, Visit&& visit) const {
    const auto k = static_cast<std::size_t>(universe_.k());
    std::vector<std::size_t> odo(k, 0);
    std::vector<std::vector<int>> values(codes.size(), std::vector<int>(k));
    for (std::size_t t = 0; t < codes.size(); ++t)
      for (std::size_t j = 0; j < k; ++j)
        values[t][j] = universe_.coord(codes[t], static_cast<int>(j) + 1) - 1;
    std::vector<std::uint64_t> image(codes.size());
    while (true) {
      for (std::size_t t = 0; t < codes.size(); ++t) {
        std::uint64_t c = 0;
        for (std::size_t j = 0; j < k; ++j) c += offsets_[j][odo[j]][static_cast<std::size_t>(values[t][j])];
        image[t] = c;
      }
      std::sort(image.begin(), image.end());
      if (!visit(image)) return;
      std::size_t j = 0;
      while (j < k && ++odo[j] == perm_count_) odo[j++] = 0;
      if (j == k) return;
    }
  }

  /// A sorted code list is canonical when no image is lexicographically smaller.
  bool is_canonical(const std::vector<std::uint64_t>& sorted_codes) const {
    bool canonical = true;
    for_each_image(sorted_codes, [&](const std::vector<std::uint64_t>& image) {
      if (image < sorted_codes) canonical = false;
      return canonical;
    });
    return canonical;
  }

  std::vector<std::uint64_t> canonical_form(const std::vector<std::uint64_t>& sorted_codes) const {
    std::vector<std::uint64_t> best = sorted_codes;
    for_each_image(sorted_codes, [&](const std::vector<std::uint64_t>& image) {
      if (image < best) best = image;
      return true;
    });
    return best;
  }

 private:
  ValueRelabelingGroup(const Universe& u, std::uint64_t perm_count)
      : universe_(u), perm_count_(perm_count) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(u.n()));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    offsets_.resize(static_cast<std::size_t>(u.k()));
    for (int j = 0; j < u.k(); ++j) {
      const auto weight = u.power(u.k() - 1 - j);
      for (const auto& perm : perms) {
        std::vector<std::uint64_t> row(perm.size());
        for (std::size_t v = 0; v < perm.size(); ++v)
          row[v] = static_cast<std::uint64_t>(perm[v]) * weight;
        offsets_[static_cast<std::size_t>(j)].push_back(std::move(row));
      }
    }
  }

  Universe universe_;
  std::uint64_t perm_count_;
  // offsets_[j][p][v] = (p(v)) * n^{k-1-j}, values 0-based
  std::vector<std::vector<std::vector<std::uint64_t>>> offsets_;
};

/// Lexicographic enumeration of m-subsets of {0, ..., universe-1}.
class Combination {
 public:
  Combination(std::uint64_t universe, std::uint64_t m) : universe_(universe), idx_(m) {
    std::iota(idx_.begin(), idx_.end(), std::uint64_t{0});
    valid_ = m <= universe;
  }

  bool valid() const { return valid_; }
  const std::vector<std::uint64_t>& current() const { return idx_; }

  bool next() {
    const auto m = idx_.size();
    std::size_t i = m;
    while (i > 0) {
      --i;
      if (idx_[i] < universe_ - m + i) {
        ++idx_[i];
        for (std::size_t j = i + 1; j < m; ++j) idx_[j] = idx_[j - 1] + 1;
        return true;
      }
    }
    valid_ = false;
    return false;
  }

  void reset() {
    std::iota(idx_.begin(), idx_.end(), std::uint64_t{0});
    valid_ = idx_.size() <= universe_;
  }

 private:
  std::uint64_t universe_;
  std::vector<std::uint64_t> idx_;
  bool valid_ = true;
};

}  // namespace rainbowlab
