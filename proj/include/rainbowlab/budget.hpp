#pragma once

#include <chrono>
#include <cstdint>
#include <limits>

#include "rainbowlab/error.hpp"

namespace rainbowlab {

struct SearchBudget {
  std::uint64_t max_nodes = std::uint64_t{1} << 40;
  std::chrono::milliseconds time_limit = std::chrono::hours(24 * 365);

  void validate() const {
    if (max_nodes == 0) throw InvalidInput("search budget: max_nodes must be positive");
    if (time_limit.count() <= 0) throw InvalidInput("search budget: time_limit must be positive");
  }
};

// Shared node/time accounting. One meter may be threaded through several
// searches so that a whole enumeration respects a single budget.
class BudgetMeter {
 public:
  explicit BudgetMeter(const SearchBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {
    budget_.validate();
  }

  // Charges one node. Returns false once the budget is spent.
  bool charge() {
    if (exhausted_) return false;
    if (++nodes_ > budget_.max_nodes) {
      exhausted_ = true;
      return false;
    }
    if ((nodes_ & 0xfffU) == 0 && elapsed() > budget_.time_limit) {
      exhausted_ = true;
      return false;
    }
    return true;
  }

  // Folds in nodes spent by a sub-meter (e.g. a worker shard).
  void add(std::uint64_t nodes) {
    nodes_ += nodes;
    if (nodes_ > budget_.max_nodes) exhausted_ = true;
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }
  const SearchBudget& budget() const { return budget_; }

  std::chrono::milliseconds elapsed() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start_);
  }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace rainbowlab
