#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decforest/optimal/computation_tree.hpp"

namespace decforest {

/// Limits for `search_optimal`; exceeding any of them throws `CapExceeded`.
struct SearchCaps {
  std::size_t max_n = 3;
  std::size_t max_m = 2;
  std::size_t max_d = 4;
};

struct OptResult {
  std::string fingerprint;
  std::size_t m = 0;
  std::size_t mid = 0;
  std::shared_ptr<const ComputationTree> witness;
};

/// Canonical key of a forest: vertex count, parent sequence and aux flags,
/// e.g. "2:-1,0:00".
std::string forest_fingerprint(const RootedForest& f);

/// A correct computation tree of height m with minimum maximum instruction
/// depth, provided that minimum is at most d; nullopt otherwise.
///
/// The search runs over semantic states: registers hold vectors of Z^(n'+m)
/// (see `check_correct`), a node's instruction list is summarized by the set
/// of new vectors it creates, and (node, register set, budget) triples are
/// memoized. Budgets are tried in increasing order.
std::optional<OptResult> search_optimal(const RootedForest& f, std::size_t m, std::size_t d,
                                        const SearchCaps& caps = {});

/// Optimal witnesses for one forest, for m = 1 .. max_m().
class OptTable {
 public:
  OptTable() = default;
  explicit OptTable(std::string fingerprint) : fingerprint_(std::move(fingerprint)) {}

  /// Searches m = 1 .. m_cap, stopping at the first m with no witness within
  /// caps.max_d.
  static OptTable compute(const RootedForest& f, std::size_t m_cap, const SearchCaps& caps = {});

  const std::string& fingerprint() const noexcept { return fingerprint_; }
  std::size_t max_m() const noexcept { return rows_.size(); }
  const OptResult& at(std::size_t m) const { return rows_.at(m - 1); }
  void push(OptResult r);

  /// Text format: per row a line `opt <fingerprint> <m> <mid>` followed by
  /// the witness tree.
  void write(std::ostream& out) const;
  static OptTable read(std::istream& in);

 private:
  std::string fingerprint_;
  std::vector<OptResult> rows_;
};

/// Process-wide cache keyed by fingerprint and m_cap.
std::shared_ptr<const OptTable> shared_opt_table(const RootedForest& f, std::size_t m_cap, const SearchCaps& caps = {});

}  // namespace decforest
