#pragma once

#include <memory>
#include <vector>

#include "decforest/clustering/binarize.hpp"
#include "decforest/tree_size/table.hpp"
#include "decforest/tree_sum/iterated.hpp"

namespace decforest {

/// Tree sizes on one micro tree of at most ell vertices: the whole state is a
/// single forest code and every operation is one table probe.
class MicroTreeSize final : public TreeSumBase<PlainInt> {
 public:
  MicroTreeSize(const RootedForest& f, const std::vector<std::int64_t>& w, std::shared_ptr<const GlobalSizeTable> table);

  std::int64_t tree_sum(Vertex v) override;
  void update_weight(Vertex v, std::int64_t x) override;
  std::pair<std::int64_t, std::int64_t> cut_report(Vertex v) override;

  std::unique_ptr<TreeSumBase<PlainInt>> clone() const override { return std::make_unique<MicroTreeSize>(*this); }
  std::size_t size() const override { return n_; }

  std::uint64_t code() const noexcept { return code_; }

 private:
  unsigned check(Vertex v) const;

  std::shared_ptr<const GlobalSizeTable> table_;
  std::uint64_t code_ = 0;
  std::size_t n_ = 0;
  std::vector<bool> aux_;
};

LeafFactory<PlainInt> micro_leaf_factory(std::shared_ptr<const GlobalSizeTable> table);

/// 0-1 weighted tree sums in O(n + m) total: binarize, then two rounds of the
/// cluster reduction with micro trees of size ell at the bottom.
class Linear01TreeSize {
 public:
  /// Throws `NonBinaryWeight` unless every weight is 0 or 1. `ell` defaults
  /// to floor(log2 log2 n) clamped to [1, kMaxEll].
  Linear01TreeSize(const RootedForest& f, const std::vector<std::int64_t>& weights, unsigned ell = 0);

  static constexpr unsigned kMaxEll = 4;
  static unsigned default_ell(std::size_t n);

  std::int64_t tree_sum(Vertex v);
  void update_weight(Vertex v, std::int64_t x);
  std::pair<std::int64_t, std::int64_t> cut_report(Vertex v);
  void cut(Vertex v) { (void)cut_report(v); }

  unsigned ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return n_; }
  const ComponentTreeSum<PlainInt>& components() const noexcept { return *impl_; }

 private:
  void check(Vertex v) const;

  std::size_t n_ = 0;
  unsigned ell_ = 1;
  std::unique_ptr<ComponentTreeSum<PlainInt>> impl_;
};

}  // namespace decforest
