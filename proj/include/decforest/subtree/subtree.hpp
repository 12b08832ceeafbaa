#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "decforest/clustering/decomposition.hpp"
#include "decforest/connectivity/connectivity.hpp"

namespace decforest {

/// Q[B, U] = sum of B[i] over i in U, for every vector B of k counters in
/// [0, k] and every subset U of [k]. Index = code(B) * 2^k + mask(U) where
/// code(B) reads B as base-(k+1) digits, B[0] least significant.
class QTable {
 public:
  static constexpr std::uint64_t kMaxEntries = std::uint64_t{1} << 24;

  /// k must be a power of two; throws `CapExceeded` above the entry cap.
  static QTable build(unsigned k);

  unsigned k() const noexcept { return k_; }
  std::size_t size() const noexcept { return q_.size(); }
  std::uint32_t radix() const noexcept { return k_ + 1; }

  std::uint8_t at(std::size_t code, std::uint32_t mask) const {
    return q_[(code << k_) | mask];
  }
  std::uint8_t operator()(std::span<const std::uint8_t> counters, std::uint32_t mask) const;
  std::size_t code_of(std::span<const std::uint8_t> counters) const;

  const std::vector<std::uint8_t>& raw() const noexcept { return q_; }

  /// Binary format: magic "DFQTBL01", u32 k, then the entries as bytes.
  void save(std::ostream& out) const;
  static QTable load(std::istream& in);

  bool operator==(const QTable&) const = default;

 private:
  unsigned k_ = 1;
  std::vector<std::uint8_t> q_;
};

std::shared_ptr<const QTable> shared_q_table(unsigned k);

/// Decrement counters since the last flush, packed as base-(q+1) digits in
/// groups of q so that each group code indexes a Q table directly.
class PackedCounters {
 public:
  PackedCounters() = default;
  PackedCounters(std::size_t n, unsigned q);

  std::size_t size() const noexcept { return n_; }
  unsigned group() const noexcept { return q_; }
  std::size_t chunks() const noexcept { return code_.size(); }
  std::uint16_t chunk_code(std::size_t c) const { return code_[c]; }

  unsigned get(std::size_t i) const;
  /// Caller guarantees the counter stays <= q.
  void increment(std::size_t i) { code_[i / q_] = static_cast<std::uint16_t>(code_[i / q_] + pow_[i % q_]); }
  void clear();

  static PackedCounters pack(std::span<const std::uint8_t> values, unsigned q);
  std::vector<std::uint8_t> unpack() const;

 private:
  std::size_t n_ = 0;
  unsigned q_ = 4;
  std::vector<std::uint16_t> pow_;
  std::vector<std::uint16_t> code_;
};

/// Subtree sums with delayed decrements on at most 64 vertices.
///
/// A holds subtree sums as of the last flush, B the decrements since, and
/// C[v] the live descendant set of v as a bitmask, so that
/// subtree_sum(v) = A[v] - Q[B, C[v]], evaluated chunk by chunk. After q
/// decrements B is folded into A. A cut flushes, recovers the vertex weights
/// from A and rebuilds A and C.
class SmallSubtreeSum {
 public:
  static constexpr std::size_t kMaxVertices = 64;
  static constexpr unsigned kChunk = 4;

  /// Weights must be non-negative. Throws `TooLarge` above 64 vertices.
  SmallSubtreeSum(const RootedForest& f, const std::vector<std::int64_t>& w,
                  std::shared_ptr<const QTable> q = nullptr);

  std::size_t size() const noexcept { return n_; }
  std::int64_t subtree_sum(Vertex v) const;
  /// Throws `NegativeWeight` if the weight of v is already 0.
  void decrement_weight(Vertex v);
  /// Throws `NoParent`.
  void cut(Vertex v);
  /// Subtree sum at the initial root (the first root of the forest).
  std::int64_t root_sum() const { return subtree_sum(root0_); }

  Vertex parent(Vertex v) const { return parent_.at(static_cast<std::size_t>(v)); }
  std::int64_t weight(Vertex v) const { return w_.at(static_cast<std::size_t>(v)); }
  std::uint64_t descendants(Vertex v) const { return C_.at(static_cast<std::size_t>(v)); }
  std::uint64_t flush_count() const noexcept { return flushes_; }
  unsigned pending() const noexcept { return pending_; }
  const PackedCounters& counters() const noexcept { return B_; }

  /// Recomputes every answer from scratch and compares; throws
  /// `InvariantBroken` on disagreement.
  void check_invariants() const;

 private:
  Vertex check(Vertex v) const;
  void flush();
  void rebuild();

  std::size_t n_ = 0;
  std::shared_ptr<const QTable> q_;
  std::vector<Vertex> order_;  // static pre-order
  std::vector<Vertex> parent_;
  std::vector<std::int64_t> A_;
  std::vector<std::int64_t> w_;
  std::vector<std::uint64_t> C_;
  PackedCounters B_;
  unsigned pending_ = 0;
  std::uint64_t flushes_ = 0;
  Vertex root0_ = 0;
};

/// Shared state of one recursive stack: live connectivity on the whole
/// (binarized) forest, cut before any level sees the operation.
struct SubtreeContext {
  std::shared_ptr<DecrementalConnectivity> conn;
  std::shared_ptr<const QTable> q;
  unsigned ell = 2;
};

/// The recursive structure on one binary tree with at most ell^t vertices.
///
/// The tree is split into O(ell) clusters of size at most ceil(n / ell). D is
/// a `SmallSubtreeSum` on the cluster tree with w'(ub) = weight of C \ lb
/// still connected to ub and w'(lb) = w(lb); X_C recurses on C \ lb.
class RecursiveSubtreeSum {
 public:
  /// `global` maps local ids to ids in the context's connectivity.
  RecursiveSubtreeSum(const RootedForest& tree, const std::vector<std::int64_t>& w, std::size_t t,
                      std::shared_ptr<SubtreeContext> ctx, std::vector<Vertex> global);

  /// Levels needed for n vertices: max(1, ceil(log_ell n)).
  static std::size_t levels_for(std::size_t n, unsigned ell);

  std::int64_t subtree_sum(Vertex v) const;
  /// The context's connectivity must already reflect the cut.
  void cut(Vertex v);
  std::int64_t root_sum() const;

  std::size_t levels() const noexcept { return t_; }
  std::size_t size() const noexcept { return global_.size(); }
  const ClusterDecomposition* decomposition() const noexcept { return dec_.get(); }
  const SmallSubtreeSum& cluster_structure() const { return *D_; }
  std::int64_t boundary_weight(Vertex v) const { return D_->weight(dec_->s_id(v)); }

 private:
  bool is_boundary_of(Vertex v, const Cluster& c) const { return v == c.ub || v == c.lb; }
  Vertex g(Vertex v) const { return global_[static_cast<std::size_t>(v)]; }

  std::size_t t_ = 1;
  std::shared_ptr<SubtreeContext> ctx_;
  std::vector<Vertex> global_;
  std::vector<Vertex> parent_;  // static
  std::unique_ptr<SmallSubtreeSum> D_;
  std::shared_ptr<const ClusterDecomposition> dec_;
  std::vector<std::unique_ptr<RecursiveSubtreeSum>> X_;
  std::vector<Vertex> xlocal_;
  std::vector<std::uint8_t> linked_;
  std::vector<std::int64_t> ub_weight_;
};

/// Subtree sums under cuts for 0-1 weighted forests: binarize, then one
/// recursive stack per tree with t = ceil(log_ell(2n)).
class SubtreeSum01 {
 public:
  /// Throws `NonBinaryWeight`. ell must be 2 or 4.
  SubtreeSum01(const RootedForest& f, const std::vector<std::int64_t>& weights, unsigned ell = 2);

  std::int64_t subtree_sum(Vertex v) const;
  void cut(Vertex v);

  std::size_t size() const noexcept { return n_; }
  unsigned ell() const noexcept { return ctx_->ell; }
  std::size_t levels() const noexcept { return t_; }

 private:
  void check(Vertex v) const;

  std::size_t n_ = 0;
  std::size_t t_ = 1;
  std::vector<bool> aux_;
  std::shared_ptr<SubtreeContext> ctx_;
  std::vector<std::uint32_t> comp_;
  std::vector<Vertex> local_;
  std::vector<std::unique_ptr<RecursiveSubtreeSum>> parts_;
};

}  // namespace decforest
