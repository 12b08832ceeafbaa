#pragma once

#include <cstdint>
#include <vector>

#include "decforest/core/trace.hpp"
#include "decforest/oracle/generators.hpp"

namespace decforest {

struct SpineUpdate {
  std::size_t j1 = 0;
  std::size_t j2 = 0;
  std::size_t tries = 0;
  /// cut(u_{i,j1}), cut(u_{i,j2}), cut(w_{i,p}).
  std::vector<TraceOp> cuts;
};

/// Partial sums over an array A of length n' (values in [0, n'-1]) encoded
/// as subtree sums in two trees.
///
/// T+ is a path v+_1 .. v+_n' rooted at v+_n' (weight 0); v+_i carries 8n'
/// leaves u_{i,j} of weight j. T- is a path v-_1 .. v-_n' rooted at v-_n'
/// with n' leaves w_{i,p} of weight 1 on each v-_i. Indices are 1-based.
///
/// Vertex ids: v+_i = i-1, then the u leaves, then v-_i, then the w leaves.
/// With `unary`, each u_{i,j} instead has weight 1 and j-1 extra weight-1
/// children appended after T-, so the whole forest is 0-1 weighted.
class SpineInstance {
 public:
  SpineInstance(std::size_t n_prime, std::vector<std::int64_t> A, bool unary = false);

  std::size_t n_prime() const noexcept { return np_; }
  std::size_t size() const noexcept { return parents_.size(); }
  std::size_t plus_size() const noexcept { return np_ * (8 * np_ + 1); }
  std::size_t minus_size() const noexcept { return np_ * (np_ + 1); }
  bool unary() const noexcept { return unary_; }

  Vertex v_plus(std::size_t i) const;
  Vertex v_minus(std::size_t i) const;
  Vertex u(std::size_t i, std::size_t j) const;
  Vertex w(std::size_t i, std::size_t p) const;

  const std::vector<Vertex>& parents() const noexcept { return parents_; }
  const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
  /// B[k-1] for k in [n'].
  const std::vector<std::int64_t>& B() const noexcept { return B_; }
  const std::vector<std::int64_t>& A() const noexcept { return A_; }

  bool u_attached(std::size_t i, std::size_t j) const { return !u_cut_.at(idx_u(i, j)); }
  bool w_attached(std::size_t i, std::size_t p) const { return !w_cut_.at(idx_w(i, p)); }
  std::size_t updates_of(std::size_t i) const { return updates_.at(i - 1); }

  /// Initial forest and weights, no operations.
  OperationTrace prologue() const;

  /// sum_{i<=k} A[i] from the two subtree sums.
  std::int64_t prefix_from(std::size_t k, std::int64_t ssum_plus, std::int64_t ssum_minus) const;

 private:
  friend SpineUpdate translate_update(SpineInstance&, std::size_t, std::size_t, std::int64_t, Rng&);

  std::size_t idx_u(std::size_t i, std::size_t j) const;
  std::size_t idx_w(std::size_t i, std::size_t p) const;

  std::size_t np_ = 0;
  bool unary_ = false;
  std::vector<Vertex> parents_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> A_;
  std::vector<std::int64_t> B_;
  std::vector<std::uint8_t> u_cut_;
  std::vector<std::uint8_t> w_cut_;
  std::vector<std::size_t> updates_;
};

/// Throws `ValueOutOfRange` unless every A[i] is in [0, n'-1].
SpineInstance build_spine(std::size_t n_prime, std::vector<std::int64_t> A, bool unary = false);

/// Sets A[i] = x during epoch p by cutting two u leaves with
/// j1 + j2 = 7n' - delta and the leaf w_{i,p}. j1 is drawn uniformly from
/// [3n'] until both leaves are still attached.
///
/// Throws `ValueOutOfRange` for a bad x, `OutOfOrderUpdate` unless this is
/// update number p of element i, and `InvariantBroken` if no pair is left.
SpineUpdate translate_update(SpineInstance& inst, std::size_t p, std::size_t i, std::int64_t x, Rng& rng);

/// E = n' epochs: in each, every element gets a random new value and every
/// prefix is queried once (two subtree-sums), in random order. Expected
/// answers come from the naive oracle.
OperationTrace spine_trace(std::size_t n_prime, std::uint64_t seed, bool unary = false);

/// Partial-sum parity via subtree sizes: a path v_1 .. v_n' rooted at v_n'
/// with one leaf u_{i,1} on v_i if A[i] = 0, two leaves if A[i] = 1. All
/// weights are 1. Flipping A[i] cuts u_{i,1}.
class ParityInstance {
 public:
  explicit ParityInstance(std::vector<std::uint8_t> A);

  std::size_t n_prime() const noexcept { return A_.size(); }
  std::size_t size() const noexcept { return parents_.size(); }
  Vertex v(std::size_t k) const;
  Vertex u1(std::size_t i) const;

  const std::vector<Vertex>& parents() const noexcept { return parents_; }
  const std::vector<std::uint8_t>& A() const noexcept { return A_; }
  OperationTrace prologue() const;

  /// Throws `DoubleFlip` on a second flip of the same index.
  TraceOp flip(std::size_t i);
  TraceOp query(std::size_t k) const { return TraceOp::subtree_sum(v(k)); }
  /// Direct recount of sum_{j<=k} A[j] mod 2.
  int parity(std::size_t k) const;

 private:
  std::vector<std::uint8_t> A_;
  std::vector<Vertex> parents_;
  std::vector<Vertex> u1_;
  std::vector<std::uint8_t> flipped_;
};

/// Throws `ValueOutOfRange` for entries other than 0 and 1.
ParityInstance build_parity(std::vector<std::uint8_t> A);

/// Random bits, every index flipped at most once, queries interleaved.
OperationTrace parity_trace(std::size_t n_prime, std::size_t flips, std::uint64_t seed);

/// Partial sums over a static array B0 where the p-th update replaces
/// B[p]. Keeps prefix sums of B0 and of the updated prefix; O(s) init,
/// O(1) update and query. Positions are 1-based.
class BlockPartialSum {
 public:
  explicit BlockPartialSum(const std::vector<std::int64_t>& B0);

  /// Throws `OutOfOrderUpdate` unless p is the next position.
  void update(std::size_t p, std::int64_t x);
  /// sum_{j<=i} B[j]; i = 0 is the empty sum.
  std::int64_t query(std::size_t i) const;

  std::size_t size() const noexcept { return P0_.size() - 1; }
  std::size_t updated() const noexcept { return P1_.size() - 1; }

 private:
  std::vector<std::int64_t> P0_;
  std::vector<std::int64_t> P1_;
};

}  // namespace decforest
