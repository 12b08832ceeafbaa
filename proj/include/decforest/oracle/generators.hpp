#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "decforest/core/trace.hpp"

namespace decforest {

/// Seeded generator with a fixed algorithm: std::mt19937_64 plus
/// Lemire-style bounded sampling, so streams are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

enum class Shape { UniformAttachment, Path, Star, Caterpillar, Balanced };

std::string_view shape_name(Shape s) noexcept;
std::optional<Shape> parse_shape(std::string_view s) noexcept;

/// Parent array of a random tree. Uniform attachment relabels ids with a
/// random permutation; the other shapes are rooted at 0. Balanced is the
/// heap layout (height floor(log2 n)).
std::vector<Vertex> gen_random_parents(std::size_t n, std::uint64_t seed, Shape shape);
RootedForest gen_random_tree(std::size_t n, std::uint64_t seed, Shape shape);

/// Random forest: a random tree with a fraction of its edges removed.
std::vector<Vertex> gen_random_forest_parents(std::size_t n, std::uint64_t seed, Shape shape, double cut_fraction);

struct OpMix {
  double cut = 1.0;
  double update = 1.0;
  double tree_sum = 1.0;
  double subtree_sum = 0.0;

  static OpMix tree_sums() { return {1.0, 1.0, 2.0, 0.0}; }
  static OpMix subtree_sums() { return {1.0, 0.0, 0.0, 2.0}; }
  static OpMix cuts_only() { return {1.0, 0.0, 0.0, 0.0}; }
};

struct ValueRange {
  std::int64_t lo = -1000;
  std::int64_t hi = 1000;
  /// Draw all weights and update values from {0, 1}.
  bool binary = false;
};

std::vector<std::int64_t> gen_weights(std::size_t n, std::uint64_t seed, const ValueRange& range,
                                      const std::vector<bool>& aux = {});

/// A legal trace of up to m operations on (parents, aux, weights); expected
/// answers come from the naive oracle. If no legal operation of the mix is
/// left, the trace is truncated and `exhausted` is set.
OperationTrace gen_random_trace(std::vector<Vertex> parents, std::vector<bool> aux, std::vector<std::int64_t> weights,
                                std::size_t m, const OpMix& mix, std::uint64_t seed, const ValueRange& range = {});

/// Tree, weights and trace from one seed.
OperationTrace gen_random_instance(std::size_t n, std::size_t m, Shape shape, const OpMix& mix, std::uint64_t seed,
                                   const ValueRange& range = {});

/// Trace that deletes every edge of the forest in random order, then (if
/// `queries`) asks one tree-sum or subtree-sum per vertex.
OperationTrace gen_teardown(std::vector<Vertex> parents, std::vector<std::int64_t> weights, std::uint64_t seed,
                            bool subtree_queries, bool with_expected = true);

}  // namespace decforest
