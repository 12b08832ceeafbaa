#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "decforest/core/error.hpp"

namespace decforest {

using Vertex = std::int32_t;
inline constexpr Vertex kNoVertex = -1;

/// Immutable rooted forest over dense vertex ids 0..n-1.
///
/// Children are kept in input (ascending id) order, which fixes the DFS used
/// for the pre/post numbering: `u` is an ancestor of `v` iff
/// `pre(u) <= pre(v) && post(u) >= post(v)`. The relation is reflexive.
class RootedForest {
 public:
  RootedForest() = default;

  /// Builds a forest from a parent array (`kNoVertex` marks roots).
  /// Throws `CycleDetected` or `IndexOutOfRange`.
  static RootedForest build(std::span<const Vertex> parents, const std::vector<bool>& aux = {});

  std::size_t size() const noexcept { return parent_.size(); }

  Vertex parent(Vertex v) const { return parent_[check(v)]; }
  bool is_root(Vertex v) const { return parent(v) == kNoVertex; }
  bool is_aux(Vertex v) const { return aux_[check(v)] != 0; }

  std::span<const Vertex> children(Vertex v) const {
    auto i = static_cast<std::size_t>(check(v));
    return {child_list_.data() + child_begin_[i], child_begin_[i + 1] - child_begin_[i]};
  }
  std::size_t child_count(Vertex v) const { return children(v).size(); }

  std::uint32_t pre(Vertex v) const { return pre_[check(v)]; }
  std::uint32_t post(Vertex v) const { return post_[check(v)]; }

  /// Ancestor test in this (static) forest; reflexive.
  bool is_ancestor(Vertex u, Vertex v) const {
    return pre(u) <= pre(v) && post(u) >= post(v);
  }

  std::span<const Vertex> roots() const noexcept { return roots_; }
  /// All vertices in DFS pre-order (trees in root-id order).
  std::span<const Vertex> preorder() const noexcept { return preorder_; }
  std::span<const Vertex> parents() const noexcept { return parent_; }
  std::vector<bool> aux_flags() const;

  bool is_binary() const noexcept;
  bool is_tree() const noexcept { return roots_.size() == 1; }
  std::size_t depth(Vertex v) const;
  std::size_t height() const;

  Vertex check(Vertex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= parent_.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
    }
    return v;
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint8_t> aux_;
  std::vector<std::size_t> child_begin_;
  std::vector<Vertex> child_list_;
  std::vector<std::uint32_t> pre_;
  std::vector<std::uint32_t> post_;
  std::vector<Vertex> roots_;
  std::vector<Vertex> preorder_;
};

inline RootedForest build_forest(std::span<const Vertex> parents, const std::vector<bool>& aux = {}) {
  return RootedForest::build(parents, aux);
}

/// Static ancestor query, reflexive.
inline bool is_ancestor_static(const RootedForest& f, Vertex u, Vertex v) {
  return f.is_ancestor(u, v);
}

/// Subforest induced by `vertices` (which must be closed under the relevant
/// parent links to stay meaningful). Returns the forest over local ids
/// 0..|vertices|-1 in the given order.
RootedForest induced_subforest(const RootedForest& f, std::span<const Vertex> vertices);

/// Splits a forest into its trees. `component[v]` is the tree index of v and
/// `local[v]` the id of v inside `trees[component[v]]`; each tree keeps the
/// vertices in pre-order.
struct ComponentSplit {
  std::vector<RootedForest> trees;
  std::vector<std::vector<Vertex>> members;
  std::vector<std::uint32_t> component;
  std::vector<Vertex> local;
};
ComponentSplit split_components(const RootedForest& f);

}  // namespace decforest
