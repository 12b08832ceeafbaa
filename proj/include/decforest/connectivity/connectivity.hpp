#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "decforest/core/forest.hpp"

namespace decforest {

struct CutResult {
  /// True if the relabeled (smaller) side is the one containing v.
  bool child_side = true;
  /// Vertices of the relabeled side; valid until the next cut.
  std::span<const Vertex> side;
  /// Root of the component before the cut.
  Vertex old_root = kNoVertex;
};

/// Decremental connectivity on a rooted forest.
///
/// Every component carries a label; `root`, `connected` and `ancestor` are
/// O(1). A cut walks both new components with two interleaved DFS cursors,
/// one vertex per side per step, and relabels whichever side is exhausted
/// first (the side of `v` on a tie). Total relabeling work is O(n log n).
class DecrementalConnectivity {
 public:
  DecrementalConnectivity() = default;
  explicit DecrementalConnectivity(std::shared_ptr<const RootedForest> f);
  explicit DecrementalConnectivity(const RootedForest& f)
      : DecrementalConnectivity(std::make_shared<const RootedForest>(f)) {}

  std::size_t size() const noexcept { return parent_.size(); }
  const RootedForest& forest() const noexcept { return *forest_; }
  const std::shared_ptr<const RootedForest>& forest_ptr() const noexcept { return forest_; }

  /// Removes the edge from v to its live parent. Throws `NoParent` or
  /// `AuxiliaryVertex`.
  CutResult cut(Vertex v);

  Vertex parent(Vertex v) const { return parent_[check(v)]; }
  Vertex root(Vertex v) const;
  bool connected(Vertex u, Vertex v) const;
  /// Ancestor in the live forest; reflexive.
  bool ancestor(Vertex u, Vertex v) const;

  std::uint32_t label(Vertex v) const { return label_[check(v)]; }
  /// Number of vertices visited (or popped) by the cut traversals so far.
  std::uint64_t touches() const noexcept { return touches_; }

 private:
  std::size_t check(Vertex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= parent_.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
    }
    return static_cast<std::size_t>(v);
  }

  struct Cursor {
    std::vector<std::pair<Vertex, Vertex>> stack;  // (vertex, next child to enter)
    std::vector<Vertex> seen;
    void start(Vertex r, const DecrementalConnectivity& dc);
    bool step(const DecrementalConnectivity& dc, std::uint64_t& touches);
  };

  std::shared_ptr<const RootedForest> forest_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> first_child_;
  std::vector<Vertex> next_sib_;
  std::vector<Vertex> prev_sib_;
  std::vector<std::uint32_t> label_;
  std::vector<Vertex> label_root_;
  std::uint64_t touches_ = 0;
  Cursor a_;
  Cursor b_;
};

}  // namespace decforest
