#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "decforest/core/forest.hpp"
#include "decforest/core/group.hpp"

namespace decforest {

/// Interface shared by every tree-sum structure so that the cluster
/// reduction can stack them. Vertex ids are local to the structure.
template <CommutativeGroup G>
class TreeSumBase {
 public:
  using value_type = typename G::value_type;

  virtual ~TreeSumBase() = default;

  virtual value_type tree_sum(Vertex v) = 0;
  virtual void update_weight(Vertex v, value_type x) = 0;
  /// Cuts v from its parent u and returns (tree_sum(v), tree_sum(u)).
  virtual std::pair<value_type, value_type> cut_report(Vertex v) = 0;
  virtual void cut(Vertex v) { (void)cut_report(v); }

  virtual std::unique_ptr<TreeSumBase> clone() const = 0;
  virtual std::size_t size() const = 0;
};

/// Builds a structure for one small tree (local ids, aux flags kept).
template <CommutativeGroup G>
using LeafFactory = std::function<std::unique_ptr<TreeSumBase<G>>(
    const RootedForest&, std::vector<typename G::value_type>, const G&)>;

}  // namespace decforest
