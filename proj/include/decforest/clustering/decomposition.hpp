#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "decforest/connectivity/connectivity.hpp"
#include "decforest/core/forest.hpp"

namespace decforest {

struct Cluster {
  std::uint32_t id = 0;
  Vertex ub = kNoVertex;
  /// kNoVertex when the cluster has no lower boundary vertex.
  Vertex lb = kNoVertex;
  /// Member vertices in DFS pre-order; members.front() == ub.
  std::vector<Vertex> members;

  bool has_lb() const noexcept { return lb != kNoVertex; }
  /// True for singleton clusters created with ub == lb.
  bool is_point() const noexcept { return lb == ub; }
};

/// Partition of a binary tree into clusters of size <= k, built bottom-up
/// with the three-case rule (large children, two lower boundaries, merge).
class ClusterDecomposition {
 public:
  ClusterDecomposition() = default;

  /// Throws `NotBinary` or `NotATree`. k < 1 is treated as 1.
  static ClusterDecomposition decompose(const RootedForest& t, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  const Cluster& cluster(std::uint32_t id) const { return clusters_.at(id); }
  std::uint32_t cluster_of(Vertex v) const { return cluster_of_.at(static_cast<std::size_t>(v)); }

  /// Cluster tree S over the boundary vertices. S-vertex i corresponds to
  /// tree vertex boundary()[i]; ids follow the tree's pre-order.
  const RootedForest& cluster_tree() const noexcept { return cluster_tree_; }
  const std::vector<Vertex>& boundary() const noexcept { return boundary_; }
  /// S-id of a tree vertex, or kNoVertex for non-boundary vertices.
  Vertex s_id(Vertex v) const { return s_id_.at(static_cast<std::size_t>(v)); }
  bool is_boundary(Vertex v) const { return s_id(v) != kNoVertex; }

  /// One line per cluster: `cluster <id> ub=<v> lb=<v|-> members=a,b,...`.
  std::string dump() const;

 private:
  std::size_t k_ = 1;
  std::vector<Cluster> clusters_;
  std::vector<std::uint32_t> cluster_of_;
  std::vector<Vertex> boundary_;
  std::vector<Vertex> s_id_;
  RootedForest cluster_tree_;
};

/// Cluster tree rebuilt directly from the cluster list and the tree, using
/// the two edge rules. Used to cross-check `cluster_tree()`.
RootedForest rebuild_cluster_tree(const RootedForest& t, const ClusterDecomposition& d);

/// Live cluster forest under cuts of the underlying tree.
///
/// Keeps one connectivity structure per cluster on F[C]; since clusters are
/// convex, connectivity inside C equals connectivity in F.
class InducedClusterForest {
 public:
  InducedClusterForest() = default;
  InducedClusterForest(const RootedForest& t, std::shared_ptr<const ClusterDecomposition> d);

  /// An edge of the cluster forest, named by its S-ids (child, parent).
  struct Edge {
    Vertex child = kNoVertex;
    Vertex parent = kNoVertex;
  };

  /// Applies cut(v) of the underlying tree. Returns the cluster-forest edge
  /// that disappeared, if any. Throws `NoParent` if v has no live parent.
  std::optional<Edge> on_cut(Vertex v);

  /// Live connectivity between two vertices of the same cluster.
  bool connected_in_cluster(Vertex a, Vertex b) const;
  /// Live parent of an S-vertex in the cluster forest (kNoVertex if none).
  Vertex live_parent(Vertex s) const { return live_parent_.at(static_cast<std::size_t>(s)); }
  bool has_live_parent(Vertex v) const;

  std::uint64_t touches() const;

 private:
  std::shared_ptr<const ClusterDecomposition> d_;
  std::vector<Vertex> tree_parent_;
  std::vector<Vertex> local_;
  std::vector<DecrementalConnectivity> conn_;
  std::vector<Vertex> live_parent_;
  std::vector<std::uint8_t> cut_;
};

/// Cluster forest induced by the live edges, computed from scratch: for each
/// S-vertex, its parent or kNoVertex. `live_parent_of(v)` gives the current
/// parent of tree vertex v.
std::vector<Vertex> reference_cluster_forest(const RootedForest& t, const ClusterDecomposition& d,
                                             const std::vector<Vertex>& live_parent_of);

/// Partition into parts that each induce a subtree; a part either contains a
/// root of the forest and has fewer than k vertices, or has at least k
/// vertices and splits into pieces below k once its root is removed.
/// Returns part index per vertex and the parts (members in pre-order).
struct AltPartition {
  std::vector<std::uint32_t> part_of;
  std::vector<std::vector<Vertex>> parts;
};
AltPartition alt_partition(const RootedForest& f, std::size_t k);

}  // namespace decforest
