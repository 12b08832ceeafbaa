#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "decforest/clustering/decomposition.hpp"
#include "decforest/core/probe.hpp"
#include "decforest/tree_sum/simple.hpp"

namespace decforest {

inline std::size_t ceil_log2(std::size_t n) {
  return n <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(n - 1));
}

/// Stack shape for `make_tree_sum_level`.
template <CommutativeGroup G>
struct LevelSpec {
  /// 1 means "just the leaf structure".
  std::size_t levels = 1;
  LeafFactory<G> leaf;
  /// Largest tree the leaf accepts; caps k at the lowest reduction.
  std::size_t leaf_capacity = std::numeric_limits<std::size_t>::max();
  /// Test hook: cluster size for the outermost reduction only.
  std::optional<std::size_t> forced_k;
};

template <CommutativeGroup G>
std::unique_ptr<TreeSumBase<G>> make_tree_sum_level(const RootedForest& tree, std::vector<typename G::value_type> w,
                                                    const G& g, const LevelSpec<G>& spec);

/// One application of the cluster reduction on a binary tree.
///
/// The tree is cut into clusters of size at most k (default ceil(log2 n)).
/// D is a `SimpleTreeSum` on the induced cluster forest with weights w':
/// w'(ub) is the weight of the cluster part connected to ub, and w'(lb) the
/// part connected to lb but not to ub. Each cluster gets its own child
/// structure X_C one level down. Every operation issues at most one call to
/// some X_C.
template <CommutativeGroup G>
class ClusterReduction final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  ClusterReduction(const RootedForest& tree, std::vector<value_type> w, G g, const LevelSpec<G>& spec)
      : g_(std::move(g)), w_(std::move(w)) {
    const std::size_t n = tree.size();
    if (spec.levels < 2) throw Error(ErrorKind::InvariantBroken, "reduction needs at least two levels");
    std::size_t k = spec.forced_k ? *spec.forced_k : std::max<std::size_t>(1, ceil_log2(n));
    if (spec.levels == 2) k = std::min(k, spec.leaf_capacity);
    k = std::max<std::size_t>(k, 1);

    tree_ = std::make_shared<const RootedForest>(tree);
    auto dec = std::make_shared<ClusterDecomposition>(ClusterDecomposition::decompose(tree, k));
    dec_ = dec;
    icf_ = InducedClusterForest(tree, dec_);

    local_.assign(n, kNoVertex);
    LevelSpec<G> child = spec;
    child.levels = spec.levels - 1;
    child.forced_k.reset();
    const auto& clusters = dec_->clusters();
    X_.reserve(clusters.size());
    std::vector<value_type> wprime(dec_->boundary().size(), g_.zero());
    for (const Cluster& c : clusters) {
      std::vector<value_type> cw;
      cw.reserve(c.members.size());
      for (std::size_t i = 0; i < c.members.size(); ++i) {
        local_[static_cast<std::size_t>(c.members[i])] = static_cast<Vertex>(i);
        cw.push_back(w_[static_cast<std::size_t>(c.members[i])]);
      }
      value_type sum = cw[0];
      for (std::size_t i = 1; i < cw.size(); ++i) sum = g_.add(sum, cw[i]);
      wprime[static_cast<std::size_t>(dec_->s_id(c.ub))] = sum;
      RootedForest sub = induced_subforest(tree, c.members);
      X_.push_back(make_tree_sum_level<G>(sub, std::move(cw), g_, child));
    }
    D_ = std::make_unique<SimpleTreeSum<G>>(dec_->cluster_tree(), std::move(wprime), g_);
  }

  ClusterReduction(const ClusterReduction& o)
      : g_(o.g_), tree_(o.tree_), dec_(o.dec_), icf_(o.icf_), D_(std::make_unique<SimpleTreeSum<G>>(*o.D_)),
        local_(o.local_), w_(o.w_), x_calls_(o.x_calls_), d_cuts_(o.d_cuts_) {
    X_.reserve(o.X_.size());
    for (const auto& x : o.X_) X_.push_back(x->clone());
  }

  value_type tree_sum(Vertex v) override {
    check_regular(v);
    probe::tick();
    const Cluster& c = cluster_of(v);
    if (icf_.connected_in_cluster(v, c.ub)) return D_->tree_sum(sid(c.ub));
    if (c.has_lb() && icf_.connected_in_cluster(v, c.lb)) return D_->tree_sum(sid(c.lb));
    ++x_calls_;
    return X_[c.id]->tree_sum(local(v));
  }

  void update_weight(Vertex v, value_type x) override {
    check_regular(v);
    probe::tick();
    const Cluster& c = cluster_of(v);
    ++x_calls_;
    X_[c.id]->update_weight(local(v), x);
    value_type y = std::move(w_[static_cast<std::size_t>(v)]);
    w_[static_cast<std::size_t>(v)] = x;
    Vertex target = kNoVertex;
    if (icf_.connected_in_cluster(v, c.ub)) target = c.ub;
    else if (c.has_lb() && icf_.connected_in_cluster(v, c.lb)) target = c.lb;
    if (target != kNoVertex) {
      Vertex s = sid(target);
      D_->update_weight(s, g_.add(g_.sub(D_->weight(s), y), x));
    }
  }

  std::pair<value_type, value_type> cut_report(Vertex v) override {
    check_regular(v);
    probe::tick();
    const Vertex u = tree_->parent(v);
    if (u == kNoVertex || !icf_.has_live_parent(v)) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
    const Cluster& c = cluster_of(v);
    if (dec_->cluster_of(u) != c.id) {
      icf_.on_cut(v);
      ++d_cuts_;
      return D_->cut_report(sid(v));
    }
    if (auto removed = icf_.on_cut(v)) {
      ++d_cuts_;
      D_->cut(removed->child);
    }
    ++x_calls_;
    auto [xv, xu] = X_[c.id]->cut_report(local(v));
    const bool u_ub = icf_.connected_in_cluster(u, c.ub);
    const bool v_ub = icf_.connected_in_cluster(v, c.ub);
    if (u_ub) D_->update_weight(sid(c.ub), xu);
    bool v_lb = false;
    bool u_lb = false;
    if (c.has_lb()) {
      v_lb = icf_.connected_in_cluster(v, c.lb);
      u_lb = icf_.connected_in_cluster(u, c.lb);
      if (v_lb) D_->update_weight(sid(c.lb), xv);
      else if (u_lb && !u_ub) D_->update_weight(sid(c.lb), xu);
    }
    value_type rv = v_ub ? D_->tree_sum(sid(c.ub)) : v_lb ? D_->tree_sum(sid(c.lb)) : std::move(xv);
    value_type ru = u_ub ? D_->tree_sum(sid(c.ub)) : u_lb ? D_->tree_sum(sid(c.lb)) : std::move(xu);
    return {std::move(rv), std::move(ru)};
  }

  std::unique_ptr<TreeSumBase<G>> clone() const override { return std::make_unique<ClusterReduction>(*this); }
  std::size_t size() const override { return w_.size(); }

  const ClusterDecomposition& decomposition() const noexcept { return *dec_; }
  const SimpleTreeSum<G>& cluster_structure() const noexcept { return *D_; }
  /// w' of a boundary vertex, as stored in D.
  const value_type& boundary_weight(Vertex v) const { return D_->weight(sid(v)); }
  const TreeSumBase<G>& child(std::uint32_t cluster) const { return *X_.at(cluster); }
  /// Calls delegated to any X_C so far.
  std::uint64_t child_calls() const noexcept { return x_calls_; }
  /// Cuts issued on D so far.
  std::uint64_t cluster_cuts() const noexcept { return d_cuts_; }

 private:
  void check_regular(Vertex v) const {
    if (tree_->is_aux(v)) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
  }
  const Cluster& cluster_of(Vertex v) const { return dec_->cluster(dec_->cluster_of(v)); }
  Vertex sid(Vertex v) const { return dec_->s_id(v); }
  Vertex local(Vertex v) const { return local_[static_cast<std::size_t>(v)]; }

  G g_;
  std::shared_ptr<const RootedForest> tree_;
  std::shared_ptr<const ClusterDecomposition> dec_;
  InducedClusterForest icf_;
  std::unique_ptr<SimpleTreeSum<G>> D_;
  std::vector<std::unique_ptr<TreeSumBase<G>>> X_;
  std::vector<Vertex> local_;
  std::vector<value_type> w_;
  std::uint64_t x_calls_ = 0;
  std::uint64_t d_cuts_ = 0;
};

template <CommutativeGroup G>
std::unique_ptr<TreeSumBase<G>> make_tree_sum_level(const RootedForest& tree, std::vector<typename G::value_type> w,
                                                    const G& g, const LevelSpec<G>& spec) {
  if (spec.levels <= 1) {
    if (tree.size() > spec.leaf_capacity) throw Error(ErrorKind::TooLarge, "tree exceeds leaf capacity");
    return spec.leaf(tree, std::move(w), g);
  }
  return std::make_unique<ClusterReduction<G>>(tree, std::move(w), g, spec);
}

}  // namespace decforest
