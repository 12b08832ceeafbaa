#include <algorithm>
#include <sstream>

#include "decforest/clustering/binarize.hpp"
#include "decforest/clustering/decomposition.hpp"
#include "decforest/core/probe.hpp"

namespace decforest {

std::pair<std::vector<Vertex>, std::vector<bool>> binarize_shape(const RootedForest& f) {
  const std::size_t n = f.size();
  std::vector<Vertex> parents(f.parents().begin(), f.parents().end());
  std::vector<bool> aux = f.aux_flags();
  for (std::size_t v = 0; v < n; ++v) {
    auto ch = f.children(static_cast<Vertex>(v));
    if (ch.size() < 3) continue;
    Vertex holder = static_cast<Vertex>(v);
    for (std::size_t i = 1; i < ch.size(); ++i) {
      auto a = static_cast<Vertex>(parents.size());
      parents.push_back(holder);
      aux.push_back(true);
      parents[static_cast<std::size_t>(ch[i])] = a;
      holder = a;
    }
  }
  return {std::move(parents), std::move(aux)};
}

ClusterDecomposition ClusterDecomposition::decompose(const RootedForest& t, std::size_t k) {
  if (!t.is_tree()) throw Error(ErrorKind::NotATree, "decompose expects a single tree");
  if (!t.is_binary()) throw Error(ErrorKind::NotBinary, "decompose expects a binary tree");
  if (k < 1) k = 1;
  const std::size_t n = t.size();

  ClusterDecomposition d;
  d.k_ = k;
  // Open cluster returned by construct(v): its size and lower boundary.
  std::vector<std::size_t> open_size(n, 0);
  std::vector<Vertex> open_lb(n, kNoVertex);
  // is_top[v]: v is the upper boundary of a finished cluster.
  std::vector<std::uint8_t> is_top(n, 0);
  std::vector<Vertex> top_lb(n, kNoVertex);

  auto finish = [&](Vertex c) {
    auto ci = static_cast<std::size_t>(c);
    is_top[ci] = 1;
    top_lb[ci] = open_lb[ci];
  };

  auto order = t.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    const auto vi = static_cast<std::size_t>(v);
    auto ch = t.children(v);
    std::size_t total = 0;
    std::size_t with_lb = 0;
    for (Vertex c : ch) {
      total += open_size[static_cast<std::size_t>(c)];
      if (open_lb[static_cast<std::size_t>(c)] != kNoVertex) ++with_lb;
    }
    if (total >= k || (ch.size() == 2 && with_lb == 2)) {
      for (Vertex c : ch) finish(c);
      open_size[vi] = 1;
      open_lb[vi] = v;
    } else {
      open_size[vi] = 1 + total;
      open_lb[vi] = kNoVertex;
      for (Vertex c : ch) {
        if (open_lb[static_cast<std::size_t>(c)] != kNoVertex) open_lb[vi] = open_lb[static_cast<std::size_t>(c)];
      }
    }
  }
  finish(t.roots()[0]);

  d.cluster_of_.assign(n, 0);
  d.s_id_.assign(n, kNoVertex);
  for (Vertex v : order) {
    const auto vi = static_cast<std::size_t>(v);
    if (is_top[vi]) {
      Cluster c;
      c.id = static_cast<std::uint32_t>(d.clusters_.size());
      c.ub = v;
      c.lb = top_lb[vi];
      d.cluster_of_[vi] = c.id;
      d.clusters_.push_back(std::move(c));
    } else {
      d.cluster_of_[vi] = d.cluster_of_[static_cast<std::size_t>(t.parent(v))];
    }
    d.clusters_[d.cluster_of_[vi]].members.push_back(v);
  }

  // Boundary vertices in pre-order, then S parents by the two edge rules.
  std::vector<Vertex> s_parent;
  for (Vertex v : order) {
    const Cluster& c = d.clusters_[d.cluster_of_[static_cast<std::size_t>(v)]];
    if (v != c.ub && v != c.lb) continue;
    d.s_id_[static_cast<std::size_t>(v)] = static_cast<Vertex>(d.boundary_.size());
    d.boundary_.push_back(v);
    Vertex p = kNoVertex;
    if (v == c.ub) {
      Vertex tp = t.parent(v);
      if (tp != kNoVertex) p = d.s_id_[static_cast<std::size_t>(tp)];
    } else {
      p = d.s_id_[static_cast<std::size_t>(c.ub)];
    }
    s_parent.push_back(p);
  }
  d.cluster_tree_ = RootedForest::build(s_parent);
  probe::tick(n);
  return d;
}

std::string ClusterDecomposition::dump() const {
  std::ostringstream out;
  for (const Cluster& c : clusters_) {
    out << "cluster " << c.id << " ub=" << c.ub << " lb=";
    if (c.has_lb()) out << c.lb;
    else out << '-';
    out << " members=";
    for (std::size_t i = 0; i < c.members.size(); ++i) out << (i ? "," : "") << c.members[i];
    out << '\n';
  }
  return out.str();
}

RootedForest rebuild_cluster_tree(const RootedForest& t, const ClusterDecomposition& d) {
  const auto& b = d.boundary();
  std::vector<Vertex> parents(b.size(), kNoVertex);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vertex v = b[i];
    const Cluster& c = d.cluster(d.cluster_of(v));
    if (v == c.lb && c.lb != c.ub) {
      parents[i] = d.s_id(c.ub);
    } else if (Vertex p = t.parent(v); p != kNoVertex) {
      const Cluster& pc = d.cluster(d.cluster_of(p));
      if (pc.lb != p) throw Error(ErrorKind::InvariantBroken, "cluster parent is not a lower boundary");
      parents[i] = d.s_id(p);
    }
  }
  return RootedForest::build(parents);
}

InducedClusterForest::InducedClusterForest(const RootedForest& t, std::shared_ptr<const ClusterDecomposition> d)
    : d_(std::move(d)) {
  const std::size_t n = t.size();
  tree_parent_.assign(t.parents().begin(), t.parents().end());
  local_.assign(n, kNoVertex);
  cut_.assign(n, 0);
  conn_.reserve(d_->clusters().size());
  for (const Cluster& c : d_->clusters()) {
    std::vector<Vertex> parents(c.members.size(), kNoVertex);
    for (std::size_t i = 0; i < c.members.size(); ++i) local_[static_cast<std::size_t>(c.members[i])] = static_cast<Vertex>(i);
    for (std::size_t i = 1; i < c.members.size(); ++i) {
      parents[i] = local_[static_cast<std::size_t>(tree_parent_[static_cast<std::size_t>(c.members[i])])];
    }
    conn_.emplace_back(RootedForest::build(parents));
  }
  auto sp = d_->cluster_tree().parents();
  live_parent_.assign(sp.begin(), sp.end());
}

bool InducedClusterForest::has_live_parent(Vertex v) const {
  auto vi = static_cast<std::size_t>(v);
  return tree_parent_.at(vi) != kNoVertex && !cut_[vi];
}

std::optional<InducedClusterForest::Edge> InducedClusterForest::on_cut(Vertex v) {
  if (!has_live_parent(v)) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
  const auto vi = static_cast<std::size_t>(v);
  const Vertex u = tree_parent_[vi];
  cut_[vi] = 1;
  const std::uint32_t cv = d_->cluster_of(v);
  probe::tick();
  if (cv != d_->cluster_of(u)) {
    Vertex s = d_->s_id(v);
    live_parent_[static_cast<std::size_t>(s)] = kNoVertex;
    return Edge{s, d_->s_id(u)};
  }
  conn_[cv].cut(local_[vi]);
  const Cluster& c = d_->cluster(cv);
  if (c.has_lb() && c.lb != c.ub) {
    Vertex s = d_->s_id(c.lb);
    if (live_parent_[static_cast<std::size_t>(s)] != kNoVertex &&
        !conn_[cv].connected(local_[static_cast<std::size_t>(c.ub)], local_[static_cast<std::size_t>(c.lb)])) {
      live_parent_[static_cast<std::size_t>(s)] = kNoVertex;
      return Edge{s, d_->s_id(c.ub)};
    }
  }
  return std::nullopt;
}

bool InducedClusterForest::connected_in_cluster(Vertex a, Vertex b) const {
  const std::uint32_t c = d_->cluster_of(a);
  return conn_[c].connected(local_[static_cast<std::size_t>(a)], local_[static_cast<std::size_t>(b)]);
}

std::uint64_t InducedClusterForest::touches() const {
  std::uint64_t t = 0;
  for (const auto& c : conn_) t += c.touches();
  return t;
}

std::vector<Vertex> reference_cluster_forest(const RootedForest& t, const ClusterDecomposition& d,
                                             const std::vector<Vertex>& live_parent_of) {
  const auto& b = d.boundary();
  std::vector<Vertex> out(b.size(), kNoVertex);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Vertex v = b[i];
    const Cluster& c = d.cluster(d.cluster_of(v));
    if (v == c.lb && c.lb != c.ub) {
      // ub is a static ancestor of lb, so they are connected iff the live
      // parent chain from lb reaches ub.
      Vertex x = v;
      while (x != kNoVertex && x != c.ub) x = live_parent_of[static_cast<std::size_t>(x)];
      if (x == c.ub) out[i] = d.s_id(c.ub);
    } else {
      Vertex p = t.parent(v);
      if (p != kNoVertex && live_parent_of[static_cast<std::size_t>(v)] == p) out[i] = d.s_id(p);
    }
  }
  return out;
}

AltPartition alt_partition(const RootedForest& f, std::size_t k) {
  if (k < 1) k = 1;
  const std::size_t n = f.size();
  // owner[v]: top vertex of the part currently containing v; parts are
  // resolved top-down once sizes are known.
  std::vector<std::size_t> size(n, 1);
  std::vector<std::uint8_t> kept(n, 0);
  auto order = f.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    for (Vertex c : f.children(v)) {
      auto ci = static_cast<std::size_t>(c);
      if (size[ci] < k) size[static_cast<std::size_t>(v)] += size[ci];
      else kept[ci] = 1;
    }
  }
  AltPartition out;
  out.part_of.assign(n, 0);
  for (Vertex v : order) {
    auto vi = static_cast<std::size_t>(v);
    Vertex p = f.parent(v);
    if (p == kNoVertex || kept[vi]) {
      out.part_of[vi] = static_cast<std::uint32_t>(out.parts.size());
      out.parts.emplace_back();
    } else {
      out.part_of[vi] = out.part_of[static_cast<std::size_t>(p)];
    }
    out.parts[out.part_of[vi]].push_back(v);
  }
  return out;
}

}  // namespace decforest
