#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decforest/core/structure.hpp"

namespace decforest {

/// Reference forest: every query walks the live forest.
class NaiveForest {
 public:
  NaiveForest(std::vector<Vertex> parents, std::vector<bool> aux, std::vector<std::int64_t> weights);
  explicit NaiveForest(const OperationTrace& t) : NaiveForest(t.parents, t.aux, t.weights) {}

  std::size_t size() const noexcept { return parent_.size(); }

  void cut(Vertex v);
  void update_weight(Vertex v, std::int64_t x);
  std::int64_t tree_sum(Vertex v) const;
  std::int64_t subtree_sum(Vertex v) const;

  Vertex parent(Vertex v) const { return parent_.at(static_cast<std::size_t>(v)); }
  Vertex root(Vertex v) const;
  bool connected(Vertex u, Vertex v) const { return root(u) == root(v); }
  /// Ancestor in the live forest; reflexive.
  bool ancestor(Vertex u, Vertex v) const;
  bool is_aux(Vertex v) const { return aux_.at(static_cast<std::size_t>(v)); }
  std::int64_t weight(Vertex v) const { return w_.at(static_cast<std::size_t>(v)); }
  const std::vector<Vertex>& live_parents() const noexcept { return parent_; }

 private:
  void check(Vertex v) const;
  std::int64_t sum_below(Vertex r) const;

  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<bool> aux_;
  std::vector<std::int64_t> w_;
};

/// `NaiveForest` behind the `ForestStructure` interface ("oracle").
class NaiveStructure final : public ForestStructure {
 public:
  explicit NaiveStructure(NaiveForest f) : f_(std::move(f)) {}

  std::string name() const override { return "oracle"; }
  bool supports(OpKind) const override { return true; }
  void cut(Vertex v) override { f_.cut(v); }
  void update_weight(Vertex v, std::int64_t x) override { f_.update_weight(v, x); }
  std::int64_t tree_sum(Vertex v) override { return f_.tree_sum(v); }
  std::int64_t subtree_sum(Vertex v) override { return f_.subtree_sum(v); }

  const NaiveForest& forest() const noexcept { return f_; }

 private:
  NaiveForest f_;
};

/// Replays `trace` on `s` with a fresh oracle answering alongside.
ReplayReport replay_with_oracle(const OperationTrace& trace, ForestStructure& s, bool record_per_op = false);

}  // namespace decforest
