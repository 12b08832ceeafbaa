#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "decforest/tree_sum/reduction.hpp"

namespace decforest {

/// Number of times log2 must be applied to n to get to <= 1.
inline std::size_t log_star(double n) {
  std::size_t t = 0;
  while (n > 1.0) {
    n = std::log2(n);
    ++t;
  }
  return t;
}

/// Splits a forest into its trees and runs one stacked structure per tree.
/// Components never merge, so the tree of a vertex is fixed at build time.
template <CommutativeGroup G>
class ComponentTreeSum final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  ComponentTreeSum(const RootedForest& f, const std::vector<value_type>& w, const G& g, const LevelSpec<G>& spec)
      : aux_(f.aux_flags()) {
    ComponentSplit split = split_components(f);
    comp_ = std::move(split.component);
    local_ = std::move(split.local);
    parts_.reserve(split.trees.size());
    for (std::size_t i = 0; i < split.trees.size(); ++i) {
      std::vector<value_type> cw;
      cw.reserve(split.members[i].size());
      for (Vertex v : split.members[i]) cw.push_back(w.at(static_cast<std::size_t>(v)));
      parts_.push_back(make_tree_sum_level<G>(split.trees[i], std::move(cw), g, spec));
    }
  }

  ComponentTreeSum(const ComponentTreeSum& o) : aux_(o.aux_), comp_(o.comp_), local_(o.local_) {
    parts_.reserve(o.parts_.size());
    for (const auto& p : o.parts_) parts_.push_back(p->clone());
  }

  value_type tree_sum(Vertex v) override { return part(v).tree_sum(local(v)); }
  void update_weight(Vertex v, value_type x) override { part(v).update_weight(local(v), std::move(x)); }
  std::pair<value_type, value_type> cut_report(Vertex v) override { return part(v).cut_report(local(v)); }

  std::unique_ptr<TreeSumBase<G>> clone() const override { return std::make_unique<ComponentTreeSum>(*this); }
  std::size_t size() const override { return comp_.size(); }

  std::size_t component_count() const noexcept { return parts_.size(); }
  const TreeSumBase<G>& component(std::size_t i) const { return *parts_.at(i); }

 private:
  TreeSumBase<G>& part(Vertex v) {
    if (v < 0 || static_cast<std::size_t>(v) >= comp_.size()) {
      throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
    }
    if (aux_[static_cast<std::size_t>(v)]) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
    probe::tick();
    return *parts_[comp_[static_cast<std::size_t>(v)]];
  }
  Vertex local(Vertex v) const { return local_[static_cast<std::size_t>(v)]; }

  std::vector<bool> aux_;
  std::vector<std::uint32_t> comp_;
  std::vector<Vertex> local_;
  std::vector<std::unique_ptr<TreeSumBase<G>>> parts_;
};

/// The reduction iterated t times over `SimpleTreeSum` (t = 1 is the simple
/// structure itself). Requires a binary forest.
template <CommutativeGroup G>
class IteratedTreeSum final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  IteratedTreeSum(const RootedForest& f, const std::vector<value_type>& w, std::size_t t, G g = G{},
                  std::optional<std::size_t> forced_k = std::nullopt)
      : t_(std::max<std::size_t>(t, 1)) {
    if (!f.is_binary()) throw Error(ErrorKind::NotBinary, "iterated structure expects a binary forest");
    LevelSpec<G> spec;
    spec.levels = t_;
    spec.leaf = simple_leaf_factory<G>();
    spec.forced_k = forced_k;
    impl_ = std::make_unique<ComponentTreeSum<G>>(f, w, g, spec);
  }

  /// t = log* n.
  static std::size_t default_levels(std::size_t n) {
    return std::max<std::size_t>(1, log_star(static_cast<double>(n)));
  }

  IteratedTreeSum(const IteratedTreeSum& o) : t_(o.t_), impl_(std::make_unique<ComponentTreeSum<G>>(*o.impl_)) {}

  value_type tree_sum(Vertex v) override { return impl_->tree_sum(v); }
  void update_weight(Vertex v, value_type x) override { impl_->update_weight(v, std::move(x)); }
  std::pair<value_type, value_type> cut_report(Vertex v) override { return impl_->cut_report(v); }
  std::unique_ptr<TreeSumBase<G>> clone() const override { return std::make_unique<IteratedTreeSum>(*this); }
  std::size_t size() const override { return impl_->size(); }

  std::size_t levels() const noexcept { return t_; }
  const ComponentTreeSum<G>& components() const noexcept { return *impl_; }

 private:
  std::size_t t_;
  std::unique_ptr<ComponentTreeSum<G>> impl_;
};

}  // namespace decforest
