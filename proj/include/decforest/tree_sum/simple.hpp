#pragma once

#include <memory>
#include <vector>

#include "decforest/connectivity/connectivity.hpp"
#include "decforest/tree_sum/tree_sum_base.hpp"

namespace decforest {

/// Tree sums with O(1) queries and updates and O(n log n) total cut work.
///
/// Each live root r keeps S[r], the sum of its component. A cut sums the
/// smaller new component by traversal and gets the other one with a single
/// subtraction.
template <CommutativeGroup G>
class SimpleTreeSum final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  SimpleTreeSum(std::shared_ptr<const RootedForest> f, std::vector<value_type> weights, G g = G{})
      : g_(std::move(g)), conn_(f), w_(std::move(weights)) {
    const std::size_t n = f->size();
    if (w_.size() != n) w_.resize(n, g_.zero());
    S_.assign(n, g_.zero());
    std::vector<std::uint8_t> started(n, 0);
    for (Vertex v : f->preorder()) {
      Vertex r = conn_.root(v);
      auto ri = static_cast<std::size_t>(r);
      if (!started[ri]) {
        S_[ri] = w_[static_cast<std::size_t>(v)];
        started[ri] = 1;
      } else {
        S_[ri] = g_.add(S_[ri], w_[static_cast<std::size_t>(v)]);
      }
    }
  }

  SimpleTreeSum(const RootedForest& f, std::vector<value_type> weights, G g = G{})
      : SimpleTreeSum(std::make_shared<const RootedForest>(f), std::move(weights), std::move(g)) {}

  value_type tree_sum(Vertex v) override {
    check_regular(v);
    return S_[static_cast<std::size_t>(conn_.root(v))];
  }

  void update_weight(Vertex v, value_type x) override {
    check_regular(v);
    auto r = static_cast<std::size_t>(conn_.root(v));
    auto& y = w_[static_cast<std::size_t>(v)];
    S_[r] = g_.add(g_.sub(S_[r], y), x);
    y = std::move(x);
  }

  std::pair<value_type, value_type> cut_report(Vertex v) override {
    check_regular(v);
    const Vertex old_root = conn_.root(v);
    value_type X = S_[static_cast<std::size_t>(old_root)];
    CutResult res = conn_.cut(v);
    value_type s = w_[static_cast<std::size_t>(res.side[0])];
    for (std::size_t i = 1; i < res.side.size(); ++i) s = g_.add(s, w_[static_cast<std::size_t>(res.side[i])]);
    value_type other = g_.sub(X, s);
    auto vi = static_cast<std::size_t>(v);
    auto ri = static_cast<std::size_t>(old_root);
    if (res.child_side) {
      S_[vi] = s;
      S_[ri] = other;
      return {S_[vi], S_[ri]};
    }
    S_[ri] = s;
    S_[vi] = other;
    return {S_[vi], S_[ri]};
  }

  std::unique_ptr<TreeSumBase<G>> clone() const override { return std::make_unique<SimpleTreeSum>(*this); }
  std::size_t size() const override { return w_.size(); }

  const value_type& weight(Vertex v) const { return w_.at(static_cast<std::size_t>(v)); }
  const DecrementalConnectivity& connectivity() const noexcept { return conn_; }
  const G& group() const noexcept { return g_; }

 private:
  void check_regular(Vertex v) const {
    if (conn_.forest().is_aux(v)) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
  }

  G g_;
  DecrementalConnectivity conn_;
  std::vector<value_type> w_;
  std::vector<value_type> S_;
};

template <CommutativeGroup G>
LeafFactory<G> simple_leaf_factory() {
  return [](const RootedForest& f, std::vector<typename G::value_type> w, const G& g) {
    return std::unique_ptr<TreeSumBase<G>>(new SimpleTreeSum<G>(f, std::move(w), g));
  };
}

}  // namespace decforest
