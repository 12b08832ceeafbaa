#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "decforest/clustering/binarize.hpp"
#include "decforest/optimal/extract.hpp"
#include "decforest/optimal/search.hpp"
#include "decforest/tree_sum/iterated.hpp"
#include "decforest/tree_sum/simple.hpp"

namespace decforest {

/// Online structure that does not know the number of operations.
///
/// With t(m) = OPT(F, m) + n + m from the table, it starts with budget
/// t* = 3n and runs the optimal tree for the largest m* with t(m*) <= t*.
/// The operation after the m*-th triples t* (repeatedly, until m* grows),
/// rebuilds from the initial weights and replays the log. Past the end of
/// the table it falls back to `SimpleTreeSum` for good.
template <CommutativeGroup G>
class AdaptiveTreeSum final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  AdaptiveTreeSum(const RootedForest& f, std::vector<value_type> w, G g, std::shared_ptr<const OptTable> table)
      : forest_(std::make_shared<const RootedForest>(f)), table_(std::move(table)), g_(std::move(g)),
        w0_(std::move(w)), parent_(f.parents().begin(), f.parents().end()) {
    w0_.resize(f.size(), g_.zero());
    t_star_ = 3 * f.size();
    m_star_ = best_m(t_star_);
    rebuild();
  }

  value_type tree_sum(Vertex v) override {
    before_op();
    log_.push_back({OpKind::TreeSum, v, g_.zero()});
    return d_->tree_sum(v);
  }
  void update_weight(Vertex v, value_type x) override {
    before_op();
    log_.push_back({OpKind::Update, v, x});
    d_->update_weight(v, std::move(x));
  }
  void cut(Vertex v) override {
    if (parent_.at(static_cast<std::size_t>(v)) == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
    before_op();
    log_.push_back({OpKind::Cut, v, g_.zero()});
    d_->cut(v);
    parent_[static_cast<std::size_t>(v)] = kNoVertex;
  }
  std::pair<value_type, value_type> cut_report(Vertex v) override {
    const Vertex u = parent_.at(static_cast<std::size_t>(v));
    cut(v);
    auto a = tree_sum(v);
    auto b = tree_sum(u);
    return {std::move(a), std::move(b)};
  }

  std::unique_ptr<TreeSumBase<G>> clone() const override {
    auto c = std::unique_ptr<AdaptiveTreeSum>(new AdaptiveTreeSum(*this));
    c->d_ = d_->clone();
    return c;
  }
  std::size_t size() const override { return forest_->size(); }

  std::size_t rebuilds() const noexcept { return rebuilds_; }
  std::size_t last_replay_length() const noexcept { return last_replay_; }
  std::size_t current_m() const noexcept { return m_star_; }
  std::size_t budget() const noexcept { return t_star_; }
  bool fell_back() const noexcept { return fallback_; }
  std::size_t operations() const noexcept { return log_.size(); }

 private:
  struct Logged {
    OpKind kind;
    Vertex v;
    value_type x;
  };

  AdaptiveTreeSum(const AdaptiveTreeSum& o)
      : TreeSumBase<G>(), forest_(o.forest_), table_(o.table_), g_(o.g_), w0_(o.w0_), parent_(o.parent_), log_(o.log_),
        t_star_(o.t_star_), m_star_(o.m_star_), fallback_(o.fallback_), rebuilds_(o.rebuilds_),
        last_replay_(o.last_replay_) {}

  std::size_t t_of(std::size_t m) const { return table_->at(m).mid + forest_->size() + m; }

  /// Largest m in the table with t(m) <= t, or 0.
  std::size_t best_m(std::size_t t) const {
    std::size_t best = 0;
    for (std::size_t m = 1; table_ && m <= table_->max_m(); ++m) {
      if (t_of(m) <= t) best = m;
    }
    return best;
  }

  void before_op() {
    if (fallback_ || log_.size() < m_star_) return;
    const std::size_t cap = table_ ? table_->max_m() : 0;
    while (m_star_ <= log_.size() && m_star_ < cap) {
      t_star_ *= 3;
      m_star_ = best_m(t_star_);
    }
    ++rebuilds_;
    rebuild();
    last_replay_ = log_.size();
    for (const Logged& op : log_) {
      switch (op.kind) {
        case OpKind::Cut: d_->cut(op.v); break;
        case OpKind::Update: d_->update_weight(op.v, op.x); break;
        default: (void)d_->tree_sum(op.v); break;
      }
    }
    if (fallback_) log_.clear();
  }

  void rebuild() {
    if (m_star_ == 0 || m_star_ <= log_.size()) {
      fallback_ = true;
      d_ = std::make_unique<SimpleTreeSum<G>>(forest_, w0_, g_);
      return;
    }
    d_ = std::make_unique<TreeStructure<G>>(table_->at(m_star_).witness, g_, w0_);
  }

  std::shared_ptr<const RootedForest> forest_;
  std::shared_ptr<const OptTable> table_;
  G g_;
  std::vector<value_type> w0_;
  std::vector<Vertex> parent_;
  std::vector<Logged> log_;
  std::unique_ptr<TreeSumBase<G>> d_;
  std::size_t t_star_ = 0;
  std::size_t m_star_ = 0;
  bool fallback_ = false;
  std::size_t rebuilds_ = 0;
  std::size_t last_replay_ = 0;
};

/// Leaf factory for trees of at most two vertices. Aux flags are dropped on
/// the leaf: the reduction may query an auxiliary vertex of a cluster, and
/// its weight is zero anyway. `observe` sees every leaf tree.
template <CommutativeGroup G>
LeafFactory<G> adaptive_leaf_factory(std::size_t m_cap, std::function<void(const RootedForest&)> observe = {}) {
  return [m_cap, observe](const RootedForest& t, std::vector<typename G::value_type> w, const G& g) {
    if (observe) observe(t);
    auto plain = RootedForest::build(t.parents());
    SearchCaps caps;
    caps.max_m = std::max(caps.max_m, m_cap);
    auto table = shared_opt_table(plain, m_cap, caps);
    return std::unique_ptr<TreeSumBase<G>>(new AdaptiveTreeSum<G>(plain, std::move(w), g, std::move(table)));
  };
}

/// Tree sums on any forest: binarize, three rounds of the cluster reduction,
/// and adaptive optimal structures on the clusters of size <= 2 at the bottom.
template <CommutativeGroup G>
class UniversalTreeSum {
 public:
  using value_type = typename G::value_type;
  static constexpr std::size_t kLeafSize = 2;
  static constexpr std::size_t kDefaultMCap = 3;

  UniversalTreeSum(const RootedForest& f, const std::vector<value_type>& w, G g = G{}, std::size_t m_cap = kDefaultMCap,
                   std::function<void(const RootedForest&)> observe = {})
      : n_(f.size()), aux_(f.aux_flags()) {
    auto b = binarize<value_type>(f, w, g.zero());
    LevelSpec<G> spec;
    spec.levels = 4;
    spec.leaf = adaptive_leaf_factory<G>(m_cap, std::move(observe));
    spec.leaf_capacity = kLeafSize;
    impl_ = std::make_unique<ComponentTreeSum<G>>(b.forest, b.weights, g, spec);
  }

  value_type tree_sum(Vertex v) { return impl_->tree_sum(check(v)); }
  void update_weight(Vertex v, value_type x) { impl_->update_weight(check(v), std::move(x)); }
  std::pair<value_type, value_type> cut_report(Vertex v) { return impl_->cut_report(check(v)); }
  void cut(Vertex v) { impl_->cut(check(v)); }

  std::size_t size() const noexcept { return n_; }

 private:
  Vertex check(Vertex v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= n_) throw Error(ErrorKind::IndexOutOfRange, "vertex " + std::to_string(v));
    if (aux_[static_cast<std::size_t>(v)]) throw Error(ErrorKind::AuxiliaryVertex, "vertex " + std::to_string(v));
    return v;
  }

  std::size_t n_ = 0;
  std::vector<bool> aux_;
  std::unique_ptr<ComponentTreeSum<G>> impl_;
};

}  // namespace decforest
