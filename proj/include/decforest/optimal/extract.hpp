#pragma once

#include <memory>
#include <vector>

#include "decforest/optimal/computation_tree.hpp"
#include "decforest/tree_sum/tree_sum_base.hpp"

namespace decforest {

/// Symbolic group element seen by a structure under extraction: zero, a
/// vertex weight as set at step `version` (0 = initial), or the result of a
/// recorded operation.
struct Sym {
  enum class Kind : std::uint8_t { Zero, Weight, Result };
  Kind kind = Kind::Zero;
  Vertex v = 0;
  std::uint32_t version = 0;
  std::uint32_t id = 0;

  friend bool operator==(const Sym&, const Sym&) = default;
};

struct RecordedOp {
  std::uint32_t id = 0;
  bool subtract = false;
  Sym a;
  Sym b;

  friend bool operator==(const RecordedOp&, const RecordedOp&) = default;
};

struct Recorder {
  std::vector<RecordedOp> log;
  std::uint32_t next_id = 1;
};

/// Logs every add/sub. Adding zero, or subtracting zero, is folded away
/// without a record.
class RecordingGroup {
 public:
  using value_type = Sym;

  explicit RecordingGroup(std::shared_ptr<Recorder> rec = std::make_shared<Recorder>()) : rec_(std::move(rec)) {}

  Sym zero() const noexcept { return {}; }
  Sym add(const Sym& a, const Sym& b) const {
    if (a.kind == Sym::Kind::Zero) return b;
    if (b.kind == Sym::Kind::Zero) return a;
    return record(a, b, false);
  }
  Sym sub(const Sym& a, const Sym& b) const {
    if (b.kind == Sym::Kind::Zero) return a;
    return record(a, b, true);
  }

  Recorder& recorder() const noexcept { return *rec_; }

 private:
  Sym record(const Sym& a, const Sym& b, bool subtract) const {
    Sym r{Sym::Kind::Result, 0, 0, rec_->next_id++};
    rec_->log.push_back({r.id, subtract, a, b});
    return r;
  }

  std::shared_ptr<Recorder> rec_;
};

using RecordingFactory = LeafFactory<RecordingGroup>;

/// Computation tree of height m that performs exactly the group operations
/// the structure performs, minus operations no answer depends on.
///
/// Each root-to-leaf sequence is replayed on a fresh structure. A weight
/// read after it was overwritten is first copied into a register at the
/// node that introduced it. Throws `NondeterministicStructure` if two
/// replays disagree on a shared prefix.
ComputationTree structure_to_tree(const RecordingFactory& make, const RootedForest& f, std::size_t m);

/// A structure that runs a computation tree. Operations beyond the tree's
/// height, or not present in it, throw `IllegalSequence`. `cut_report` is
/// one cut followed by two tree-sums.
template <CommutativeGroup G>
class TreeStructure final : public TreeSumBase<G> {
 public:
  using value_type = typename G::value_type;

  TreeStructure(std::shared_ptr<const ComputationTree> c, const G& g, std::vector<value_type> w)
      : c_(std::move(c)), ex_(*c_, g, std::move(w)),
        parent_(c_->forest().parents().begin(), c_->forest().parents().end()) {}

  value_type tree_sum(Vertex v) override {
    ++steps_;
    return *ex_.step({OpKind::TreeSum, v});
  }
  void update_weight(Vertex v, value_type x) override {
    ++steps_;
    ex_.step({OpKind::Update, v}, &x);
  }
  void cut(Vertex v) override {
    ++steps_;
    ex_.step({OpKind::Cut, v});
    parent_.at(static_cast<std::size_t>(v)) = kNoVertex;
  }
  std::pair<value_type, value_type> cut_report(Vertex v) override {
    const Vertex u = parent_.at(static_cast<std::size_t>(v));
    if (u == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");
    cut(v);
    auto a = tree_sum(v);
    auto b = tree_sum(u);
    return {std::move(a), std::move(b)};
  }

  std::unique_ptr<TreeSumBase<G>> clone() const override { return std::make_unique<TreeStructure>(*this); }
  std::size_t size() const override { return c_->forest().size(); }

  std::size_t steps() const noexcept { return steps_; }
  std::size_t remaining() const noexcept { return c_->height() - steps_; }

 private:
  std::shared_ptr<const ComputationTree> c_;
  TreeExecutor<G> ex_;
  std::vector<Vertex> parent_;
  std::size_t steps_ = 0;
};

template <CommutativeGroup G>
std::unique_ptr<TreeSumBase<G>> tree_to_structure(std::shared_ptr<const ComputationTree> c, const G& g,
                                                  std::vector<typename G::value_type> w) {
  return std::make_unique<TreeStructure<G>>(std::move(c), g, std::move(w));
}

}  // namespace decforest
