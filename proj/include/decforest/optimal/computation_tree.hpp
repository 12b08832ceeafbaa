#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "decforest/core/forest.hpp"
#include "decforest/core/group.hpp"
#include "decforest/core/trace.hpp"

namespace decforest {

/// Edge label of a computation tree: cut, update-weight (no value) or
/// tree-sum on one vertex.
struct TreeOp {
  OpKind kind = OpKind::TreeSum;
  Vertex v = 0;

  friend bool operator==(const TreeOp&, const TreeOp&) = default;
};

/// R[i] (i >= 1) or W[v].
struct Operand {
  enum class Kind : std::uint8_t { Reg, Weight };
  Kind kind = Kind::Reg;
  std::int32_t index = 1;

  static Operand reg(std::int32_t i) { return {Kind::Reg, i}; }
  static Operand weight(Vertex v) { return {Kind::Weight, v}; }
  bool is_reg() const noexcept { return kind == Kind::Reg; }

  friend bool operator==(const Operand&, const Operand&) = default;
};

/// R[target] <- a + b, or a - b when `subtract`.
struct Instruction {
  std::int32_t target = 1;
  bool subtract = false;
  Operand a;
  Operand b;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct CtNode {
  std::int32_t parent = -1;
  TreeOp label;  // meaningless at the root
  std::uint32_t depth = 0;
  std::vector<Instruction> code;
  /// Return designator; present exactly on tree-sum nodes.
  std::optional<Operand> ret;
  std::vector<std::int32_t> children;
};

/// A computation tree for one fixed forest. Node 0 is the root.
class ComputationTree {
 public:
  ComputationTree() = default;

  /// The unique valid tree of height m with empty instruction lists.
  /// Children of a node are ordered by vertex, then cut, tree-sum, update.
  /// Auxiliary vertices get no edges at all.
  static ComputationTree skeleton(const RootedForest& f, std::size_t m);

  /// Operations allowed below a node whose path already cut `cut_on_path`.
  static std::vector<TreeOp> allowed_ops(const RootedForest& f, const std::vector<bool>& cut_on_path);

  const RootedForest& forest() const noexcept { return forest_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  const CtNode& node(std::size_t i) const { return nodes_.at(i); }
  CtNode& node(std::size_t i) { return nodes_.at(i); }
  const std::vector<CtNode>& nodes() const noexcept { return nodes_; }

  /// Child reached by `op`, or -1.
  std::int32_t child(std::int32_t x, TreeOp op) const;

  /// Sum of |I_y| over the ancestors y of x, x included.
  std::size_t instruction_depth(std::int32_t x) const;
  /// Maximum instruction depth over all nodes.
  std::size_t mid() const;

  /// Builder access for the search and for tests.
  std::int32_t add_node(std::int32_t parent, TreeOp label);
  void set_forest(RootedForest f, std::size_t height) {
    forest_ = std::move(f);
    height_ = height;
  }

  void write(std::ostream& out) const;
  static ComputationTree read(std::istream& in);

 private:
  RootedForest forest_;
  std::size_t height_ = 0;
  std::vector<CtNode> nodes_;
};

std::string format_operand(const Operand& o);
std::string format_instruction(const Instruction& ins);

/// Validity conditions against forest f, plus succinctness on request.
/// Returns human-readable violations; empty means valid.
std::vector<std::string> validate(const ComputationTree& c, const RootedForest& f, bool check_succinct = false);

/// Throws `IllegalSequence` when the sequence leaves the tree.
template <CommutativeGroup G>
class TreeExecutor {
 public:
  using value_type = typename G::value_type;

  TreeExecutor(const ComputationTree& c, G g, std::vector<value_type> w) : c_(&c), g_(std::move(g)), w_(std::move(w)) {
    w_.resize(c.forest().size(), g_.zero());
    run(0);
  }

  std::int32_t position() const noexcept { return x_; }

  /// Follows the edge for op; for update-weight, `x` is written first.
  /// Returns E_y on tree-sum edges.
  std::optional<value_type> step(TreeOp op, const value_type* x = nullptr) {
    const std::int32_t y = c_->child(x_, op);
    if (y < 0) {
      throw Error(ErrorKind::IllegalSequence, "no edge " + std::string(op_kind_name(op.kind)) + "(" +
                                                  std::to_string(op.v) + ") below node " + std::to_string(x_));
    }
    if (op.kind == OpKind::Update) w_.at(static_cast<std::size_t>(op.v)) = x ? *x : g_.zero();
    run(y);
    x_ = y;
    const CtNode& node = c_->node(static_cast<std::size_t>(y));
    if (op.kind == OpKind::TreeSum) {
      if (!node.ret) throw Error(ErrorKind::IllegalSequence, "tree-sum node without return value");
      return read(*node.ret);
    }
    return std::nullopt;
  }

  const G& group() const noexcept { return g_; }

 private:
  value_type read(const Operand& o) const {
    if (o.kind == Operand::Kind::Weight) return w_.at(static_cast<std::size_t>(o.index));
    auto it = r_.find(o.index);
    return it == r_.end() ? g_.zero() : it->second;
  }
  void run(std::int32_t y) {
    for (const Instruction& ins : c_->node(static_cast<std::size_t>(y)).code) {
      value_type a = read(ins.a);
      value_type b = read(ins.b);
      r_.insert_or_assign(ins.target, ins.subtract ? g_.sub(a, b) : g_.add(a, b));
    }
  }

  const ComputationTree* c_;
  G g_;
  std::vector<value_type> w_;
  std::unordered_map<std::int32_t, value_type> r_;
  std::int32_t x_ = 0;
};

/// Output of c on (g, w, sigma). `update_values[i]` is used when sigma[i]
/// is an update; other entries are ignored (the vector may be shorter if
/// no update follows).
template <CommutativeGroup G>
std::vector<typename G::value_type> evaluate(const ComputationTree& c, const G& g,
                                             std::vector<typename G::value_type> w, const std::vector<TreeOp>& sigma,
                                             const std::vector<typename G::value_type>& update_values = {}) {
  if (sigma.size() > c.height()) throw Error(ErrorKind::IllegalSequence, "sequence longer than the tree height");
  TreeExecutor<G> ex(c, g, std::move(w));
  std::vector<typename G::value_type> out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const typename G::value_type* x = i < update_values.size() ? &update_values[i] : nullptr;
    if (auto r = ex.step(sigma[i], x)) out.push_back(std::move(*r));
  }
  return out;
}

/// Symbolic check over Z^(n'+m): initial weight of the i-th non-auxiliary
/// vertex is e_i, the update at position j of a sequence writes e_(n'+j).
/// Every tree-sum answer must equal the indicator of the current weights in
/// the queried live component. Invalid trees are reported as incorrect.
bool check_correct(const ComputationTree& c, const RootedForest& f, std::size_t m);

/// Every root-to-leaf label sequence of c (each legal sequence of length
/// exactly height(c)); shorter sequences are prefixes of these.
std::vector<std::vector<TreeOp>> all_sequences(const ComputationTree& c);

}  // namespace decforest
