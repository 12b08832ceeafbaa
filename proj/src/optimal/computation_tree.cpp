#include "decforest/optimal/computation_tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace decforest {

namespace {

char kind_char(OpKind k) {
  switch (k) {
    case OpKind::Cut: return 'c';
    case OpKind::Update: return 'u';
    case OpKind::TreeSum: return 't';
    default: return '?';
  }
}

Operand parse_operand(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'R' && s[0] != 'W')) throw Error(ErrorKind::ParseError, "operand '" + s + "'");
  std::int32_t i = 0;
  try {
    i = std::stoi(s.substr(1));
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "operand '" + s + "'");
  }
  return s[0] == 'R' ? Operand::reg(i) : Operand::weight(i);
}

Instruction parse_instruction(const std::string& s) {
  auto eq = s.find('=');
  auto op = s.find_first_of("+-", eq == std::string::npos ? 0 : eq + 2);
  if (eq == std::string::npos || op == std::string::npos || s[0] != 'R') {
    throw Error(ErrorKind::ParseError, "instruction '" + s + "'");
  }
  Instruction ins;
  ins.target = parse_operand(s.substr(0, eq)).index;
  ins.subtract = s[op] == '-';
  ins.a = parse_operand(s.substr(eq + 1, op - eq - 1));
  ins.b = parse_operand(s.substr(op + 1));
  return ins;
}

}  // namespace

std::vector<TreeOp> ComputationTree::allowed_ops(const RootedForest& f, const std::vector<bool>& cut_on_path) {
  std::vector<TreeOp> ops;
  for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v) {
    if (f.is_aux(v)) continue;
    if (!f.is_root(v) && !cut_on_path[static_cast<std::size_t>(v)]) ops.push_back({OpKind::Cut, v});
    ops.push_back({OpKind::TreeSum, v});
    ops.push_back({OpKind::Update, v});
  }
  return ops;
}

ComputationTree ComputationTree::skeleton(const RootedForest& f, std::size_t m) {
  ComputationTree c;
  c.set_forest(f, m);
  c.nodes_.emplace_back();
  std::vector<std::vector<bool>> cuts{std::vector<bool>(f.size(), false)};
  for (std::size_t x = 0; x < c.nodes_.size(); ++x) {
    if (c.nodes_[x].depth == m) continue;
    const auto cut_here = cuts[x];
    for (TreeOp op : allowed_ops(f, cut_here)) {
      auto y = c.add_node(static_cast<std::int32_t>(x), op);
      auto cy = cut_here;
      if (op.kind == OpKind::Cut) cy[static_cast<std::size_t>(op.v)] = true;
      cuts.push_back(std::move(cy));
      (void)y;
    }
  }
  return c;
}

std::int32_t ComputationTree::add_node(std::int32_t parent, TreeOp label) {
  CtNode n;
  n.parent = parent;
  n.label = label;
  n.depth = parent < 0 ? 0 : nodes_.at(static_cast<std::size_t>(parent)).depth + 1;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(std::move(n));
  if (parent >= 0) nodes_[static_cast<std::size_t>(parent)].children.push_back(id);
  return id;
}

std::int32_t ComputationTree::child(std::int32_t x, TreeOp op) const {
  for (std::int32_t y : nodes_.at(static_cast<std::size_t>(x)).children) {
    if (nodes_[static_cast<std::size_t>(y)].label == op) return y;
  }
  return -1;
}

std::size_t ComputationTree::instruction_depth(std::int32_t x) const {
  std::size_t s = 0;
  for (; x >= 0; x = nodes_.at(static_cast<std::size_t>(x)).parent) s += nodes_[static_cast<std::size_t>(x)].code.size();
  return s;
}

std::size_t ComputationTree::mid() const {
  std::vector<std::size_t> depth(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t x = 0; x < nodes_.size(); ++x) {
    // parents precede children in every tree built through add_node
    const auto p = nodes_[x].parent;
    depth[x] = nodes_[x].code.size() + (p >= 0 ? depth[static_cast<std::size_t>(p)] : 0);
    best = std::max(best, depth[x]);
  }
  return best;
}

std::string format_operand(const Operand& o) {
  return (o.is_reg() ? "R" : "W") + std::to_string(o.index);
}

std::string format_instruction(const Instruction& ins) {
  return "R" + std::to_string(ins.target) + "=" + format_operand(ins.a) + (ins.subtract ? "-" : "+") +
         format_operand(ins.b);
}

void ComputationTree::write(std::ostream& out) const {
  out << "ctree " << height_ << ' ' << nodes_.size() << '\n';
  out << "forest " << forest_.size();
  for (Vertex p : forest_.parents()) out << ' ' << p;
  out << " aux ";
  for (bool a : forest_.aux_flags()) out << (a ? '1' : '0');
  if (forest_.size() == 0) out << '-';
  out << '\n';
  for (std::size_t x = 0; x < nodes_.size(); ++x) {
    const CtNode& n = nodes_[x];
    out << "node " << x << ' ' << n.parent << ' ' << (n.parent < 0 ? 'r' : kind_char(n.label.kind)) << ' '
        << (n.parent < 0 ? 0 : n.label.v) << " ret " << (n.ret ? format_operand(*n.ret) : "-") << " code "
        << n.code.size();
    for (const auto& ins : n.code) out << ' ' << format_instruction(ins);
    out << '\n';
  }
}

ComputationTree ComputationTree::read(std::istream& in) {
  auto fail = [](const std::string& what) { return Error(ErrorKind::ParseError, "computation tree: " + what); };
  std::string tok;
  std::size_t height = 0;
  std::size_t count = 0;
  if (!(in >> tok) || tok != "ctree" || !(in >> height >> count)) throw fail("missing header");
  std::size_t n = 0;
  if (!(in >> tok) || tok != "forest" || !(in >> n)) throw fail("missing forest");
  std::vector<Vertex> parents(n);
  for (auto& p : parents) {
    if (!(in >> p)) throw fail("forest parents");
  }
  std::string bits;
  if (!(in >> tok) || tok != "aux" || !(in >> bits)) throw fail("forest aux flags");
  std::vector<bool> aux(n, false);
  for (std::size_t i = 0; i < n && i < bits.size(); ++i) aux[i] = bits[i] == '1';
  ComputationTree c;
  c.set_forest(RootedForest::build(parents, aux), height);
  for (std::size_t x = 0; x < count; ++x) {
    std::int64_t id = 0;
    std::int32_t parent = 0;
    char kind = 0;
    Vertex v = 0;
    std::string ret;
    std::size_t k = 0;
    std::string r_tok;
    std::string c_tok;
    if (!(in >> tok >> id >> parent >> kind >> v >> r_tok >> ret >> c_tok >> k) || tok != "node" || r_tok != "ret" ||
        c_tok != "code" || id != static_cast<std::int64_t>(x)) {
      throw fail("node line " + std::to_string(x));
    }
    if ((parent < 0) != (x == 0) || parent >= static_cast<std::int32_t>(x)) throw fail("node parent");
    TreeOp op;
    switch (kind) {
      case 'c': op.kind = OpKind::Cut; break;
      case 'u': op.kind = OpKind::Update; break;
      case 't': op.kind = OpKind::TreeSum; break;
      case 'r': break;
      default: throw fail("operation kind");
    }
    op.v = v;
    if (x == 0) {
      c.nodes_.emplace_back();
    } else {
      c.add_node(parent, op);
    }
    CtNode& node = c.nodes_.back();
    if (ret != "-") node.ret = parse_operand(ret);
    for (std::size_t i = 0; i < k; ++i) {
      if (!(in >> tok)) throw fail("instruction list");
      node.code.push_back(parse_instruction(tok));
    }
  }
  return c;
}

std::vector<std::string> validate(const ComputationTree& c, const RootedForest& f, bool check_succinct) {
  std::vector<std::string> out;
  if (c.node_count() == 0) return {"tree has no root"};
  const std::size_t n = f.size();
  auto where = [](std::size_t x) { return "node " + std::to_string(x) + ": "; };
  std::vector<std::vector<bool>> cuts(c.node_count(), std::vector<bool>(n, false));
  std::vector<std::size_t> idepth(c.node_count(), 0);
  for (std::size_t x = 0; x < c.node_count(); ++x) {
    const CtNode& node = c.node(x);
    if (x == 0 && node.parent != -1) out.push_back(where(x) + "root has a parent");
    if (x > 0) {
      if (node.parent < 0 || static_cast<std::size_t>(node.parent) >= x) {
        out.push_back(where(x) + "bad parent");
        continue;
      }
      cuts[x] = cuts[static_cast<std::size_t>(node.parent)];
      const TreeOp op = node.label;
      if (op.v < 0 || static_cast<std::size_t>(op.v) >= n) {
        out.push_back(where(x) + "vertex out of range");
        continue;
      }
      if (f.is_aux(op.v)) out.push_back(where(x) + "operation on auxiliary vertex");
      if (op.kind == OpKind::Cut) {
        if (f.is_root(op.v)) out.push_back(where(x) + "cut of a root");
        if (cuts[x][static_cast<std::size_t>(op.v)]) out.push_back(where(x) + "repeated cut(" + std::to_string(op.v) + ")");
        cuts[x][static_cast<std::size_t>(op.v)] = true;
      } else if (op.kind != OpKind::Update && op.kind != OpKind::TreeSum) {
        out.push_back(where(x) + "unsupported operation");
      }
      const bool is_ts = op.kind == OpKind::TreeSum;
      if (is_ts != node.ret.has_value()) {
        out.push_back(where(x) + (is_ts ? "tree-sum node without return value" : "return value on non-tree-sum node"));
      }
    } else if (node.ret) {
      out.push_back(where(x) + "return value at the root");
    }
    idepth[x] = node.code.size() + (x > 0 ? idepth[static_cast<std::size_t>(node.parent)] : 0);
    auto check_operand = [&](const Operand& o) {
      if (o.is_reg()) {
        if (o.index < 1) out.push_back(where(x) + "register index below 1");
        else if (check_succinct && static_cast<std::size_t>(o.index) > idepth[x]) out.push_back(where(x) + "not succinct");
      } else if (o.index < 0 || static_cast<std::size_t>(o.index) >= n) {
        out.push_back(where(x) + "weight index out of range");
      }
    };
    for (const auto& ins : node.code) {
      check_operand(Operand::reg(ins.target));
      check_operand(ins.a);
      check_operand(ins.b);
    }
    if (node.ret) check_operand(*node.ret);

    // fan-out
    if (node.depth < c.height()) {
      auto want = ComputationTree::allowed_ops(f, cuts[x]);
      std::vector<TreeOp> have;
      for (auto y : node.children) have.push_back(c.node(static_cast<std::size_t>(y)).label);
      for (std::size_t i = 0; i < have.size(); ++i) {
        for (std::size_t j = i + 1; j < have.size(); ++j) {
          if (have[i] == have[j]) out.push_back(where(x) + "two edges share a label");
        }
      }
      for (const TreeOp& op : want) {
        if (std::find(have.begin(), have.end(), op) == have.end()) {
          out.push_back(where(x) + "missing edge " + std::string(op_kind_name(op.kind)) + "(" + std::to_string(op.v) + ")");
        }
      }
    } else if (!node.children.empty()) {
      out.push_back(where(x) + "node below the height");
    }
    if (node.children.empty() && node.depth != c.height()) out.push_back(where(x) + "leaf above the height");
  }
  return out;
}

namespace {

struct SymbolicRun {
  const ComputationTree& c;
  const RootedForest& f;
  VectorGroup g;
  bool ok = true;

  void visit(std::int32_t x, std::vector<Vertex> parent, std::vector<VectorGroup::value_type> w,
             std::unordered_map<std::int32_t, VectorGroup::value_type> r, std::size_t np) {
    if (!ok) return;
    const CtNode& node = c.node(static_cast<std::size_t>(x));
    if (x > 0) {
      const TreeOp op = node.label;
      if (op.kind == OpKind::Cut) parent[static_cast<std::size_t>(op.v)] = kNoVertex;
      if (op.kind == OpKind::Update) w[static_cast<std::size_t>(op.v)] = g.basis(np + node.depth - 1);
    }
    auto read = [&](const Operand& o) {
      if (!o.is_reg()) return w[static_cast<std::size_t>(o.index)];
      auto it = r.find(o.index);
      return it == r.end() ? g.zero() : it->second;
    };
    for (const auto& ins : node.code) {
      auto a = read(ins.a);
      auto b = read(ins.b);
      r.insert_or_assign(ins.target, ins.subtract ? g.sub(a, b) : g.add(a, b));
    }
    if (x > 0 && node.label.kind == OpKind::TreeSum) {
      auto root_of = [&](Vertex v) {
        while (parent[static_cast<std::size_t>(v)] != kNoVertex) v = parent[static_cast<std::size_t>(v)];
        return v;
      };
      const Vertex rv = root_of(node.label.v);
      auto want = g.zero();
      for (Vertex u = 0; u < static_cast<Vertex>(f.size()); ++u) {
        if (root_of(u) == rv) want = g.add(want, w[static_cast<std::size_t>(u)]);
      }
      if (read(*node.ret) != want) {
        ok = false;
        return;
      }
    }
    for (auto y : node.children) visit(y, parent, w, r, np);
  }
};

}  // namespace

bool check_correct(const ComputationTree& c, const RootedForest& f, std::size_t m) {
  if (c.height() != m || !validate(c, f).empty()) return false;
  std::size_t np = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v) np += f.is_aux(v) ? 0 : 1;
  SymbolicRun run{c, f, VectorGroup(np + m)};
  std::vector<VectorGroup::value_type> w(f.size(), run.g.zero());
  std::size_t i = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(f.size()); ++v) {
    if (!f.is_aux(v)) w[static_cast<std::size_t>(v)] = run.g.basis(i++);
  }
  std::vector<Vertex> parent(f.parents().begin(), f.parents().end());
  run.visit(0, std::move(parent), std::move(w), {}, np);
  return run.ok;
}

std::vector<std::vector<TreeOp>> all_sequences(const ComputationTree& c) {
  std::vector<std::vector<TreeOp>> out;
  for (std::size_t x = 0; x < c.node_count(); ++x) {
    if (!c.node(x).children.empty()) continue;
    std::vector<TreeOp> seq;
    for (auto y = static_cast<std::int32_t>(x); y > 0; y = c.node(static_cast<std::size_t>(y)).parent) {
      seq.push_back(c.node(static_cast<std::size_t>(y)).label);
    }
    std::reverse(seq.begin(), seq.end());
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace decforest
