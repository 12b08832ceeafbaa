#include "decforest/optimal/extract.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace decforest {

namespace {

struct NodeRecord {
  bool set = false;
  std::vector<RecordedOp> code;
  std::optional<Sym> ret;
};

}  // namespace

ComputationTree structure_to_tree(const RecordingFactory& make, const RootedForest& f, std::size_t m) {
  ComputationTree c = ComputationTree::skeleton(f, m);
  const std::size_t count = c.node_count();
  const std::size_t n = f.size();

  // Version of each weight at each node: depth of its last update, 0 if none.
  std::vector<std::vector<std::uint32_t>> version(count);
  version[0].assign(n, 0);
  for (std::size_t x = 1; x < count; ++x) {
    const CtNode& node = c.node(x);
    version[x] = version[static_cast<std::size_t>(node.parent)];
    if (node.label.kind == OpKind::Update) version[x][static_cast<std::size_t>(node.label.v)] = node.depth;
  }

  std::vector<NodeRecord> rec(count);
  auto store = [&](std::size_t x, std::vector<RecordedOp> code, std::optional<Sym> ret) {
    NodeRecord& r = rec[x];
    if (!r.set) {
      r = {true, std::move(code), ret};
    } else if (r.code != code || r.ret != ret) {
      throw Error(ErrorKind::NondeterministicStructure, "replays disagree at computation node " + std::to_string(x));
    }
  };

  for (std::size_t leaf = 0; leaf < count; ++leaf) {
    if (!c.node(leaf).children.empty()) continue;
    std::vector<std::size_t> path;
    for (auto y = static_cast<std::int32_t>(leaf); y >= 0; y = c.node(static_cast<std::size_t>(y)).parent) {
      path.push_back(static_cast<std::size_t>(y));
    }
    std::reverse(path.begin(), path.end());

    auto recorder = std::make_shared<Recorder>();
    RecordingGroup g(recorder);
    std::vector<Sym> w(n);
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
      if (!f.is_aux(v)) w[static_cast<std::size_t>(v)] = {Sym::Kind::Weight, v, 0, 0};
    }
    auto s = make(f, w, g);
    store(0, recorder->log, std::nullopt);
    for (std::size_t i = 1; i < path.size(); ++i) {
      const CtNode& node = c.node(path[i]);
      const std::size_t mark = recorder->log.size();
      std::optional<Sym> ret;
      const Vertex v = node.label.v;
      switch (node.label.kind) {
        case OpKind::Cut: s->cut(v); break;
        case OpKind::Update: s->update_weight(v, {Sym::Kind::Weight, v, node.depth, 0}); break;
        case OpKind::TreeSum: ret = s->tree_sum(v); break;
        default: break;
      }
      store(path[i], {recorder->log.begin() + static_cast<std::ptrdiff_t>(mark), recorder->log.end()}, ret);
    }
  }

  // Liveness, walking back from every return value.
  std::vector<std::unordered_map<std::uint32_t, std::size_t>> where(count);
  std::vector<std::vector<bool>> live(count);
  for (std::size_t x = 0; x < count; ++x) {
    live[x].assign(rec[x].code.size(), false);
    for (std::size_t i = 0; i < rec[x].code.size(); ++i) where[x].emplace(rec[x].code[i].id, i);
  }
  auto find = [&](std::size_t y, std::uint32_t id) -> std::pair<std::size_t, std::size_t> {
    for (auto z = static_cast<std::int32_t>(y); z >= 0; z = c.node(static_cast<std::size_t>(z)).parent) {
      auto it = where[static_cast<std::size_t>(z)].find(id);
      if (it != where[static_cast<std::size_t>(z)].end()) return {static_cast<std::size_t>(z), it->second};
    }
    throw Error(ErrorKind::InvariantBroken, "value used before it was computed");
  };
  auto ancestor_at = [&](std::size_t y, std::uint32_t depth) {
    while (c.node(y).depth > depth) y = static_cast<std::size_t>(c.node(y).parent);
    return y;
  };
  std::map<std::pair<std::size_t, Vertex>, std::int32_t> copies;
  std::vector<std::pair<std::size_t, Sym>> work;
  for (std::size_t x = 0; x < count; ++x) {
    if (rec[x].ret) work.emplace_back(x, *rec[x].ret);
  }
  while (!work.empty()) {
    auto [y, s] = work.back();
    work.pop_back();
    if (s.kind == Sym::Kind::Weight) {
      if (version[y][static_cast<std::size_t>(s.v)] != s.version) copies.emplace(std::pair{ancestor_at(y, s.version), s.v}, 0);
    } else if (s.kind == Sym::Kind::Result) {
      auto [z, i] = find(y, s.id);
      if (!live[z][i]) {
        live[z][i] = true;
        work.emplace_back(z, rec[z].code[i].a);
        work.emplace_back(z, rec[z].code[i].b);
      }
    }
  }

  // Emit instructions with path-position register numbers.
  std::vector<std::int32_t> next_reg(count, 1);
  std::vector<std::vector<std::int32_t>> reg_of(count);
  for (std::size_t x = 0; x < count; ++x) {
    CtNode& node = c.node(x);
    std::int32_t t = x == 0 ? 1 : next_reg[static_cast<std::size_t>(node.parent)];
    auto operand = [&](const Sym& s, std::int32_t self) {
      switch (s.kind) {
        case Sym::Kind::Zero: return Operand::reg(self);
        case Sym::Kind::Weight:
          if (version[x][static_cast<std::size_t>(s.v)] == s.version) return Operand::weight(s.v);
          return Operand::reg(copies.at({ancestor_at(x, s.version), s.v}));
        case Sym::Kind::Result: {
          auto [z, i] = find(x, s.id);
          return Operand::reg(reg_of[z][i]);
        }
      }
      return Operand::reg(self);
    };
    node.code.clear();
    for (auto& [key, reg] : copies) {
      if (key.first != x) continue;
      reg = t++;
      node.code.push_back({reg, false, Operand::weight(key.second), Operand::reg(reg)});
    }
    reg_of[x].assign(rec[x].code.size(), 0);
    for (std::size_t i = 0; i < rec[x].code.size(); ++i) {
      if (!live[x][i]) continue;
      const RecordedOp& op = rec[x].code[i];
      const std::int32_t r = t++;
      node.code.push_back({r, op.subtract, operand(op.a, r), operand(op.b, r)});
      reg_of[x][i] = r;
    }
    if (rec[x].ret) {
      if (rec[x].ret->kind == Sym::Kind::Zero) {
        const std::int32_t r = t++;
        node.code.push_back({r, true, Operand::reg(r), Operand::reg(r)});
        node.ret = Operand::reg(r);
      } else {
        node.ret = operand(*rec[x].ret, 0);
      }
    }
    next_reg[x] = t;
  }
  return c;
}

}  // namespace decforest
