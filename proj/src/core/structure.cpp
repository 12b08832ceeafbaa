#include "decforest/core/structure.hpp"

#include "decforest/core/probe.hpp"

namespace decforest {

void ForestStructure::update_weight(Vertex, std::int64_t) {
  throw Error(ErrorKind::IllegalOperation, name() + " does not support update_weight");
}

std::int64_t ForestStructure::tree_sum(Vertex) {
  throw Error(ErrorKind::IllegalOperation, name() + " does not support tree_sum");
}

std::int64_t ForestStructure::subtree_sum(Vertex) {
  throw Error(ErrorKind::IllegalOperation, name() + " does not support subtree_sum");
}

namespace {

CounterSnapshot snapshot(const ForestStructure& s) {
  OpCounts c = s.group_counts();
  return {c.adds, c.subs, probe::read()};
}

[[noreturn]] void illegal(std::size_t i, const std::string& why) {
  throw Error(ErrorKind::IllegalOperation, "op " + std::to_string(i) + ": " + why);
}

}  // namespace

ReplayReport replay(const OperationTrace& trace, ForestStructure& s, const ReplayOptions& opts) {
  ReplayReport rep;
  const std::size_t n = trace.parents.size();
  std::vector<std::uint8_t> cut(n, 0);
  auto aux = [&](Vertex v) { return static_cast<std::size_t>(v) < trace.aux.size() && trace.aux[static_cast<std::size_t>(v)]; };

  const CounterSnapshot start = snapshot(s);
  for (std::size_t i = 0; i < trace.ops.size(); ++i) {
    const TraceOp& op = trace.ops[i];
    if (op.v < 0 || static_cast<std::size_t>(op.v) >= n) illegal(i, "vertex out of range");
    if (aux(op.v)) illegal(i, "auxiliary vertex " + std::to_string(op.v));
    if (!s.supports(op.kind)) illegal(i, s.name() + " does not support " + std::string(op_kind_name(op.kind)));

    std::optional<std::int64_t> got;
    std::optional<std::int64_t> ref;
    switch (op.kind) {
      case OpKind::Cut: {
        auto vi = static_cast<std::size_t>(op.v);
        if (trace.parents[vi] == kNoVertex || cut[vi]) illegal(i, "cut of a root");
        cut[vi] = 1;
        s.cut(op.v);
        if (opts.reference) opts.reference->cut(op.v);
        break;
      }
      case OpKind::Update:
        s.update_weight(op.v, op.value);
        if (opts.reference) opts.reference->update_weight(op.v, op.value);
        break;
      case OpKind::TreeSum:
        got = s.tree_sum(op.v);
        if (opts.reference) ref = opts.reference->tree_sum(op.v);
        break;
      case OpKind::SubtreeSum:
        got = s.subtree_sum(op.v);
        if (opts.reference) ref = opts.reference->subtree_sum(op.v);
        break;
    }
    if (got) {
      rep.answers.push_back(*got);
      if (op.expected && *op.expected != *got) {
        rep.mismatches.push_back({i, op.kind, op.v, *got, *op.expected, false});
      } else if (ref && *ref != *got) {
        rep.mismatches.push_back({i, op.kind, op.v, *got, *ref, true});
      }
    }
    if (opts.record_per_op) {
      CounterSnapshot now = snapshot(s);
      rep.per_op.push_back({now.adds - start.adds, now.subs - start.subs, now.probes - start.probes});
    }
    if (opts.stop_on_mismatch && !rep.mismatches.empty()) break;
  }
  const CounterSnapshot end = snapshot(s);
  rep.totals = {end.adds - start.adds, end.subs - start.subs, end.probes - start.probes};
  return rep;
}

}  // namespace decforest
