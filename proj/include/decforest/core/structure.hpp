#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decforest/core/group.hpp"
#include "decforest/core/trace.hpp"

namespace decforest {

/// Type-erased handle over int64 weights, used by replay, the CLI and the
/// Python bindings. Unsupported operations throw `IllegalOperation`.
class ForestStructure {
 public:
  virtual ~ForestStructure() = default;

  virtual std::string name() const = 0;
  virtual bool supports(OpKind kind) const = 0;

  virtual void cut(Vertex v) = 0;
  virtual void update_weight(Vertex v, std::int64_t x);
  virtual std::int64_t tree_sum(Vertex v);
  virtual std::int64_t subtree_sum(Vertex v);

  /// Group additions/subtractions performed so far (zero for structures that
  /// work on plain integers).
  virtual OpCounts group_counts() const { return {}; }
};

struct CounterSnapshot {
  std::uint64_t adds = 0;
  std::uint64_t subs = 0;
  std::uint64_t probes = 0;
};

struct Mismatch {
  std::size_t index = 0;
  OpKind kind = OpKind::TreeSum;
  Vertex v = 0;
  std::int64_t got = 0;
  std::int64_t expected = 0;
  bool against_reference = false;
};

struct ReplayReport {
  /// One entry per query, in trace order.
  std::vector<std::int64_t> answers;
  std::vector<Mismatch> mismatches;
  /// Counter deltas over the whole replay.
  CounterSnapshot totals;
  /// Cumulative counters after each operation, if requested.
  std::vector<CounterSnapshot> per_op;

  bool ok() const noexcept { return mismatches.empty(); }
};

struct ReplayOptions {
  /// When set, every query is also answered by this structure and
  /// disagreements are reported as mismatches.
  ForestStructure* reference = nullptr;
  bool record_per_op = false;
  /// Stop at the first mismatch.
  bool stop_on_mismatch = false;
};

/// Feeds each trace record to `s`. Legality is checked before the structure
/// sees the record; a violation throws `IllegalOperation`. Wrong answers are
/// recorded, not thrown.
ReplayReport replay(const OperationTrace& trace, ForestStructure& s, const ReplayOptions& opts = {});

}  // namespace decforest
