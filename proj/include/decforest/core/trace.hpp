#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decforest/core/forest.hpp"

namespace decforest {

enum class OpKind : std::uint8_t { Cut, Update, TreeSum, SubtreeSum };

std::string_view op_kind_name(OpKind k) noexcept;

struct TraceOp {
  OpKind kind = OpKind::TreeSum;
  Vertex v = 0;
  std::int64_t value = 0;  // new weight for Update
  std::optional<std::int64_t> expected;

  static TraceOp cut(Vertex v) { return {OpKind::Cut, v, 0, std::nullopt}; }
  static TraceOp update(Vertex v, std::int64_t x) { return {OpKind::Update, v, x, std::nullopt}; }
  static TraceOp tree_sum(Vertex v, std::optional<std::int64_t> e = {}) {
    return {OpKind::TreeSum, v, 0, e};
  }
  static TraceOp subtree_sum(Vertex v, std::optional<std::int64_t> e = {}) {
    return {OpKind::SubtreeSum, v, 0, e};
  }
};

/// An initial weighted forest plus an operation sequence.
struct OperationTrace {
  std::vector<Vertex> parents;
  std::vector<bool> aux;
  std::vector<std::int64_t> weights;
  std::vector<TraceOp> ops;
  /// Set by generators that ran out of legal operations early.
  bool exhausted = false;

  std::size_t size() const noexcept { return parents.size(); }
  RootedForest forest() const { return RootedForest::build(parents, aux); }
};

/// Text format, one record per line:
///   init <n>
///   parent <v> <p|-1>
///   aux <v>
///   weight <v> <int>
///   cut <v> | upd <v> <int> | tsum <v> [<expected>] | ssum <v> [<expected>]
/// Blank lines and text after `#` are ignored. Throws `ParseError` naming the line.
OperationTrace parse_trace(std::istream& in);
OperationTrace parse_trace(std::string_view text);
OperationTrace load_trace(const std::string& path);

void write_trace(std::ostream& out, const OperationTrace& trace);
std::string format_trace(const OperationTrace& trace);

}  // namespace decforest
