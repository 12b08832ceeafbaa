#include "decforest/core/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace decforest {

std::string_view op_kind_name(OpKind k) noexcept {
  switch (k) {
    case OpKind::Cut: return "cut";
    case OpKind::Update: return "upd";
    case OpKind::TreeSum: return "tsum";
    case OpKind::SubtreeSum: return "ssum";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view w, std::size_t line) {
  std::int64_t x = 0;
  auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), x);
  if (ec != std::errc{} || ptr != w.data() + w.size()) {
    fail(line, "expected integer, got '" + std::string(w) + "'");
  }
  return x;
}

}  // namespace

OperationTrace parse_trace(std::istream& in) {
  OperationTrace t;
  bool have_init = false;
  std::string raw;
  std::size_t line = 0;
  auto vertex = [&](std::string_view w) {
    std::int64_t v = to_int(w, line);
    if (v < 0 || static_cast<std::size_t>(v) >= t.parents.size()) {
      fail(line, "vertex " + std::string(w) + " out of range");
    }
    return static_cast<Vertex>(v);
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s(raw);
    if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    auto w = split_words(s);
    if (w.empty()) continue;
    const std::string_view cmd = w[0];
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (w.size() - 1 < lo || w.size() - 1 > hi) fail(line, "wrong argument count for " + std::string(cmd));
    };
    if (cmd == "init") {
      arity(1, 1);
      if (have_init) fail(line, "duplicate init");
      std::int64_t n = to_int(w[1], line);
      if (n < 0 || n > (std::int64_t{1} << 30)) fail(line, "bad vertex count");
      t.parents.assign(static_cast<std::size_t>(n), kNoVertex);
      t.aux.assign(static_cast<std::size_t>(n), false);
      t.weights.assign(static_cast<std::size_t>(n), 0);
      have_init = true;
      continue;
    }
    if (!have_init) fail(line, "expected 'init <n>' first");
    if (cmd == "parent") {
      arity(2, 2);
      Vertex v = vertex(w[1]);
      std::int64_t p = to_int(w[2], line);
      if (p != -1) p = vertex(w[2]);
      t.parents[static_cast<std::size_t>(v)] = static_cast<Vertex>(p);
    } else if (cmd == "aux") {
      arity(1, 1);
      t.aux[static_cast<std::size_t>(vertex(w[1]))] = true;
    } else if (cmd == "weight") {
      arity(2, 2);
      Vertex v = vertex(w[1]);
      t.weights[static_cast<std::size_t>(v)] = to_int(w[2], line);
    } else if (cmd == "cut") {
      arity(1, 1);
      t.ops.push_back(TraceOp::cut(vertex(w[1])));
    } else if (cmd == "upd") {
      arity(2, 2);
      Vertex v = vertex(w[1]);
      t.ops.push_back(TraceOp::update(v, to_int(w[2], line)));
    } else if (cmd == "tsum" || cmd == "ssum") {
      arity(1, 2);
      Vertex v = vertex(w[1]);
      std::optional<std::int64_t> e;
      if (w.size() == 3) e = to_int(w[2], line);
      t.ops.push_back(cmd == "tsum" ? TraceOp::tree_sum(v, e) : TraceOp::subtree_sum(v, e));
    } else {
      fail(line, "unknown record '" + std::string(cmd) + "'");
    }
  }
  if (!have_init) fail(line, "missing init record");
  return t;
}

OperationTrace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

OperationTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  return parse_trace(in);
}

void write_trace(std::ostream& out, const OperationTrace& t) {
  out << "init " << t.parents.size() << '\n';
  for (std::size_t v = 0; v < t.parents.size(); ++v) {
    if (t.parents[v] != kNoVertex) out << "parent " << v << ' ' << t.parents[v] << '\n';
  }
  for (std::size_t v = 0; v < t.aux.size(); ++v) {
    if (t.aux[v]) out << "aux " << v << '\n';
  }
  for (std::size_t v = 0; v < t.weights.size(); ++v) {
    if (t.weights[v] != 0) out << "weight " << v << ' ' << t.weights[v] << '\n';
  }
  if (t.exhausted) out << "# exhausted\n";
  for (const auto& op : t.ops) {
    out << op_kind_name(op.kind) << ' ' << op.v;
    if (op.kind == OpKind::Update) out << ' ' << op.value;
    if (op.expected) out << ' ' << *op.expected;
    out << '\n';
  }
}

std::string format_trace(const OperationTrace& t) {
  std::ostringstream out;
  write_trace(out, t);
  return out.str();
}

}  // namespace decforest
