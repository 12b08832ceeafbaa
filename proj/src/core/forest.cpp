#include "decforest/core/forest.hpp"

#include <algorithm>
#include <string>

namespace decforest {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NoParent: return "NoParent";
    case ErrorKind::AuxiliaryVertex: return "AuxiliaryVertex";
    case ErrorKind::IllegalOperation: return "IllegalOperation";
    case ErrorKind::NotBinary: return "NotBinary";
    case ErrorKind::NotATree: return "NotATree";
    case ErrorKind::WordOverflow: return "WordOverflow";
    case ErrorKind::NonBinaryWeight: return "NonBinaryWeight";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IllegalSequence: return "IllegalSequence";
    case ErrorKind::NondeterministicStructure: return "NondeterministicStructure";
    case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorKind::InvariantBroken: return "InvariantBroken";
    case ErrorKind::DoubleFlip: return "DoubleFlip";
    case ErrorKind::OutOfOrderUpdate: return "OutOfOrderUpdate";
    case ErrorKind::UnknownStructure: return "UnknownStructure";
  }
  return "Unknown";
}

RootedForest RootedForest::build(std::span<const Vertex> parents, const std::vector<bool>& aux) {
  const std::size_t n = parents.size();
  if (!aux.empty() && aux.size() != n) {
    throw Error(ErrorKind::IndexOutOfRange, "aux flag count differs from vertex count");
  }
  RootedForest f;
  f.parent_.assign(parents.begin(), parents.end());
  f.aux_.assign(n, 0);
  for (std::size_t i = 0; i < aux.size(); ++i) f.aux_[i] = aux[i] ? 1 : 0;

  std::vector<std::size_t> deg(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    Vertex p = parents[v];
    if (p == kNoVertex) continue;
    if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw Error(ErrorKind::IndexOutOfRange, "parent of " + std::to_string(v));
    }
    if (static_cast<std::size_t>(p) == v) {
      throw Error(ErrorKind::CycleDetected, "self loop at " + std::to_string(v));
    }
    ++deg[static_cast<std::size_t>(p)];
  }
  f.child_begin_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) f.child_begin_[v + 1] = f.child_begin_[v] + deg[v];
  f.child_list_.assign(f.child_begin_[n], kNoVertex);
  std::vector<std::size_t> fill(f.child_begin_.begin(), f.child_begin_.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    Vertex p = parents[v];
    if (p != kNoVertex) f.child_list_[fill[static_cast<std::size_t>(p)]++] = static_cast<Vertex>(v);
  }

  f.pre_.assign(n, 0);
  f.post_.assign(n, 0);
  f.preorder_.reserve(n);
  std::uint32_t pre_clock = 0;
  std::uint32_t post_clock = 0;
  std::vector<std::pair<Vertex, std::size_t>> stack;
  for (std::size_t r = 0; r < n; ++r) {
    if (parents[r] != kNoVertex) continue;
    f.roots_.push_back(static_cast<Vertex>(r));
    stack.emplace_back(static_cast<Vertex>(r), 0);
    f.pre_[r] = pre_clock++;
    f.preorder_.push_back(static_cast<Vertex>(r));
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      auto vi = static_cast<std::size_t>(v);
      if (f.child_begin_[vi] + next < f.child_begin_[vi + 1]) {
        Vertex c = f.child_list_[f.child_begin_[vi] + next];
        ++next;
        f.pre_[static_cast<std::size_t>(c)] = pre_clock++;
        f.preorder_.push_back(c);
        stack.emplace_back(c, 0);
      } else {
        f.post_[vi] = post_clock++;
        stack.pop_back();
      }
    }
  }
  if (f.preorder_.size() != n) {
    throw Error(ErrorKind::CycleDetected, "parent relation contains a cycle");
  }
  return f;
}

std::vector<bool> RootedForest::aux_flags() const {
  std::vector<bool> out(aux_.size());
  for (std::size_t i = 0; i < aux_.size(); ++i) out[i] = aux_[i] != 0;
  return out;
}

bool RootedForest::is_binary() const noexcept {
  for (std::size_t v = 0; v < parent_.size(); ++v) {
    if (child_begin_[v + 1] - child_begin_[v] > 2) return false;
  }
  return true;
}

std::size_t RootedForest::depth(Vertex v) const {
  std::size_t d = 0;
  for (Vertex p = parent(v); p != kNoVertex; p = parent_[static_cast<std::size_t>(p)]) ++d;
  return d;
}

std::size_t RootedForest::height() const {
  std::vector<std::size_t> d(size(), 0);
  std::size_t h = 0;
  for (Vertex v : preorder_) {
    Vertex p = parent_[static_cast<std::size_t>(v)];
    if (p != kNoVertex) d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(p)] + 1;
    h = std::max(h, d[static_cast<std::size_t>(v)]);
  }
  return h;
}

RootedForest induced_subforest(const RootedForest& f, std::span<const Vertex> vertices) {
  thread_local std::vector<Vertex> scratch;
  if (scratch.size() < f.size()) scratch.resize(f.size(), kNoVertex);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    scratch[static_cast<std::size_t>(f.check(vertices[i]))] = static_cast<Vertex>(i);
  }
  std::vector<Vertex> parents(vertices.size(), kNoVertex);
  std::vector<bool> aux(vertices.size(), false);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    Vertex p = f.parent(vertices[i]);
    if (p != kNoVertex) parents[i] = scratch[static_cast<std::size_t>(p)];
    aux[i] = f.is_aux(vertices[i]);
  }
  for (Vertex v : vertices) scratch[static_cast<std::size_t>(v)] = kNoVertex;
  return RootedForest::build(parents, aux);
}

ComponentSplit split_components(const RootedForest& f) {
  ComponentSplit out;
  const std::size_t n = f.size();
  out.component.assign(n, 0);
  out.local.assign(n, kNoVertex);
  for (Vertex v : f.preorder()) {
    Vertex p = f.parent(v);
    auto vi = static_cast<std::size_t>(v);
    if (p == kNoVertex) {
      out.component[vi] = static_cast<std::uint32_t>(out.members.size());
      out.members.emplace_back();
    } else {
      out.component[vi] = out.component[static_cast<std::size_t>(p)];
    }
    auto& m = out.members[out.component[vi]];
    out.local[vi] = static_cast<Vertex>(m.size());
    m.push_back(v);
  }
  out.trees.reserve(out.members.size());
  for (const auto& m : out.members) {
    std::vector<Vertex> parents(m.size(), kNoVertex);
    std::vector<bool> aux(m.size(), false);
    for (std::size_t i = 0; i < m.size(); ++i) {
      Vertex p = f.parent(m[i]);
      if (p != kNoVertex) parents[i] = out.local[static_cast<std::size_t>(p)];
      aux[i] = f.is_aux(m[i]);
    }
    out.trees.push_back(RootedForest::build(parents, aux));
  }
  return out;
}

}  // namespace decforest
