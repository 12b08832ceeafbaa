#include "decforest/connectivity/connectivity.hpp"

#include "decforest/core/probe.hpp"

namespace decforest {

DecrementalConnectivity::DecrementalConnectivity(std::shared_ptr<const RootedForest> f) : forest_(std::move(f)) {
  const std::size_t n = forest_->size();
  parent_.assign(forest_->parents().begin(), forest_->parents().end());
  first_child_.assign(n, kNoVertex);
  next_sib_.assign(n, kNoVertex);
  prev_sib_.assign(n, kNoVertex);
  for (std::size_t v = 0; v < n; ++v) {
    auto ch = forest_->children(static_cast<Vertex>(v));
    Vertex prev = kNoVertex;
    for (Vertex c : ch) {
      auto ci = static_cast<std::size_t>(c);
      if (prev == kNoVertex) first_child_[v] = c;
      else next_sib_[static_cast<std::size_t>(prev)] = c;
      prev_sib_[ci] = prev;
      prev = c;
    }
  }
  label_.assign(n, 0);
  label_root_.clear();
  label_root_.reserve(2 * n + 1);
  for (Vertex r : forest_->roots()) {
    label_root_.push_back(r);
  }
  // Labels are assigned per tree in root order; preorder visits trees contiguously.
  std::uint32_t current = 0;
  for (Vertex v : forest_->preorder()) {
    auto vi = static_cast<std::size_t>(v);
    if (parent_[vi] == kNoVertex) {
      while (label_root_[current] != v) ++current;
    }
    label_[vi] = current;
  }
}

Vertex DecrementalConnectivity::root(Vertex v) const {
  probe::tick();
  return label_root_[label_[check(v)]];
}

bool DecrementalConnectivity::connected(Vertex u, Vertex v) const {
  probe::tick();
  return label_[check(u)] == label_[check(v)];
}

bool DecrementalConnectivity::ancestor(Vertex u, Vertex v) const {
  probe::tick();
  return label_[check(u)] == label_[check(v)] && forest_->is_ancestor(u, v);
}

void DecrementalConnectivity::Cursor::start(Vertex r, const DecrementalConnectivity& dc) {
  stack.clear();
  seen.clear();
  stack.emplace_back(r, dc.first_child_[static_cast<std::size_t>(r)]);
  seen.push_back(r);
}

bool DecrementalConnectivity::Cursor::step(const DecrementalConnectivity& dc, std::uint64_t& touches) {
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    ++touches;
    if (next == kNoVertex) {
      stack.pop_back();
      continue;
    }
    Vertex c = next;
    next = dc.next_sib_[static_cast<std::size_t>(c)];
    stack.emplace_back(c, dc.first_child_[static_cast<std::size_t>(c)]);
    seen.push_back(c);
    return true;
  }
  return false;
}

CutResult DecrementalConnectivity::cut(Vertex v) {
  const std::size_t vi = check(v);
  if (forest_->is_aux(v)) throw Error(ErrorKind::AuxiliaryVertex, "cut(" + std::to_string(v) + ")");
  const Vertex u = parent_[vi];
  if (u == kNoVertex) throw Error(ErrorKind::NoParent, "cut(" + std::to_string(v) + ")");

  // Unlink v from u's child list.
  const auto ui = static_cast<std::size_t>(u);
  if (prev_sib_[vi] != kNoVertex) next_sib_[static_cast<std::size_t>(prev_sib_[vi])] = next_sib_[vi];
  else first_child_[ui] = next_sib_[vi];
  if (next_sib_[vi] != kNoVertex) prev_sib_[static_cast<std::size_t>(next_sib_[vi])] = prev_sib_[vi];
  prev_sib_[vi] = next_sib_[vi] = kNoVertex;
  parent_[vi] = kNoVertex;

  const std::uint32_t old_label = label_[vi];
  const Vertex r = label_root_[old_label];

  // a_ walks v's side, b_ walks the side of the old root. Each cursor has
  // already visited its start vertex, so the first step finds the second one.
  a_.start(v, *this);
  b_.start(r, *this);
  std::uint64_t t = 2;
  bool child_side = true;
  for (;;) {
    if (!a_.step(*this, t)) { child_side = true; break; }
    if (!b_.step(*this, t)) { child_side = false; break; }
  }
  touches_ += t;
  probe::tick(t);

  const auto fresh = static_cast<std::uint32_t>(label_root_.size());
  const Cursor& win = child_side ? a_ : b_;
  for (Vertex x : win.seen) label_[static_cast<std::size_t>(x)] = fresh;
  probe::tick(win.seen.size());
  touches_ += win.seen.size();
  if (child_side) {
    label_root_.push_back(v);
  } else {
    label_root_.push_back(r);
    label_root_[old_label] = v;
  }
  return CutResult{child_side, std::span<const Vertex>(win.seen), r};
}

}  // namespace decforest
