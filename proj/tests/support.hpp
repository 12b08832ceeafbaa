#pragma once

// Test-side reference model and generators. Deliberately independent of the
// library's oracle module: sums are recomputed by scanning every vertex and
// walking parent pointers to the root.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "decforest/core/forest.hpp"

namespace ref {

using decforest::kNoVertex;
using decforest::Vertex;

struct Model {
  std::vector<Vertex> parent;
  std::vector<std::int64_t> w;
  std::vector<bool> aux;

  Model(std::vector<Vertex> p, std::vector<std::int64_t> weights, std::vector<bool> a = {})
      : parent(std::move(p)), w(std::move(weights)), aux(std::move(a)) {
    aux.resize(parent.size(), false);
    w.resize(parent.size(), 0);
  }

  std::size_t size() const { return parent.size(); }

  Vertex root(Vertex v) const {
    while (parent[static_cast<std::size_t>(v)] != kNoVertex) v = parent[static_cast<std::size_t>(v)];
    return v;
  }
  bool below(Vertex v, Vertex a) const {
    for (Vertex x = v; x != kNoVertex; x = parent[static_cast<std::size_t>(x)]) {
      if (x == a) return true;
    }
    return false;
  }
  /// Root of every vertex, memoized along the walked paths.
  std::vector<Vertex> roots() const {
    std::vector<Vertex> r(size(), kNoVertex - 1);
    std::vector<Vertex> walk;
    for (std::size_t s = 0; s < size(); ++s) {
      Vertex x = static_cast<Vertex>(s);
      while (r[static_cast<std::size_t>(x)] == kNoVertex - 1 && parent[static_cast<std::size_t>(x)] != kNoVertex) {
        walk.push_back(x);
        x = parent[static_cast<std::size_t>(x)];
      }
      Vertex top = r[static_cast<std::size_t>(x)] == kNoVertex - 1 ? x : r[static_cast<std::size_t>(x)];
      r[static_cast<std::size_t>(x)] = top;
      for (Vertex y : walk) r[static_cast<std::size_t>(y)] = top;
      walk.clear();
    }
    return r;
  }
  std::int64_t tree_sum(Vertex v) const {
    auto r = roots();
    std::int64_t s = 0;
    for (std::size_t x = 0; x < size(); ++x) {
      if (r[x] == r[static_cast<std::size_t>(v)]) s += w[x];
    }
    return s;
  }
  std::int64_t subtree_sum(Vertex v) const {
    std::int64_t s = 0;
    for (std::size_t x = 0; x < size(); ++x) {
      if (below(static_cast<Vertex>(x), v)) s += w[x];
    }
    return s;
  }
  void cut(Vertex v) { parent[static_cast<std::size_t>(v)] = kNoVertex; }
};

/// Uniformly growing random binary tree: vertex i attaches to a random
/// earlier vertex that still has fewer than two children.
inline std::vector<Vertex> binary_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> p(n, kNoVertex);
  std::vector<int> deg(n, 0);
  std::vector<Vertex> open;
  if (n == 0) return p;
  open.push_back(0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng);
    Vertex u = open[j];
    p[i] = u;
    if (++deg[static_cast<std::size_t>(u)] == 2) {
      open[j] = open.back();
      open.pop_back();
    }
    open.push_back(static_cast<Vertex>(i));
  }
  return p;
}

/// Random tree with unbounded degree (parent uniform among earlier ids).
inline std::vector<Vertex> any_tree(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> p(n, kNoVertex);
  for (std::size_t i = 1; i < n; ++i) p[i] = static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
  return p;
}

inline std::vector<Vertex> path(std::size_t n) {
  std::vector<Vertex> p(n, kNoVertex);
  for (std::size_t i = 1; i < n; ++i) p[i] = static_cast<Vertex>(i - 1);
  return p;
}

inline std::vector<std::int64_t> weights(std::size_t n, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> w(n);
  for (auto& x : w) x = std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  return w;
}

/// Vertices that still have a parent, in random order.
inline std::vector<Vertex> live_edges(const Model& m, std::mt19937_64& rng) {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m.parent[v] != kNoVertex && !m.aux[v]) out.push_back(static_cast<Vertex>(v));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

inline double log2d(double x) { return std::log2(x); }

}  // namespace ref
