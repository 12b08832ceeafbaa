#pragma once

// Helpers shared by the optimal-structure tests and the acceptance binary.

#include <map>
#include <optional>
#include <random>

#include "decforest/optimal/adaptive.hpp"
#include "support.hpp"

namespace optref {

using namespace decforest;

inline RootedForest forest(std::vector<Vertex> p) { return RootedForest::build(p); }

inline std::int64_t iv(const IntValue& x) { return x.get(); }

// ---------------------------------------------------------------------------
// Syntactic brute force, independent of the library's search: enumerates
// instruction lists with explicit register indices (succinct) and checks
// answers by concrete simulation over integer vectors.

using V = std::vector<long>;

struct Brute {
  std::vector<Vertex> parent0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t d = 0;

  struct State {
    std::vector<Vertex> parent;
    std::vector<V> w;
    std::map<int, V> r;
    std::size_t used = 0;
    std::size_t depth = 0;
    std::vector<bool> cut;
  };

  V zero() const { return V(n + m, 0); }
  V read(const State& s, bool reg, int i) const {
    if (!reg) return s.w[static_cast<std::size_t>(i)];
    auto it = s.r.find(i);
    return it == s.r.end() ? zero() : it->second;
  }
  V want(const State& s, Vertex v) const {
    ref::Model model(s.parent, std::vector<std::int64_t>(n, 0));
    V out = zero();
    for (std::size_t u = 0; u < n; ++u) {
      if (model.root(static_cast<Vertex>(u)) == model.root(v)) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += s.w[u][k];
      }
    }
    return out;
  }

  /// Arrive at a node whose edge has been applied to s; choose its list.
  bool node(const State& s, std::optional<Vertex> ts, std::size_t k_left_total) const {
    for (std::size_t k = 0; k <= k_left_total; ++k) {
      if (seq(s, ts, k, 0, s)) return true;
    }
    return false;
  }

  bool seq(const State& start, std::optional<Vertex> ts, std::size_t k, std::size_t done, const State& cur) const {
    const int limit = static_cast<int>(start.used + k);  // i_x of this node
    if (done == k) {
      State s = cur;
      s.used = start.used + k;
      if (ts) {
        const V target = want(s, *ts);
        bool hit = false;
        for (int j = 1; j <= limit && !hit; ++j) hit = read(s, true, j) == target;
        for (std::size_t v = 0; v < n && !hit; ++v) hit = read(s, false, static_cast<int>(v)) == target;
        if (!hit) return false;
      }
      return children(s);
    }
    // operands: R[1..limit] or W[v]
    std::vector<std::pair<bool, int>> ops;
    for (int j = 1; j <= limit; ++j) ops.emplace_back(true, j);
    for (std::size_t v = 0; v < n; ++v) ops.emplace_back(false, static_cast<int>(v));
    for (int t = 1; t <= limit; ++t) {
      for (bool sub : {false, true}) {
        for (auto a : ops) {
          for (auto b : ops) {
            State s = cur;
            V x = read(s, a.first, a.second);
            V y = read(s, b.first, b.second);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = sub ? x[i] - y[i] : x[i] + y[i];
            s.r[t] = x;
            if (seq(start, ts, k, done + 1, s)) return true;
          }
        }
      }
    }
    return false;
  }

  bool children(const State& s) const {
    if (s.depth == m) return true;
    for (std::size_t v = 0; v < n; ++v) {
      const auto x = static_cast<Vertex>(v);
      if (parent0[v] != kNoVertex && !s.cut[v]) {
        State c = s;
        c.parent[v] = kNoVertex;
        c.cut[v] = true;
        ++c.depth;
        if (!node(c, std::nullopt, d - c.used)) return false;
      }
      {
        State c = s;
        ++c.depth;
        if (!node(c, x, d - c.used)) return false;
      }
      {
        State c = s;
        ++c.depth;
        c.w[v] = zero();
        c.w[v][n + c.depth - 1] = 1;
        if (!node(c, std::nullopt, d - c.used)) return false;
      }
    }
    return true;
  }

  /// Smallest feasible MID <= d_max, or -1.
  int solve(std::size_t d_max) {
    for (d = 0; d <= d_max; ++d) {
      State s;
      s.parent = parent0;
      s.cut.assign(n, false);
      s.w.assign(n, zero());
      for (std::size_t v = 0; v < n; ++v) s.w[v][v] = 1;
      if (node(s, std::nullopt, d)) return static_cast<int>(d);
    }
    return -1;
  }
};

inline int brute_mid(const std::vector<Vertex>& p, std::size_t m, std::size_t d_max) {
  Brute b;
  b.parent0 = p;
  b.n = p.size();
  b.m = m;
  return b.solve(d_max);
}

/// Outputs of c on every full sequence for a few random weight draws.
inline std::vector<std::int64_t> fingerprint_outputs(const ComputationTree& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out;
  IntGroup g;
  for (int trial = 0; trial < 3; ++trial) {
    for (const auto& sigma : all_sequences(c)) {
      std::vector<IntValue> w;
      for (std::size_t v = 0; v < c.forest().size(); ++v) w.push_back(g.make(static_cast<std::int64_t>(rng() % 1000)));
      std::vector<IntValue> upd;
      for (std::size_t i = 0; i < sigma.size(); ++i) upd.push_back(g.make(static_cast<std::int64_t>(rng() % 1000)));
      for (auto x : evaluate(c, g, w, sigma, upd)) out.push_back(iv(x));
      out.push_back(-1);
    }
  }
  return out;
}

template <class G>
inline LeafFactory<G> simple_factory() {
  return [](const RootedForest& f, std::vector<typename G::value_type> w, const G& g) {
    return std::unique_ptr<TreeSumBase<G>>(new SimpleTreeSum<G>(std::make_shared<const RootedForest>(f), std::move(w), g));
  };
}

}  // namespace optref
