#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "decforest/clustering/binarize.hpp"
#include "decforest/clustering/decomposition.hpp"
#include "decforest/tree_sum/reduction.hpp"
#include "support.hpp"

using namespace decforest;

namespace {

std::vector<Vertex> parents_of(const RootedForest& f) { return {f.parents().begin(), f.parents().end()}; }

/// Structural validity of a decomposition, checked from the definition.
void check_valid(const RootedForest& t, const ClusterDecomposition& d, std::size_t k) {
  const std::size_t n = t.size();
  std::vector<int> hits(n, 0);
  for (const Cluster& c : d.clusters()) {
    REQUIRE(!c.members.empty());
    REQUIRE(c.members.size() <= k);
    std::set<Vertex> in(c.members.begin(), c.members.end());
    std::size_t tops = 0;
    for (Vertex v : c.members) {
      ++hits[static_cast<std::size_t>(v)];
      REQUIRE(d.cluster_of(v) == c.id);
      Vertex p = t.parent(v);
      if (p == kNoVertex || !in.count(p)) {
        ++tops;
        REQUIRE(v == c.ub);
      }
      for (Vertex ch : t.children(v)) {
        if (!in.count(ch)) REQUIRE(v == c.lb);
      }
    }
    REQUIRE(tops == 1);
    if (c.has_lb()) {
      REQUIRE(in.count(c.lb));
      for (Vertex ch : t.children(c.lb)) REQUIRE_FALSE(in.count(ch));
    }
  }
  for (int h : hits) REQUIRE(h == 1);
}

}  // namespace

TEST_CASE("binarize a root with four children") {
  auto f = build_forest(std::vector<Vertex>{kNoVertex, 0, 0, 0, 0});
  auto b = binarize<std::int64_t>(f, {1, 2, 3, 4, 5}, 0);
  CHECK(b.forest.is_binary());
  CHECK(b.forest.size() == 8);
  CHECK(b.forest.size() <= 2 * f.size());
  std::size_t aux = 0;
  for (std::size_t v = 0; v < b.forest.size(); ++v) aux += b.forest.is_aux(static_cast<Vertex>(v)) ? 1 : 0;
  CHECK(aux == 3);
  for (Vertex v = 0; v < 5; ++v) {
    CHECK_FALSE(b.forest.is_aux(v));
    CHECK(b.original_of[static_cast<std::size_t>(v)] == v);
  }
  for (std::size_t v = 5; v < 8; ++v) {
    CHECK(b.weights[v] == 0);
    CHECK(b.original_of[v] == kNoVertex);
  }
  // every path vertex owns exactly one original child
  for (Vertex c = 1; c <= 4; ++c) {
    Vertex p = b.forest.parent(c);
    CHECK((p == 0 || b.forest.is_aux(p)));
  }
}

TEST_CASE("binarize leaves binary forests alone") {
  std::mt19937_64 rng(1);
  auto p = ref::binary_tree(50, rng);
  auto f = build_forest(p);
  auto b = binarize<std::int64_t>(f, std::vector<std::int64_t>(50, 1), 0);
  CHECK(parents_of(b.forest) == p);
  auto one = binarize<std::int64_t>(build_forest(std::vector<Vertex>{kNoVertex}), {7}, 0);
  CHECK(one.forest.size() == 1);
  CHECK(one.weights[0] == 7);
}

TEST_CASE("binarized forests answer identically") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 1 + rng() % 60;
    auto p = ref::any_tree(n, rng);
    auto w = ref::weights(n, rng, -50, 50);
    auto f = build_forest(p);
    auto b = binarize<std::int64_t>(f, w, 0);
    REQUIRE(b.forest.is_binary());
    REQUIRE(b.forest.size() <= 2 * n);
    ref::Model orig(p, w);
    ref::Model bin(parents_of(b.forest), b.weights, b.forest.aux_flags());
    for (Vertex v : ref::live_edges(orig, rng)) {
      orig.cut(v);
      bin.cut(v);
      for (std::size_t x = 0; x < n; ++x) {
        REQUIRE(orig.tree_sum(static_cast<Vertex>(x)) == bin.tree_sum(static_cast<Vertex>(x)));
        REQUIRE(orig.subtree_sum(static_cast<Vertex>(x)) == bin.subtree_sum(static_cast<Vertex>(x)));
      }
    }
  }
}

TEST_CASE("decompose the 8-path with k = 3") {
  auto t = build_forest(ref::path(8));
  auto d = ClusterDecomposition::decompose(t, 3);
  REQUIRE(d.clusters().size() == 3);
  const Cluster& a = d.cluster(d.cluster_of(0));
  const Cluster& b = d.cluster(d.cluster_of(2));
  const Cluster& c = d.cluster(d.cluster_of(5));
  CHECK(a.members == std::vector<Vertex>{0, 1});
  CHECK(a.ub == 0);
  CHECK(a.lb == 1);
  CHECK(b.members == std::vector<Vertex>{2, 3, 4});
  CHECK(b.ub == 2);
  CHECK(b.lb == 4);
  CHECK(c.members == std::vector<Vertex>{5, 6, 7});
  CHECK(c.ub == 5);
  CHECK_FALSE(c.has_lb());

  CHECK(d.boundary() == std::vector<Vertex>{0, 1, 2, 4, 5});
  CHECK(parents_of(d.cluster_tree()) == std::vector<Vertex>{kNoVertex, 0, 1, 2, 3});
  CHECK(d.dump().find("cluster 0 ub=0 lb=1 members=0,1") != std::string::npos);
  CHECK(d.dump().find("lb=- members=5,6,7") != std::string::npos);
}

TEST_CASE("decompose extremes") {
  std::mt19937_64 rng(4);
  auto p = ref::binary_tree(40, rng);
  auto t = build_forest(p);
  auto whole = ClusterDecomposition::decompose(t, 40);
  REQUIRE(whole.clusters().size() == 1);
  CHECK_FALSE(whole.clusters()[0].has_lb());
  auto singles = ClusterDecomposition::decompose(t, 1);
  CHECK(singles.clusters().size() == 40);
  check_valid(t, singles, 1);
}

TEST_CASE("decompose rejects non-binary trees and forests") {
  try {
    (void)ClusterDecomposition::decompose(build_forest(std::vector<Vertex>{kNoVertex, 0, 0, 0}), 2);
    FAIL("accepted a ternary node");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBinary);
  }
  try {
    (void)ClusterDecomposition::decompose(build_forest(std::vector<Vertex>{kNoVertex, kNoVertex}), 2);
    FAIL("accepted a forest");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotATree);
  }
}

TEST_CASE("cluster count and size bounds on random binary trees") {
  std::mt19937_64 rng(31337);
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t n = 1 + rng() % 2048;
    auto t = build_forest(ref::binary_tree(n, rng));
    for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::max<std::size_t>(1, ceil_log2(n)), n}) {
      auto d = ClusterDecomposition::decompose(t, k);
      REQUIRE(d.clusters().size() * k <= 6 * n);
      check_valid(t, d, k);
      REQUIRE(parents_of(rebuild_cluster_tree(t, d)) == parents_of(d.cluster_tree()));
    }
  }
}

TEST_CASE("induced cluster forest on the 8-path") {
  auto t = build_forest(ref::path(8));
  auto d = std::make_shared<const ClusterDecomposition>(ClusterDecomposition::decompose(t, 3));
  {
    InducedClusterForest icf(t, d);
    auto e = icf.on_cut(3);
    REQUIRE(e.has_value());
    CHECK(d->boundary()[static_cast<std::size_t>(e->child)] == 4);
    CHECK(d->boundary()[static_cast<std::size_t>(e->parent)] == 2);
  }
  {
    InducedClusterForest icf(t, d);
    auto e = icf.on_cut(5);
    REQUIRE(e.has_value());
    CHECK(d->boundary()[static_cast<std::size_t>(e->child)] == 5);
    CHECK(d->boundary()[static_cast<std::size_t>(e->parent)] == 4);
  }
  {
    InducedClusterForest icf(t, d);
    CHECK_FALSE(icf.on_cut(7).has_value());
    CHECK_THROWS_AS(icf.on_cut(7), Error);
  }
}

TEST_CASE("induced cluster forest matches the definition after every cut") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t n = 1 + rng() % 256;
    auto p = ref::binary_tree(n, rng);
    auto t = build_forest(p);
    std::size_t k = 1 + rng() % std::max<std::size_t>(1, ceil_log2(n) + 2);
    auto d = std::make_shared<const ClusterDecomposition>(ClusterDecomposition::decompose(t, k));
    InducedClusterForest icf(t, d);
    ref::Model m(p, std::vector<std::int64_t>(n, 0));
    for (Vertex v : ref::live_edges(m, rng)) {
      icf.on_cut(v);
      m.cut(v);
      auto expect = reference_cluster_forest(t, *d, m.parent);
      for (std::size_t s = 0; s < expect.size(); ++s) REQUIRE(icf.live_parent(static_cast<Vertex>(s)) == expect[s]);
    }
  }
}

TEST_CASE("alternative partition examples") {
  std::vector<Vertex> star(10, 0);
  star[0] = kNoVertex;
  auto a = alt_partition(build_forest(star), 3);
  CHECK(a.parts.size() == 1);
  CHECK(a.parts[0].size() == 10);

  auto one = alt_partition(build_forest(std::vector<Vertex>{kNoVertex}), 5);
  CHECK(one.parts.size() == 1);

  auto p = alt_partition(build_forest(ref::path(5)), 2);
  REQUIRE(p.parts.size() == 3);
  CHECK(p.parts[0] == std::vector<Vertex>{0});
  CHECK(p.parts[1] == std::vector<Vertex>{1, 2});
  CHECK(p.parts[2] == std::vector<Vertex>{3, 4});
}

TEST_CASE("alternative partition properties") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t n = 1 + rng() % 200;
    auto p = ref::any_tree(n, rng);
    for (auto& x : p) {
      if (x != kNoVertex && rng() % 9 == 0) x = kNoVertex;
    }
    auto f = build_forest(p);
    std::size_t k = 1 + rng() % 12;
    auto part = alt_partition(f, k);
    std::vector<int> hits(n, 0);
    for (std::size_t i = 0; i < part.parts.size(); ++i) {
      const auto& P = part.parts[i];
      std::set<Vertex> in(P.begin(), P.end());
      Vertex top = P.front();
      for (Vertex v : P) {
        ++hits[static_cast<std::size_t>(v)];
        if (v != top) REQUIRE(in.count(f.parent(v)));
      }
      if (f.parent(top) == kNoVertex && P.size() < k) continue;
      REQUIRE(P.size() >= k);
      // pieces below the top are all smaller than k
      for (Vertex c : f.children(top)) {
        if (!in.count(c)) continue;
        std::size_t sz = 0;
        for (Vertex v : P) sz += f.is_ancestor(c, v) ? 1 : 0;
        REQUIRE(sz < k);
      }
    }
    for (int h : hits) REQUIRE(h == 1);
  }
}
