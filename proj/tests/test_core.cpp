#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "decforest/core/forest.hpp"
#include "decforest/core/group.hpp"
#include "decforest/core/structure.hpp"
#include "decforest/core/trace.hpp"
#include "decforest/oracle/naive.hpp"
#include "decforest/testing/group_equality.hpp"
#include "support.hpp"

using namespace decforest;

namespace {

std::vector<std::uint32_t> pre_of(const RootedForest& f) {
  std::vector<std::uint32_t> out;
  for (std::size_t v = 0; v < f.size(); ++v) out.push_back(f.pre(static_cast<Vertex>(v)));
  return out;
}
std::vector<std::uint32_t> post_of(const RootedForest& f) {
  std::vector<std::uint32_t> out;
  for (std::size_t v = 0; v < f.size(); ++v) out.push_back(f.post(static_cast<Vertex>(v)));
  return out;
}

}  // namespace

TEST_CASE("build_forest numbers a single vertex and a path") {
  auto one = build_forest(std::vector<Vertex>{kNoVertex});
  CHECK(one.size() == 1);
  CHECK(pre_of(one) == std::vector<std::uint32_t>{0});
  CHECK(post_of(one) == std::vector<std::uint32_t>{0});

  auto p = build_forest(std::vector<Vertex>{kNoVertex, 0, 1});
  CHECK(pre_of(p) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(post_of(p) == std::vector<std::uint32_t>{2, 1, 0});
  CHECK(p.children(0).size() == 1);
  CHECK(p.height() == 2);
}

TEST_CASE("build_forest rejects cycles and bad ids") {
  try {
    (void)build_forest(std::vector<Vertex>{1, 0});
    FAIL("expected a cycle error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CycleDetected);
  }
  try {
    (void)build_forest(std::vector<Vertex>{kNoVertex, 7});
    FAIL("expected a range error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
}

TEST_CASE("static ancestor on a path") {
  auto p = build_forest(std::vector<Vertex>{kNoVertex, 0, 1});
  CHECK(is_ancestor_static(p, 0, 2));
  CHECK_FALSE(is_ancestor_static(p, 2, 0));
  CHECK(is_ancestor_static(p, 1, 1));
  CHECK_THROWS_AS((void)is_ancestor_static(p, 0, 3), Error);
}

TEST_CASE("pre/post ancestor agrees with transitive closure") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 1 + rng() % 64;
    auto p = ref::any_tree(n, rng);
    for (auto& x : p) {
      if (x != kNoVertex && rng() % 5 == 0) x = kNoVertex;
    }
    auto f = build_forest(p);
    // closure[u][v]: u reachable from v by parent steps (reflexive)
    std::vector<std::vector<bool>> closure(n, std::vector<bool>(n, false));
    for (std::size_t v = 0; v < n; ++v) {
      for (Vertex x = static_cast<Vertex>(v); x != kNoVertex; x = p[static_cast<std::size_t>(x)]) {
        closure[static_cast<std::size_t>(x)][v] = true;
      }
    }
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        REQUIRE(f.is_ancestor(static_cast<Vertex>(u), static_cast<Vertex>(v)) == closure[u][v]);
      }
    }
  }
}

TEST_CASE("children lists invert the parent relation") {
  std::mt19937_64 rng(3);
  auto p = ref::any_tree(300, rng);
  auto f = build_forest(p);
  std::size_t edges = 0;
  for (std::size_t v = 0; v < f.size(); ++v) {
    for (Vertex c : f.children(static_cast<Vertex>(v))) {
      CHECK(p[static_cast<std::size_t>(c)] == static_cast<Vertex>(v));
      ++edges;
    }
  }
  CHECK(edges == 299);
}

TEST_CASE("split_components and induced_subforest") {
  std::vector<Vertex> p{kNoVertex, 0, 0, kNoVertex, 3, 1};
  auto f = build_forest(p, {false, false, false, false, true, false});
  auto split = split_components(f);
  REQUIRE(split.trees.size() == 2);
  CHECK(split.members[0] == std::vector<Vertex>{0, 1, 5, 2});
  CHECK(split.members[1] == std::vector<Vertex>{3, 4});
  CHECK(split.trees[1].is_aux(1));
  CHECK(split.local[5] == 2);

  std::vector<Vertex> part{1, 5};
  auto sub = induced_subforest(f, part);
  CHECK(sub.size() == 2);
  CHECK(sub.parent(0) == kNoVertex);
  CHECK(sub.parent(1) == 0);
}

namespace {

template <class G, class Make>
void check_axioms(const G& g, Make make) {
  using testing::group_equal;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    auto a = make(rng), b = make(rng), c = make(rng);
    REQUIRE(group_equal<G>(g.add(a, b), g.add(b, a)));
    REQUIRE(group_equal<G>(g.add(g.add(a, b), c), g.add(a, g.add(b, c))));
    REQUIRE(group_equal<G>(g.add(a, g.zero()), a));
    REQUIRE(group_equal<G>(g.sub(a, a), g.zero()));
    REQUIRE(group_equal<G>(g.add(g.sub(a, b), b), a));
  }
}

}  // namespace

TEST_CASE("group axioms on random triples") {
  IntGroup ig;
  check_axioms(ig, [&](std::mt19937_64& r) { return ig.make(static_cast<std::int64_t>(r())); });
  ModGroup mg(1000000007ULL);
  check_axioms(mg, [&](std::mt19937_64& r) { return mg.make(static_cast<std::int64_t>(r() % 4000000000ULL) - 2000000000); });
  VectorGroup vg(5);
  check_axioms(vg, [&](std::mt19937_64& r) {
    VectorGroup::value_type v(5);
    for (auto& x : v) x = static_cast<std::int64_t>(r() % 2001) - 1000;
    return v;
  });
  PlainInt pg;
  check_axioms(pg, [](std::mt19937_64& r) { return static_cast<std::int64_t>(r() % 100000); });
}

namespace {

/// Logs every call it forwards, independently of the instrumented counters.
struct LoggingGroup {
  using value_type = std::int64_t;
  std::shared_ptr<std::vector<char>> log = std::make_shared<std::vector<char>>();
  std::int64_t zero() const { return 0; }
  std::int64_t add(std::int64_t a, std::int64_t b) const {
    log->push_back('+');
    return a + b;
  }
  std::int64_t sub(std::int64_t a, std::int64_t b) const {
    log->push_back('-');
    return a - b;
  }
};

}  // namespace

TEST_CASE("instrumented group counts each forwarded call") {
  LoggingGroup inner;
  InstrumentedGroup<LoggingGroup> g(inner);
  std::mt19937_64 rng(1);
  std::int64_t acc = 0;
  for (int i = 0; i < 500; ++i) {
    auto x = static_cast<std::int64_t>(rng() % 100);
    acc = (rng() & 1) ? g.add(acc, x) : g.sub(acc, x);
  }
  auto c = g.counts();
  auto adds = static_cast<std::uint64_t>(std::count(inner.log->begin(), inner.log->end(), '+'));
  auto subs = static_cast<std::uint64_t>(std::count(inner.log->begin(), inner.log->end(), '-'));
  CHECK(c.adds == adds);
  CHECK(c.subs == subs);
  CHECK(c.total() == 500);

  auto copy = g;
  (void)copy.add(1, 2);
  CHECK(g.counts().adds == adds + 1);
  g.reset_counts();
  CHECK(g.counts().total() == 0);
}

TEST_CASE("instrumented group preserves results") {
  CountingIntGroup g;
  IntGroup plain;
  auto a = plain.make(-17), b = plain.make(40);
  CHECK(g.add(a, b).get() == plain.add(a, b).get());
  CHECK(g.sub(a, b).get() == plain.sub(a, b).get());
}

TEST_CASE("trace text round trip") {
  const char* text =
      "# sample\n"
      "init 3\n"
      "parent 1 0\n"
      "parent 2 1\n"
      "aux 2\n"
      "weight 0 5\n"
      "weight 1 -3\n"
      "\n"
      "tsum 0 2   # expected\n"
      "upd 1 4\n"
      "ssum 1\n"
      "cut 1\n";
  auto t = parse_trace(std::string_view(text));
  CHECK(t.size() == 3);
  CHECK(t.parents == std::vector<Vertex>{kNoVertex, 0, 1});
  CHECK(t.aux[2]);
  CHECK(t.weights == std::vector<std::int64_t>{5, -3, 0});
  REQUIRE(t.ops.size() == 4);
  CHECK(t.ops[0].kind == OpKind::TreeSum);
  CHECK(t.ops[0].expected == 2);
  CHECK(t.ops[1].value == 4);
  CHECK_FALSE(t.ops[2].expected.has_value());

  auto again = parse_trace(std::string_view(format_trace(t)));
  CHECK(again.parents == t.parents);
  CHECK(again.aux == t.aux);
  CHECK(again.weights == t.weights);
  REQUIRE(again.ops.size() == t.ops.size());
  for (std::size_t i = 0; i < t.ops.size(); ++i) {
    CHECK(again.ops[i].kind == t.ops[i].kind);
    CHECK(again.ops[i].v == t.ops[i].v);
    CHECK(again.ops[i].value == t.ops[i].value);
    CHECK(again.ops[i].expected == t.ops[i].expected);
  }
}

TEST_CASE("trace parse errors carry line numbers") {
  try {
    (void)parse_trace(std::string_view("init 2\nparent 1 0\nbogus 3\n"));
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_trace(std::string_view("init 2\nweight 5 1\n")), Error);
  CHECK_THROWS_AS((void)parse_trace(std::string_view("init 2\ncut x\n")), Error);
}

TEST_CASE("replay basics") {
  OperationTrace t;
  t.parents = {kNoVertex, 0, 1};
  t.aux = {false, false, false};
  t.weights = {5, 3, 2};

  NaiveStructure s{NaiveForest(t)};
  auto empty = replay(t, s);
  CHECK(empty.answers.empty());
  CHECK(empty.ok());

  t.ops = {TraceOp::tree_sum(0, 10)};
  auto rep = replay(t, s);
  CHECK(rep.answers == std::vector<std::int64_t>{10});
  CHECK(rep.ok());

  t.ops = {TraceOp::tree_sum(0, 11)};
  rep = replay(t, s);
  REQUIRE(rep.mismatches.size() == 1);
  CHECK(rep.mismatches[0].index == 0);
  CHECK(rep.mismatches[0].got == 10);

  t.ops = {TraceOp::cut(0)};
  try {
    (void)replay(t, s);
    FAIL("expected IllegalOperation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IllegalOperation);
  }

  t.ops = {TraceOp::cut(1), TraceOp::cut(1)};
  NaiveStructure s2{NaiveForest(t)};
  CHECK_THROWS_AS((void)replay(t, s2), Error);
}

TEST_CASE("replay rejects auxiliary arguments") {
  OperationTrace t;
  t.parents = {kNoVertex, 0};
  t.aux = {false, true};
  t.weights = {1, 0};
  t.ops = {TraceOp::tree_sum(1)};
  NaiveStructure s{NaiveForest(t)};
  CHECK_THROWS_AS((void)replay(t, s), Error);
}
