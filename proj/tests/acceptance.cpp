// Acceptance checks: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "decforest/cli/commands.hpp"
#include "decforest/clustering/decomposition.hpp"
#include "decforest/core/probe.hpp"
#include "decforest/oracle/naive.hpp"
#include "decforest/subtree/subtree.hpp"
#include "decforest/tree_size/linear.hpp"
#include "decforest/workloads/workloads.hpp"
#include "optimal_support.hpp"

using namespace decforest;
using namespace optref;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<IntValue> ints(const std::vector<std::int64_t>& w) {
  std::vector<IntValue> out;
  for (auto x : w) out.emplace_back(x);
  return out;
}

double log2d(double x) { return std::log2(x); }

// 1 -------------------------------------------------------------------------
Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  cli::FuzzOptions fo;
  fo.n = 128;
  fo.m = 512;
  fo.seed_count = 10000;
  fo.structures = {"simple", "iterated:1", "iterated:2", "iterated:3", "iterated:4", "linear01", "subtree", "universal"};
  fo.threads = std::max(1u, std::thread::hardware_concurrency());
  auto sum = cli::fuzz(fo);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = sum.findings.empty() && sum.runs == fo.seed_count * fo.structures.size() && secs < 300.0;
  o.detail = fmt("%llu traces over %zu structures, %zu divergent, %.1f s", static_cast<unsigned long long>(sum.runs),
                 fo.structures.size(), sum.findings.size(), secs);
  for (const auto& f : sum.findings) o.detail += "; " + f.structure + " seed " + std::to_string(f.seed);
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome exact_counting() {
  Outcome o;
  std::mt19937_64 rng(2);
  std::size_t checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng() % 128;
    auto p = ref::any_tree(n, rng);
    CountingIntGroup g;
    SimpleTreeSum<CountingIntGroup> s(RootedForest::build(p), ints(ref::weights(n, rng, -100, 100)), g);
    for (int i = 0; i < 50; ++i) {
      const auto v = static_cast<Vertex>(rng() % n);
      g.reset_counts();
      (void)s.tree_sum(v);
      if (g.counts().total() != 0) o.pass = false;
      g.reset_counts();
      s.update_weight(v, IntValue(static_cast<std::int64_t>(rng() % 100)));
      if (g.counts().total() != 2) o.pass = false;
      checked += 2;
    }
  }
  std::string ratios;
  for (unsigned e = 10; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    std::vector<Vertex> p(n, kNoVertex);
    for (std::size_t i = 1; i < n; ++i) p[i] = static_cast<Vertex>((i - 1) / 2);
    CountingIntGroup g;
    SimpleTreeSum<CountingIntGroup> s(RootedForest::build(p), ints(std::vector<std::int64_t>(n, 1)), g);
    g.reset_counts();
    ref::Model m(p, std::vector<std::int64_t>(n, 0));
    for (Vertex v : ref::live_edges(m, rng)) s.cut(v);
    const double bound = 2.0 * static_cast<double>(n) * log2d(static_cast<double>(n));
    const double used = static_cast<double>(g.counts().total());
    if (used > bound) o.pass = false;
    ratios += fmt(" %.2f", used / bound);
  }
  o.detail = fmt("%zu single-op counts exact; teardown ops / (2 n log n) at 2^10..2^14:", checked) + ratios;
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome cluster_bounds() {
  Outcome o;
  std::mt19937_64 rng(3);
  double worst = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng() % 2048;
    auto t = RootedForest::build(ref::binary_tree(n, rng));
    for (std::size_t k : {std::size_t{2}, std::max<std::size_t>(1, ceil_log2(n)), n}) {
      auto d = ClusterDecomposition::decompose(t, k);
      std::size_t biggest = 0;
      for (const Cluster& c : d.clusters()) biggest = std::max(biggest, c.members.size());
      if (d.clusters().size() * k > 6 * n || biggest > k) o.pass = false;
      worst = std::max(worst, static_cast<double>(d.clusters().size() * k) / static_cast<double>(n));
    }
  }
  o.detail = fmt("1000 trees x 3 values of k; max |clusters| k / n = %.2f (bound 6)", worst);
  return o;
}

// 4, 5 ----------------------------------------------------------------------
Outcome linear_ratio() {
  Outcome o;
  double prev = 0;
  for (unsigned e = 10; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    auto p = gen_random_parents(n, 7, Shape::UniformAttachment);
    auto w = gen_weights(n, 7, ValueRange{0, 1, true});
    (void)shared_size_table(Linear01TreeSize::default_ell(n));
    auto t = gen_teardown(p, w, 9, false, false);
    probe::reset();
    Linear01TreeSize s(RootedForest::build(p), w);
    for (const TraceOp& op : t.ops) {
      if (op.kind == OpKind::Cut) {
        s.cut(op.v);
      } else {
        (void)s.tree_sum(op.v);
      }
    }
    const auto probes = static_cast<double>(probe::read());
    if (prev > 0) {
      const double r = probes / prev;
      if (r < 1.5 || r > 2.5) o.pass = false;
      o.detail += fmt("%s%.3f", o.detail.empty() ? "doubling ratios " : ", ", r);
    }
    prev = probes;
  }
  return o;
}

Outcome subtree_growth() {
  Outcome o;
  double prev = 0;
  double prev_curve = 0;
  for (unsigned e = 10; e <= 14; ++e) {
    const std::size_t n = std::size_t{1} << e;
    std::mt19937_64 rng(e);
    auto p = ref::any_tree(n, rng);
    auto w = ref::weights(n, rng, 0, 1);
    ref::Model m(p, w);
    auto cuts = ref::live_edges(m, rng);
    probe::reset();
    SubtreeSum01 s(RootedForest::build(p), w);
    for (Vertex v : cuts) s.cut(v);
    for (std::size_t i = 0; i < n; ++i) (void)s.subtree_sum(static_cast<Vertex>(rng() % n));
    const auto probes = static_cast<double>(probe::read());
    const double ops = static_cast<double>(cuts.size() + n);
    const double nd = static_cast<double>(n);
    const double curve = (nd + ops) * log2d(nd) / log2d(log2d(nd));
    if (prev > 0) {
      const double rel = (probes / prev) / (curve / prev_curve);
      if (rel < 0.7 || rel > 1.3) o.pass = false;
      o.detail += fmt("%s%.3f", o.detail.empty() ? "ratio / curve ratio " : ", ", rel);
    }
    prev = probes;
    prev_curve = curve;
  }
  return o;
}

// 6 -------------------------------------------------------------------------
struct Decoded {
  bool ok = true;
  std::vector<Vertex> parent;
  std::vector<std::int64_t> w;
};

/// Field v: ceil(log2(ell+1)) parent bits (0 = root, else parent+1), then the weight bit.
Decoded decode(unsigned ell, std::uint64_t code) {
  unsigned p = 0;
  while ((1u << p) < ell + 1) ++p;
  Decoded d;
  for (unsigned v = 0; v < ell; ++v) {
    const std::uint64_t field = (code >> (v * (p + 1))) & ((1u << (p + 1)) - 1);
    const std::uint64_t par = field & ((1u << p) - 1);
    d.w.push_back(static_cast<std::int64_t>(field >> p));
    if (par > ell || par == v + 1) d.ok = false;
    d.parent.push_back(par == 0 ? kNoVertex : static_cast<Vertex>(par - 1));
  }
  for (unsigned v = 0; v < ell && d.ok; ++v) {
    Vertex x = static_cast<Vertex>(v);
    for (unsigned steps = 0; d.parent[static_cast<std::size_t>(x)] != kNoVertex && d.ok; ++steps) {
      x = d.parent[static_cast<std::size_t>(x)];
      d.ok = steps <= ell;
    }
  }
  return d;
}

std::uint64_t encode(unsigned ell, const std::vector<Vertex>& parent, const std::vector<std::int64_t>& w) {
  unsigned p = 0;
  while ((1u << p) < ell + 1) ++p;
  std::uint64_t code = 0;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    const std::uint64_t field = (parent[v] == kNoVertex ? 0 : static_cast<std::uint64_t>(parent[v]) + 1) |
                                (static_cast<std::uint64_t>(w[v]) << p);
    code |= field << (v * (p + 1));
  }
  return code;
}

Outcome micro_tables() {
  Outcome o;
  std::size_t checks = 0;
  for (unsigned ell = 1; ell <= 4; ++ell) {
    auto t = GlobalSizeTable::build(ell);
    for (std::uint64_t code = 0; code < t.code_count(); ++code) {
      Decoded d = decode(ell, code);
      if (t.valid(code) != d.ok) o.pass = false;
      if (!d.ok) continue;
      ref::Model m(d.parent, d.w);
      for (unsigned v = 0; v < ell; ++v) {
        ++checks;
        if (t.tree_sum(code, v) != static_cast<std::uint32_t>(m.tree_sum(static_cast<Vertex>(v)))) o.pass = false;
        for (unsigned bit : {0u, 1u}) {
          auto w2 = d.w;
          w2[v] = bit;
          if (t.update(code, v, bit) != encode(ell, d.parent, w2)) o.pass = false;
        }
        if (d.parent[v] != kNoVertex) {
          auto p2 = d.parent;
          p2[v] = kNoVertex;
          if (t.cut(code, v) != encode(ell, p2, d.w)) o.pass = false;
        }
      }
    }
  }
  std::size_t q_entries = 0;
  for (unsigned k : {1u, 2u, 4u}) {
    auto q = QTable::build(k);
    std::size_t codes = 1;
    for (unsigned i = 0; i < k; ++i) codes *= k + 1;
    if (q.size() != (codes << k)) o.pass = false;
    for (std::size_t code = 0; code < codes; ++code) {
      std::vector<unsigned> digit;
      for (std::size_t c = code, i = 0; i < k; ++i, c /= k + 1) digit.push_back(static_cast<unsigned>(c % (k + 1)));
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        unsigned s = 0;
        for (unsigned i = 0; i < k; ++i) s += (mask >> i & 1u) ? digit[i] : 0;
        ++q_entries;
        if (q.at(code, mask) != s) o.pass = false;
      }
    }
  }
  o.detail = fmt("%zu (code, vertex) cases for ell <= 4, %zu Q entries for k in {1,2,4}", checks, q_entries);
  return o;
}

// 7 -------------------------------------------------------------------------
Outcome optimal_trees() {
  Outcome o;
  const auto single = search_optimal(forest({kNoVertex}), 1, 4);
  const auto path2 = search_optimal(forest({kNoVertex, 0}), 1, 4);
  const auto isolated = search_optimal(forest({kNoVertex, kNoVertex}), 1, 4);
  o.pass = single && single->mid == 0 && path2 && path2->mid == 1 && isolated && isolated->mid == 0;
  o.pass = o.pass && brute_mid({kNoVertex}, 1, 3) == 0 && brute_mid({kNoVertex, 0}, 1, 3) == 1 &&
           brute_mid({kNoVertex, kNoVertex}, 1, 3) == 0;

  // Mutants of correct witnesses.
  std::vector<ComputationTree> witnesses{
      structure_to_tree(simple_factory<RecordingGroup>(), forest({kNoVertex, 0}), 2),
      structure_to_tree(simple_factory<RecordingGroup>(), forest({kNoVertex, 0, 1}), 2),
      *search_optimal(forest({kNoVertex, 0, 0}), 2, 4)->witness, *search_optimal(forest({kNoVertex, 0, 1}), 2, 4)->witness};
  std::size_t non_equivalent = 0;
  std::size_t killed = 0;
  for (const auto& w : witnesses) {
    if (!check_correct(w, w.forest(), w.height())) o.pass = false;
    const auto base = fingerprint_outputs(w, 99);
    for (std::size_t x = 0; x < w.node_count(); ++x) {
      std::vector<Operand> choices;
      for (std::size_t j = 1; j <= w.instruction_depth(static_cast<std::int32_t>(x)); ++j) {
        choices.push_back(Operand::reg(static_cast<std::int32_t>(j)));
      }
      for (Vertex v = 0; v < static_cast<Vertex>(w.forest().size()); ++v) choices.push_back(Operand::weight(v));
      const std::size_t slots = 2 * w.node(x).code.size() + (w.node(x).ret ? 1 : 0);
      for (std::size_t slot = 0; slot < slots; ++slot) {
        for (const Operand& op : choices) {
          ComputationTree mu = w;
          CtNode& node = mu.node(x);
          Operand& t = slot / 2 < node.code.size() ? (slot % 2 ? node.code[slot / 2].b : node.code[slot / 2].a) : *node.ret;
          if (t == op) continue;
          t = op;
          if (fingerprint_outputs(mu, 99) == base) continue;
          ++non_equivalent;
          killed += check_correct(mu, mu.forest(), mu.height()) ? 0 : 1;
        }
      }
    }
  }
  const double kill = static_cast<double>(killed) / static_cast<double>(std::max<std::size_t>(1, non_equivalent));
  if (kill < 0.95) o.pass = false;

  // Adaptive wrapper on every 2-path trace with m <= 3.
  auto p2 = forest({kNoVertex, 0});
  SearchCaps caps{3, 3, 4};
  auto table = std::make_shared<const OptTable>(OptTable::compute(p2, 3, caps));
  std::size_t traces = 0;
  double worst = 0;
  std::vector<std::vector<TreeOp>> frontier{{}};
  IntGroup plain;
  for (std::size_t m = 1; m <= 3 && table->max_m() == 3; ++m) {
    std::vector<std::vector<TreeOp>> next;
    for (const auto& prefix : frontier) {
      bool cut = false;
      for (auto op : prefix) cut = cut || op.kind == OpKind::Cut;
      for (TreeOp op : ComputationTree::allowed_ops(p2, {false, cut})) {
        next.push_back(prefix);
        next.back().push_back(op);
      }
    }
    frontier = std::move(next);
    for (const auto& seq : frontier) {
      CountingIntGroup g;
      AdaptiveTreeSum<CountingIntGroup> a(p2, {plain.make(5), plain.make(7)}, g, table);
      ref::Model model({kNoVertex, 0}, {5, 7});
      std::int64_t val = 100;
      for (TreeOp op : seq) {
        if (op.kind == OpKind::Cut) {
          a.cut(op.v);
          model.cut(op.v);
        } else if (op.kind == OpKind::Update) {
          a.update_weight(op.v, plain.make(++val));
          model.w[static_cast<std::size_t>(op.v)] = val;
        } else if (a.tree_sum(op.v).get() != model.tree_sum(op.v)) {
          o.pass = false;
        }
      }
      const double bound = 4.0 * static_cast<double>(table->at(m).mid + 2 + m);
      worst = std::max(worst, static_cast<double>(g.counts().total()) / bound);
      ++traces;
    }
  }
  if (traces != 141 || worst > 1.0) o.pass = false;
  o.detail = fmt("MIDs 0/1/0 (search and brute force); %zu/%zu mutants killed (%.1f%%); %zu adaptive traces, max ops / bound %.2f",
                 killed, non_equivalent, 100.0 * kill, traces, worst);
  return o;
}

// 8 -------------------------------------------------------------------------
std::vector<std::int64_t> subtree_sums(const ref::Model& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> depth(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex x = m.parent[v]; x != kNoVertex; x = m.parent[static_cast<std::size_t>(x)]) ++depth[v];
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return depth[a] > depth[b]; });
  std::vector<std::int64_t> s = m.w;
  for (std::size_t v : order) {
    if (m.parent[v] != kNoVertex) s[static_cast<std::size_t>(m.parent[v])] += s[v];
  }
  return s;
}

Outcome spine_workload() {
  Outcome o;
  std::size_t checks = 0;
  for (std::size_t np : {2, 4, 8, 16}) {
    std::mt19937_64 gen(np);
    std::vector<std::int64_t> A(np);
    for (auto& a : A) a = static_cast<std::int64_t>(gen() % np);
    auto inst = build_spine(np, A);
    ref::Model m(inst.parents(), inst.weights());
    const auto n = static_cast<std::int64_t>(np);
    auto initial = subtree_sums(m);
    for (std::size_t k = 1; k <= np; ++k) {
      const auto kk = static_cast<std::int64_t>(k);
      if (initial[static_cast<std::size_t>(inst.v_plus(k))] != 4 * kk * n * (8 * n + 1)) o.pass = false;
      if (initial[static_cast<std::size_t>(inst.v_minus(k))] != kk * n) o.pass = false;
    }
    Rng rng(np);
    for (std::size_t p = 1; p <= np; ++p) {
      for (std::size_t i = 1; i <= np; ++i) {
        for (const TraceOp& op : translate_update(inst, p, i, static_cast<std::int64_t>(gen() % np), rng).cuts) m.cut(op.v);
        auto s = subtree_sums(m);
        std::int64_t prefix = 0;
        for (std::size_t k = 1; k <= np; ++k) {
          prefix += inst.A()[k - 1];
          const auto rhs = s[static_cast<std::size_t>(inst.v_plus(k))] -
                           7 * n * s[static_cast<std::size_t>(inst.v_minus(k))] + inst.B()[k - 1];
          if (rhs != prefix) o.pass = false;
          ++checks;
        }
      }
    }
  }
  o.detail = fmt("n' in {2,4,8,16}, n' full epochs: %zu prefix identities after translated updates, closed forms exact", checks);
  return o;
}

// 9 -------------------------------------------------------------------------
Outcome parity_workload() {
  Outcome o;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    std::mt19937_64 gen(seed);
    const std::size_t np = 1 + gen() % 64;
    std::vector<std::uint8_t> A(np);
    for (auto& a : A) a = static_cast<std::uint8_t>(gen() % 2);
    auto inst = build_parity(A);
    ref::Model m(inst.parents(), inst.prologue().weights);
    std::vector<std::size_t> order(np);
    for (std::size_t i = 0; i < np; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), gen);
    order.resize(gen() % (np + 1));
    auto check = [&] {
      auto s = subtree_sums(m);
      int direct = 0;
      for (std::size_t k = 1; k <= np; ++k) {
        direct ^= inst.A()[k - 1];
        if (s[static_cast<std::size_t>(inst.v(k))] % 2 != direct) o.pass = false;
        ++checks;
      }
    };
    check();
    for (std::size_t i : order) {
      m.cut(inst.flip(i).v);
      check();
    }
  }
  o.detail = fmt("1000 runs, n' <= 64: %zu prefix parities match", checks);
  return o;
}

// 10 ------------------------------------------------------------------------
Outcome cli_end_to_end() {
  Outcome o;
  cli::FuzzOptions fo;
  fo.n = 64;
  fo.m = 256;
  fo.seed_count = 1000;
  fo.structures = {"faulty-simple"};
  auto sum = cli::fuzz(fo);
  const bool found = sum.findings.size() == 1 && sum.findings[0].seed < 1000;
  if (!found) o.pass = false;

  std::size_t ran = 0;
  const auto dir = std::filesystem::temp_directory_path();
  for (const std::string& name : {"simple", "iterated:1", "iterated:2", "iterated:3", "iterated:4", "linear01", "subtree",
                                  "universal", "oracle"}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      cli::FuzzOptions g;
      g.n = 100;
      g.m = 300;
      const auto path = dir / ("decforest_acceptance_" + std::to_string(seed) + ".trace");
      std::ofstream(path) << format_trace(cli::fuzz_trace(g, name, seed));
      std::ostringstream out, err;
      if (cli::run(path.string(), name, out, err) != cli::kOk) {
        o.pass = false;
        o.detail += name + " failed; ";
      }
      std::filesystem::remove(path);
      ++ran;
    }
  }
  o.detail += found ? fmt("fixture caught at seed %llu; ", static_cast<unsigned long long>(sum.findings[0].seed))
                    : std::string("fixture not caught; ");
  o.detail += fmt("run exited 0 on %zu annotated traces", ran);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"exact group-op counting", exact_counting},
      {"cluster decomposition bounds", cluster_bounds},
      {"linear probe growth", linear_ratio},
      {"subtree-size probe growth", subtree_growth},
      {"micro-table exhaustiveness", micro_tables},
      {"optimal computation trees", optimal_trees},
      {"spine workload invariant", spine_workload},
      {"parity workload invariant", parity_workload},
      {"CLI end to end", cli_end_to_end},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %2zu %-30s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
