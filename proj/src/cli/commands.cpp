#include "decforest/cli/commands.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "decforest/core/probe.hpp"
#include "decforest/optimal/search.hpp"
#include "decforest/oracle/naive.hpp"
#include "decforest/registry/registry.hpp"
#include "decforest/subtree/subtree.hpp"
#include "decforest/tree_size/table.hpp"
#include "decforest/workloads/workloads.hpp"

namespace decforest::cli {

int run(const std::string& trace_path, const std::string& structure, std::ostream& out, std::ostream& err) {
  OperationTrace t;
  std::unique_ptr<ForestStructure> s;
  try {
    t = load_trace(trace_path);
    s = make_structure(structure, t);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  NaiveStructure oracle{NaiveForest(t)};
  ReplayOptions opts;
  opts.reference = &oracle;
  ReplayReport rep;
  try {
    rep = replay(t, *s, opts);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  for (const Mismatch& m : rep.mismatches) {
    out << "mismatch at op " << m.index << ": " << op_kind_name(m.kind) << ' ' << m.v << " got " << m.got
        << (m.against_reference ? " oracle " : " expected ") << m.expected << '\n';
  }
  out << structure << ": " << t.ops.size() << " ops, " << rep.mismatches.size() << " mismatches\n";
  return rep.ok() ? kOk : kMismatch;
}

OperationTrace fuzz_trace(const FuzzOptions& opts, const std::string& structure, std::uint64_t seed) {
  static constexpr Shape kShapes[] = {Shape::UniformAttachment, Shape::Path, Shape::Star, Shape::Caterpillar,
                                      Shape::Balanced};
  const StructureTraits tr = structure_traits(structure);
  Rng rng(seed);
  const std::size_t n = 1 + rng.below(std::max<std::size_t>(opts.n, 1));
  const std::size_t m = 1 + rng.below(std::max<std::size_t>(opts.m, 1));
  return gen_random_instance(n, m, kShapes[seed % 5], default_mix(tr), rng.next(), default_range(tr));
}

namespace {

std::optional<FuzzFinding> fuzz_one(const FuzzOptions& opts, const std::string& name, std::uint64_t seed) {
  OperationTrace t = fuzz_trace(opts, name, seed);
  try {
    auto s = make_structure(name, t);
    ReplayOptions ro;
    ro.stop_on_mismatch = true;
    ReplayReport rep = replay(t, *s, ro);
    if (rep.ok()) return std::nullopt;
    const Mismatch& m = rep.mismatches.front();
    return FuzzFinding{name, seed, m.index,
                       std::string(op_kind_name(m.kind)) + ' ' + std::to_string(m.v) + " got " + std::to_string(m.got) +
                           " expected " + std::to_string(m.expected)};
  } catch (const std::exception& e) {
    return FuzzFinding{name, seed, t.ops.size(), e.what()};
  }
}

}  // namespace

FuzzSummary fuzz(const FuzzOptions& opts) {
  for (const std::string& name : opts.structures) (void)structure_traits(name);
  const std::size_t k = opts.structures.size();
  std::vector<std::optional<FuzzFinding>> best(k);
  std::mutex mu;
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> runs{0};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= opts.seed_count) return;
      const std::uint64_t seed = opts.seed_start + i;
      for (std::size_t j = 0; j < k; ++j) {
        {
          std::lock_guard lock(mu);
          if (best[j] && best[j]->seed < seed) continue;
        }
        auto f = fuzz_one(opts, opts.structures[j], seed);
        runs.fetch_add(1);
        if (!f) continue;
        std::lock_guard lock(mu);
        if (!best[j] || f->seed < best[j]->seed) best[j] = std::move(f);
      }
    }
  };
  const unsigned threads = std::max(1u, opts.threads);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  FuzzSummary sum;
  sum.runs = runs.load();
  for (auto& f : best) {
    if (f) sum.findings.push_back(std::move(*f));
  }
  return sum;
}

int fuzz_command(const FuzzOptions& opts, std::ostream& out) {
  FuzzSummary sum = fuzz(opts);
  for (const FuzzFinding& f : sum.findings) {
    out << f.structure << ": divergence at seed " << f.seed << ", op " << f.op << ": " << f.what << '\n';
    out << "  reproduce: decforest fuzz --n " << opts.n << " --m " << opts.m << " --seed-start " << f.seed
        << " --seeds 1 --structures " << f.structure << '\n';
  }
  out << sum.runs << " runs, " << sum.findings.size() << " divergent structures\n";
  return sum.findings.empty() ? kOk : kMismatch;
}

OperationTrace bench_trace(const BenchOptions& opts, std::size_t size, std::string& shape) {
  const std::string name = opts.structure;
  const StructureTraits tr = structure_traits(name);
  if (opts.suite == "spine") {
    shape = "spine";
    return spine_trace(size, opts.seed, tr.binary);
  }
  if (opts.suite == "parity") {
    shape = "parity";
    return parity_trace(size, size, opts.seed);
  }
  shape = std::string(shape_name(opts.shape));
  ValueRange range = default_range(tr);
  if (opts.suite == "teardown") {
    auto parents = gen_random_parents(size, opts.seed, opts.shape);
    auto w = gen_weights(size, opts.seed + 1, range);
    return gen_teardown(std::move(parents), std::move(w), opts.seed + 2, !tr.tree_sum, false);
  }
  if (opts.suite == "mixed") return gen_random_instance(size, 2 * size, opts.shape, default_mix(tr), opts.seed, range);
  throw Error(ErrorKind::IllegalOperation, "unknown suite '" + opts.suite + "'");
}

std::vector<BenchRecord> bench(const BenchOptions& in) {
  BenchOptions opts = in;
  if (opts.structure.empty()) opts.structure = opts.suite == "spine" || opts.suite == "parity" ? "subtree" : "simple";
  std::vector<BenchRecord> rows;
  for (std::size_t size : opts.sizes) {
    BenchRecord r;
    OperationTrace t = bench_trace(opts, size, r.shape);
    auto s = make_structure(opts.structure, t);
    probe::reset();
    const auto start = std::chrono::steady_clock::now();
    ReplayReport rep = replay(t, *s);
    const auto stop = std::chrono::steady_clock::now();
    if (!rep.ok()) throw Error(ErrorKind::InvariantBroken, opts.structure + " answered a bench query wrongly");
    r.structure = opts.structure;
    r.n = t.size();
    r.m = t.ops.size();
    r.seed = opts.seed;
    r.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    r.group_adds = rep.totals.adds;
    r.group_subs = rep.totals.subs;
    r.probes = rep.totals.probes;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  out << kBenchHeader << '\n';
  for (const BenchRecord& r : rows) {
    out << r.structure << ',' << r.n << ',' << r.m << ',' << r.seed << ',' << r.shape << ',' << r.wall_ns << ','
        << r.group_adds << ',' << r.group_subs << ',' << r.probes << '\n';
  }
}

namespace {

template <class T>
std::optional<T> parse_uint(std::string_view s) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::optional<std::size_t> parse_size(const std::string& token) {
  if (token.rfind("2^", 0) == 0) {
    auto e = parse_uint<unsigned>(std::string_view(token).substr(2));
    if (!e || *e >= 8 * sizeof(std::size_t)) return std::nullopt;
    return std::size_t{1} << *e;
  }
  return parse_uint<std::size_t>(token);
}

int build_tables(const std::string& which, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const auto colon = which.find(':');
  const std::string kind = which.substr(0, colon);
  const auto arg = colon == std::string::npos ? std::nullopt : parse_uint<unsigned>(std::string_view(which).substr(colon + 1));
  if (!arg || (kind != "size" && kind != "q")) {
    err << "--which expects size:<ell> or q:<k>, got '" << which << "'\n";
    return kUsage;
  }
  try {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "cannot write " << out_path << '\n';
      return kUsage;
    }
    if (kind == "size") {
      auto t = GlobalSizeTable::build(*arg);
      t.save(file);
      out << "size table ell=" << *arg << ": " << t.code_count() << " code slots, " << t.valid_count()
          << " valid, written to " << out_path << '\n';
    } else {
      auto t = QTable::build(*arg);
      t.save(file);
      out << "Q table k=" << *arg << ": " << t.size() << " entries, written to " << out_path << '\n';
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

std::vector<std::vector<Vertex>> all_forests(std::size_t n) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> p(n, kNoVertex);
  auto acyclic = [&] {
    for (std::size_t v = 0; v < n; ++v) {
      Vertex x = static_cast<Vertex>(v);
      for (std::size_t steps = 0; x != kNoVertex; ++steps) {
        if (steps > n) return false;
        x = p[static_cast<std::size_t>(x)];
      }
    }
    return true;
  };
  // Odometer over parent choices {-1, 0, ..., n-1} minus self loops.
  for (;;) {
    if (acyclic()) out.push_back(p);
    std::size_t i = 0;
    for (; i < n; ++i) {
      Vertex& x = p[i];
      do {
        ++x;
      } while (x == static_cast<Vertex>(i));
      if (x < static_cast<Vertex>(n)) break;
      x = kNoVertex;
    }
    if (i == n) break;
  }
  return out;
}

int search_opt(std::size_t n, std::size_t m, std::size_t d, const std::string& out_path, std::ostream& out,
               std::ostream& err) {
  SearchCaps caps;
  if (n > caps.max_n || m > caps.max_m || d > caps.max_d || n == 0 || m == 0) {
    err << "search-opt supports 1 <= n <= " << caps.max_n << ", 1 <= m <= " << caps.max_m << ", d <= " << caps.max_d
        << '\n';
    return kUsage;
  }
  caps.max_d = d;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "cannot write " << out_path << '\n';
      return kUsage;
    }
  }
  for (const auto& parents : all_forests(n)) {
    const RootedForest f = RootedForest::build(parents);
    OptTable t = OptTable::compute(f, m, caps);
    out << forest_fingerprint(f) << ' ';
    if (t.max_m() >= m) {
      out << "mid " << t.at(m).mid << '\n';
    } else {
      out << "none within d=" << d << '\n';
    }
    if (file.is_open()) t.write(file);
  }
  return kOk;
}

}  // namespace decforest::cli
