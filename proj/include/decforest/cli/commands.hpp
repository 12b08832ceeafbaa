#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "decforest/core/structure.hpp"
#include "decforest/oracle/generators.hpp"

namespace decforest::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kUsage = 2;

/// Replays a trace file on a named structure, with the oracle answering
/// alongside. Prints one line per mismatch.
int run(const std::string& trace_path, const std::string& structure, std::ostream& out, std::ostream& err);

struct FuzzOptions {
  /// Instance sizes are drawn from [1, n] and [1, m] per seed.
  std::size_t n = 64;
  std::size_t m = 256;
  std::uint64_t seed_start = 0;
  std::uint64_t seed_count = 1000;
  std::vector<std::string> structures;
  unsigned threads = 1;
};

struct FuzzFinding {
  std::string structure;
  std::uint64_t seed = 0;
  /// Index of the first wrong answer, or of the op that threw.
  std::size_t op = 0;
  std::string what;
};

struct FuzzSummary {
  std::uint64_t runs = 0;
  /// Smallest failing seed per structure, in the order given.
  std::vector<FuzzFinding> findings;
};

/// The trace fuzzing uses for one structure and seed.
OperationTrace fuzz_trace(const FuzzOptions& opts, const std::string& structure, std::uint64_t seed);
FuzzSummary fuzz(const FuzzOptions& opts);
int fuzz_command(const FuzzOptions& opts, std::ostream& out);

struct BenchOptions {
  /// teardown, mixed, spine or parity.
  std::string suite = "teardown";
  std::vector<std::size_t> sizes;
  /// Empty picks simple for teardown and mixed, subtree for spine and parity.
  std::string structure;
  std::uint64_t seed = 1;
  Shape shape = Shape::Balanced;
};

struct BenchRecord {
  std::string structure;
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::string shape;
  std::uint64_t wall_ns = 0;
  std::uint64_t group_adds = 0;
  std::uint64_t group_subs = 0;
  std::uint64_t probes = 0;
};

inline constexpr const char* kBenchHeader = "structure,n,m,seed,shape,wall_ns,group_adds,group_subs,probes";

/// The trace one bench row replays.
OperationTrace bench_trace(const BenchOptions& opts, std::size_t size, std::string& shape);
std::vector<BenchRecord> bench(const BenchOptions& opts);
void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows);

/// "1024" or "2^10".
std::optional<std::size_t> parse_size(const std::string& token);

/// `which` is size:<ell> or q:<k>.
int build_tables(const std::string& which, const std::string& out_path, std::ostream& out, std::ostream& err);

/// Every forest on n labeled vertices (parent arrays without cycles).
std::vector<std::vector<Vertex>> all_forests(std::size_t n);

/// OPT(F, m) for every forest on n vertices; optional OPT table files.
int search_opt(std::size_t n, std::size_t m, std::size_t d, const std::string& out_path, std::ostream& out,
               std::ostream& err);

}  // namespace decforest::cli
