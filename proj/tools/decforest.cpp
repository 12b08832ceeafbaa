#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "decforest/cli/commands.hpp"
#include "decforest/core/error.hpp"
#include "decforest/registry/registry.hpp"

using namespace decforest;

int main(int argc, char** argv) {
  CLI::App app{"Decremental forest structures: replay, fuzz, benchmark, tables"};
  app.require_subcommand(1);

  std::string trace_path;
  std::string structure = "simple";
  auto* run = app.add_subcommand("run", "Replay a trace file against a structure and the oracle");
  run->add_option("trace", trace_path, "Trace file")->required()->check(CLI::ExistingFile);
  run->add_option("-s,--structure", structure, "simple | iterated:<t> | linear01 | subtree | universal | oracle");

  cli::FuzzOptions fz;
  fz.threads = std::max(1u, std::thread::hardware_concurrency());
  auto* fuzz = app.add_subcommand("fuzz", "Random traces against the oracle");
  fuzz->add_option("--n", fz.n, "Largest forest size")->check(CLI::PositiveNumber);
  fuzz->add_option("--m", fz.m, "Largest trace length")->check(CLI::PositiveNumber);
  fuzz->add_option("--seed-start", fz.seed_start, "First seed");
  fuzz->add_option("--seeds", fz.seed_count, "Number of seeds");
  fuzz->add_option("--structures", fz.structures, "Structures to test")->delimiter(',')->required();
  fuzz->add_option("--threads", fz.threads, "Worker threads")->check(CLI::PositiveNumber);

  cli::BenchOptions bo;
  std::vector<std::string> sizes;
  std::string shape = "balanced";
  std::string csv_path;
  auto* bench = app.add_subcommand("bench", "Benchmark a suite and print CSV");
  bench->add_option("--suite", bo.suite, "teardown | mixed | spine | parity")
      ->check(CLI::IsMember({"teardown", "mixed", "spine", "parity"}));
  bench->add_option("--sizes", sizes, "Sizes, e.g. 2^10,2^11 (n' for spine and parity)")->delimiter(',')->required();
  bench->add_option("--structure", bo.structure, "Structure (default depends on the suite)");
  bench->add_option("--seed", bo.seed, "Seed");
  bench->add_option("--shape", shape, "uniform | path | star | caterpillar | balanced");
  bench->add_option("--out", csv_path, "CSV file (default stdout)");

  std::string which;
  std::string table_out;
  auto* tables = app.add_subcommand("build-tables", "Build and save a lookup table");
  tables->add_option("--which", which, "size:<ell> or q:<k>")->required();
  tables->add_option("--out", table_out, "Output file")->required();

  std::size_t sn = 2, sm = 1, sd = 4;
  std::string opt_out;
  auto* search = app.add_subcommand("search-opt", "Optimal computation trees for every forest on n vertices");
  search->add_option("--n", sn, "Vertices");
  search->add_option("--m", sm, "Operations");
  search->add_option("--d", sd, "Instruction depth bound");
  search->add_option("--out", opt_out, "OPT table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*run) return cli::run(trace_path, structure, std::cout, std::cerr);
    if (*fuzz) return cli::fuzz_command(fz, std::cout);
    if (*bench) {
      for (const std::string& s : sizes) {
        auto v = cli::parse_size(s);
        if (!v) {
          std::cerr << "bad size '" << s << "'\n";
          return cli::kUsage;
        }
        bo.sizes.push_back(*v);
      }
      auto sh = parse_shape(shape);
      if (!sh) {
        std::cerr << "unknown shape '" << shape << "'\n";
        return cli::kUsage;
      }
      bo.shape = *sh;
      auto rows = cli::bench(bo);
      if (csv_path.empty()) {
        cli::write_csv(std::cout, rows);
      } else {
        std::ofstream out(csv_path);
        cli::write_csv(out, rows);
      }
      return cli::kOk;
    }
    if (*tables) return cli::build_tables(which, table_out, std::cout, std::cerr);
    if (*search) return cli::search_opt(sn, sm, sd, opt_out, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return cli::kUsage;
  }
  return cli::kUsage;
}
