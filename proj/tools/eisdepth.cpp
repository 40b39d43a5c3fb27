// eisdepth: depth of Eisenstein congruences, Eisenstein ideal index and
// local principality for weight-2 modular forms of squarefree level.

#include "CLI11.hpp"
#include "eisdepth/checks.hpp"
#include "eisdepth/heckealg.hpp"
#include "eisdepth/report.hpp"
#include "eisdepth/toyverify.hpp"
#include "json.hpp"

#include <cstdlib>
#include <iostream>

using namespace eis;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitInvariant = 3;

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw CLI::ValidationError("--format must be text, json or csv");
}

std::string default_cache_dir() {
  if (const char* env = std::getenv("EISDEPTH_CACHE_DIR")) return env;
  return "eisdepth-cache";
}

int print_checks(const std::vector<CheckResult>& results, OutputFormat fmt) {
  bool all = true;
  if (fmt == OutputFormat::Json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : results) {
      j.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                   {"seconds", r.seconds}});
      all = all && r.pass;
    }
    nlohmann::json top;
    top["checks"] = j;
    top["all_pass"] = all;
    std::cout << top.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      all = all && r.pass;
      std::printf("[%s] %-55s (%6.2fs)  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                  r.detail.c_str());
    }
    std::printf("%s\n", all ? "all checks passed" : "CHECK FAILURES PRESENT");
  }
  return all ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eisenstein congruence depth for weight-2 forms of squarefree level"};
  app.require_subcommand(1);

  std::string cache_dir = default_cache_dir();
  unsigned long seed = 0;
  int threads = 0;
  app.add_option("--cache-dir", cache_dir, "eigenvalue cache directory (env EISDEPTH_CACHE_DIR)");
  app.add_option("--seed", seed, "seed for the decomposition draws (output is canonical)");
  app.add_option("--threads", threads, "worker threads for the prime scan (0 = all cores)");

  // ---- compute ----
  auto* compute = app.add_subcommand("compute", "congruence table, depth and index for (N, p)");
  long N = 0, prime = 0, bound = 0;
  std::string format = "text";
  bool no_index = false;
  compute->add_option("--level,-N", N, "squarefree level N > 6")->required();
  compute->add_option("--prime,-p", prime, "odd prime p (default: all candidate primes)");
  compute->add_option("--format", format, "text | json | csv");
  compute->add_option("--bound", bound, "override the prime scan bound (default: Sturm bound)");
  compute->add_flag("--no-index", no_index, "skip the Hecke-lattice index computation");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "run the invariant suites (exit 3 on violation)");
  bool full = false;
  std::vector<long> verify_levels = {55, 57, 66};
  int toy_count = 100;
  std::string vformat = "text";
  verify->add_flag("--full", full, "include every published table (minutes, cold cache)");
  verify->add_option("--level", verify_levels, "levels for the property suites");
  verify->add_option("--toy-count", toy_count, "number of random toy instances");
  verify->add_option("--format", vformat, "text | json");

  // ---- cache ----
  auto* cache = app.add_subcommand("cache", "cache maintenance");
  auto* cache_list = cache->add_subcommand("list", "list cached levels");
  auto* cache_clear = cache->add_subcommand("clear", "remove all cache files");
  auto* cache_extend = cache->add_subcommand("extend", "extend the cached prime bound");
  long ext_level = 0, ext_bound = 0;
  cache_extend->add_option("--level", ext_level, "level to extend")->required();
  cache_extend->add_option("--bound", ext_bound, "new prime bound")->required();
  cache->require_subcommand(1);

  // ---- toy ----
  auto* toy = app.add_subcommand("toy", "toy commutative-algebra verifier");
  int toy_n = 10;
  long toy_p = 5;
  unsigned long toy_seed = 1;
  bool toy_hand = false;
  std::string tformat = "text";
  toy->add_option("--count", toy_n, "number of random instances");
  toy->add_option("--prime", toy_p, "p for random instances (5 or 7)");
  toy->add_option("--instance-seed", toy_seed, "seed for the instance generator");
  toy->add_flag("--hand", toy_hand, "run the three worked examples instead");
  toy->add_option("--format", tformat, "text | json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) {
      OutputFormat fmt = parse_format(format);
      try {
        validate_level_prime(N, prime);
      } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
      }
      NewformEngine engine(cache_dir, seed, threads);
      std::vector<long> primes;
      if (prime > 0)
        primes.push_back(prime);
      else
        primes = candidate_primes(N);
      if (primes.empty()) {
        std::cerr << "no candidate primes p >= 3 divide prod(q^2 - 1)\n";
        return kExitComputation;
      }
      bool first = true;
      for (long p : primes) {
        DepthReport rep = build_depth_report(engine, N, p, bound);
        if (!no_index) complete_report(engine, rep, bound);
        if (!first && fmt == OutputFormat::Text) std::cout << "\n";
        std::cout << render_report(rep, fmt);
        first = false;
      }
      return kExitOk;
    }

    if (verify->parsed()) {
      OutputFormat fmt = parse_format(vformat);
      NewformEngine engine(cache_dir, seed, threads);
      std::vector<CheckResult> results;
      for (auto& r : run_property_checks(engine, verify_levels)) results.push_back(r);
      for (auto& r : run_toy_checks(toy_count)) results.push_back(r);
      if (full) {
        for (const TableCase& tc : published_tables()) {
          double budget = tc.N <= 217 ? 60.0 : 900.0;
          results.push_back(check_table_case(engine, tc, /*with_index=*/true, budget));
        }
        for (auto& r : run_prime_level_checks(engine)) results.push_back(r);
      } else {
        for (const TableCase& tc : published_tables()) {
          if (tc.N > 100) continue;
          results.push_back(check_table_case(engine, tc, /*with_index=*/true, 60.0));
        }
      }
      return print_checks(results, fmt);
    }

    if (cache->parsed()) {
      NewformEngine engine(cache_dir, seed, threads);
      if (cache_list->parsed()) {
        auto entries = engine.cache_list();
        std::printf("%-8s %-8s %-10s %s\n", "level", "orbits", "bound", "file");
        for (const auto& e : entries)
          std::printf("%-8ld %-8ld %-10ld %s\n", e.level, e.orbits, e.bound, e.path.c_str());
        return kExitOk;
      }
      if (cache_clear->parsed()) {
        engine.cache_clear();
        return kExitOk;
      }
      if (cache_extend->parsed()) {
        if (ext_level < 1 || !is_squarefree(ext_level)) {
          std::cerr << "usage error: --level must be a squarefree positive integer\n";
          return kExitUsage;
        }
        engine.level(ext_level);
        engine.spot_check(ext_level, 1);
        engine.ensure_eigenvalues(ext_level, ext_bound);
        std::printf("level %ld cached up to %ld\n", ext_level, ext_bound);
        return kExitOk;
      }
    }

    if (toy->parsed()) {
      OutputFormat fmt = parse_format(tformat);
      bool all = true;
      if (toy_hand) {
        for (int k = 0; k < 3; ++k) {
          ToyReport rep = toy_verify(toy_hand_instance(k));
          std::cout << render_toy_report(rep, fmt);
          all = all && rep.all_pass;
        }
      } else {
        for (int k = 0; k < toy_n; ++k) {
          ToyInstance inst = toy_random_instance(toy_p, toy_seed + (unsigned long)k);
          ToyReport rep = toy_verify(inst);
          std::cout << render_toy_report(rep, fmt);
          all = all && rep.all_pass;
        }
      }
      return all ? kExitOk : kExitInvariant;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitUsage;
}
