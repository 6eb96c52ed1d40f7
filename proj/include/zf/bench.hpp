#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "zf/graph.hpp"
#include "zf/models.hpp"
#include "zf/outcome.hpp"

namespace zf::bench {

/// One solver invocation. Method names: wavefront, brute, brute-connected,
/// bnb, infection, fort-cover, extended, bounded. Aliases: fc, cc, mc
/// (fort-cover with min-fort IP, closure complement, greedy minimal forts),
/// mtz and absep (fort-cover with that connectivity model).
struct MethodConfig {
  std::string method = "fort-cover";
  FortStrategy strategy = FortStrategy::min_fort_ip;
  FacetMode facet = FacetMode::off;
  Connectivity connect = Connectivity::none;
  bool preseed = true;
  int T = 1;
  double time_limit_s = 60.0;
  std::size_t memory_limit_bytes = 0;
  milp::Backend backend;
};

FortStrategy parse_strategy(const std::string& s);
FacetMode parse_facet_mode(const std::string& s);
Connectivity parse_connectivity(const std::string& s);
std::string to_string(FortStrategy s);
std::string to_string(FacetMode m);
std::string to_string(Connectivity c);

/// Parses "name[:key=value...]" (keys strategy, facets, connect, T, preseed)
/// on top of `base`. Throws std::invalid_argument on unknown names or keys.
MethodConfig parse_method(const std::string& spec, const MethodConfig& base = {});
/// Canonical "name[:key=value...]" label of a config.
std::string method_label(const MethodConfig& m);

/// True when the method computes Zc rather than Z.
bool is_connected_method(const MethodConfig& m);

SolveOutcome run_method(const Graph& g, const MethodConfig& m);

/// {status, value, lower, upper, set, time_s, stats}.
nlohmann::json outcome_json(const SolveOutcome& o);

/// Reads "key = value" lines (# comments) for the external backend:
/// command, params, work_dir, keep_files.
milp::ExternalSolverConfig parse_backend_config(const std::string& text);

// --- sweeps ----------------------------------------------------------------------

inline constexpr int kSchemaVersion = 1;

struct BenchConfig {
  /// path, cycle, complete, star, cubic, ring, ws, random.
  std::vector<std::string> families;
  std::vector<int> sizes;
  /// Named instance files solved once each, in addition to the families.
  std::vector<std::string> files;
  int instances = 5;
  std::uint64_t seed = 1;
  double time_limit_s = 60.0;
  std::vector<std::string> methods;
  int ring_k = 4;
  double ws_beta = 0.1;
  double random_p = 0.2;
  int jobs = 1;
  milp::Backend backend;
};

/// Key-value config: families, sizes ("10,20" or "11..101:10"), files,
/// instances, seed, time_limit, methods (';' separated), ring_k, ws_beta,
/// random_p, jobs, and backend_command / backend_params.
BenchConfig parse_bench_config(const std::string& text);

struct BenchInstance {
  std::string id, family;
  std::uint64_t seed = 0;
  Graph graph;
};

/// Deterministic instance list for a config.
std::vector<BenchInstance> make_instances(const BenchConfig& cfg);

struct BenchRecord {
  std::string instance, family;
  int n = 0, m = 0;
  std::string method, status;
  std::optional<std::int64_t> value, lower, upper;
  double time_s = 0.0;
  std::uint64_t seed = 0;
  std::string counters;
  std::string error;
};

/// One record per (instance, method); failures are recorded in `error`.
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

std::string csv_header();
std::string csv_row(const BenchRecord& r);
/// Appends rows to `path`, writing the header when the file is new and
/// refusing a file whose header differs.
void append_csv(const std::string& path, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_csv(const std::string& path);

struct BenchSummary {
  std::string family, method;
  int n = 0;
  int total = 0, solved = 0;
  /// Averages over the solved instances only; NaN when none solved.
  double avg_time_s = 0.0, avg_value = 0.0;
};

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records);

// --- cross-checks ----------------------------------------------------------------

struct CheckEntry {
  std::string method;
  bool connected = false;
  SolveOutcome outcome;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  bool agree = true;
  std::string message;
};

/// Runs every exact method applicable to g and compares optimal values
/// within the Z group and the Zc group.
CheckReport run_check(const Graph& g, double time_limit_s, const milp::Backend& backend = {});

}  // namespace zf::bench
