#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zf/bench.hpp"
#include "zf/forcing.hpp"
#include "zf/models.hpp"

using namespace zf;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Graph read_graph(const std::string& path, const std::string& format) {
  return load_graph(path, format.empty() ? guess_graph_format(path) : parse_graph_format(format));
}

struct BackendFlags {
  std::string config;
  std::string command;
  std::string params;

  void attach(CLI::App* app) {
    app->add_option("--backend-config", config, "key = value file describing an external MILP solver");
    app->add_option("--solver-cmd", command, "external solver command template ({lp_path} {sol_path} {time_limit} {params})");
    app->add_option("--solver-params", params, "text substituted for {params}");
  }
  milp::Backend backend() const {
    if (config.empty() && command.empty()) return milp::Backend::internal_backend();
    milp::ExternalSolverConfig cfg;
    if (!config.empty()) cfg = bench::parse_backend_config(read_text(config));
    if (!command.empty()) cfg.command = command;
    if (!params.empty()) cfg.params = params;
    return milp::Backend::external_backend(cfg);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero forcing and connected forcing solvers"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one graph and print a JSON outcome");
  std::string graph_path, format, method = "fort-cover", strategy = "min-fort", facets = "off", connect = "none";
  double time_limit = 60.0;
  int T = 1;
  bool no_preseed = false;
  BackendFlags backend_flags;
  solve->add_option("graph", graph_path, "graph file")->required();
  solve->add_option("--format", format, "edge-list or dimacs (default: from the file name)");
  solve->add_option("--method", method,
                    "wavefront | brute | brute-connected | bnb | infection | fort-cover | extended | bounded "
                    "| fc | cc | mc | mtz | absep");
  solve->add_option("--strategy", strategy, "fort-cover separation: min-fort | closure-complement | greedy-minimal");
  solve->add_option("--facets", facets, "facet check: off | simplified | full");
  solve->add_option("--connect", connect, "connectivity model: none | mtz | absep");
  solve->add_option("--T", T, "propagation time bound for --method bounded")->check(CLI::PositiveNumber);
  solve->add_option("--time-limit", time_limit, "seconds (0 = unlimited)");
  solve->add_flag("--no-preseed", no_preseed, "do not seed the master with disjoint minimum forts");
  backend_flags.attach(solve);

  // gen
  auto* gen = app.add_subcommand("gen", "write a generated graph");
  std::string family, out_path, out_format = "edge-list";
  int gen_n = 10, gen_k = 4;
  double gen_p = 0.2, gen_beta = 0.1;
  std::uint64_t gen_seed = 1;
  gen->add_option("family", family, "path | cycle | complete | star | empty | cubic | ring | ws | random")->required();
  gen->add_option("-n", gen_n, "number of vertices")->check(CLI::NonNegativeNumber);
  gen->add_option("-k", gen_k, "ring / Watts-Strogatz degree");
  gen->add_option("-p", gen_p, "edge probability for random");
  gen->add_option("--beta", gen_beta, "rewiring probability for ws");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", out_path, "output file (default stdout)");
  gen->add_option("--format", out_format, "edge-list or dimacs");

  // forts
  auto* forts = app.add_subcommand("forts", "minimum fort or fort enumeration");
  std::string forts_graph, forts_format, avoid_list;
  bool enumerate = false;
  double forts_limit = 60.0;
  BackendFlags forts_backend;
  forts->add_option("graph", forts_graph, "graph file")->required();
  forts->add_option("--format", forts_format, "edge-list or dimacs");
  forts->add_option("--avoid", avoid_list, "comma separated vertices the fort must avoid");
  forts->add_flag("--enumerate", enumerate, "list every fort (n <= 16)");
  forts->add_option("--time-limit", forts_limit, "seconds");
  forts_backend.attach(forts);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a sweep and append CSV records");
  std::string bench_config, csv_path;
  int jobs = 0;
  bench_cmd->add_option("config", bench_config, "key = value suite file")->required();
  bench_cmd->add_option("-o,--output", csv_path, "CSV file to append to")->required();
  bench_cmd->add_option("--jobs", jobs, "parallel rows (overrides the config)");

  // check
  auto* check = app.add_subcommand("check", "cross-check every exact method on one graph");
  std::string check_graph, check_format;
  double check_limit = 60.0;
  BackendFlags check_backend;
  check->add_option("graph", check_graph, "graph file")->required();
  check->add_option("--format", check_format, "edge-list or dimacs");
  check->add_option("--time-limit", check_limit, "seconds per method");
  check_backend.attach(check);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      bench::MethodConfig base;
      base.strategy = bench::parse_strategy(strategy);
      base.facet = bench::parse_facet_mode(facets);
      base.connect = bench::parse_connectivity(connect);
      base.preseed = !no_preseed;
      base.T = T;
      base.time_limit_s = time_limit;
      base.backend = backend_flags.backend();
      bench::MethodConfig m = bench::parse_method(method, base);
      Graph g = read_graph(graph_path, format);
      SolveOutcome o = bench::run_method(g, m);
      nlohmann::json j = bench::outcome_json(o);
      j["method"] = bench::method_label(m);
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (*gen) {
      Graph g;
      if (family == "path") g = gen_path(gen_n);
      else if (family == "cycle") g = gen_cycle(gen_n);
      else if (family == "complete") g = gen_complete(gen_n);
      else if (family == "star") g = gen_star(gen_n);
      else if (family == "empty") g = gen_empty(gen_n);
      else if (family == "cubic") g = gen_cubic(gen_n, gen_seed);
      else if (family == "ring") g = gen_ring_lattice(gen_n, gen_k);
      else if (family == "ws") g = gen_watts_strogatz(gen_n, gen_k, gen_beta, gen_seed);
      else if (family == "random") g = gen_random_connected(gen_n, gen_p, gen_seed);
      else throw std::invalid_argument("unknown family '" + family + "'");
      GraphFormat f = parse_graph_format(out_format);
      if (out_path.empty()) std::cout << format_graph(g, f);
      else save_graph(g, out_path, f);
      return 0;
    }
    if (*forts) {
      Graph g = read_graph(forts_graph, forts_format);
      nlohmann::json j;
      if (enumerate) {
        nlohmann::json list = nlohmann::json::array();
        for (const VertexSet& f : enumerate_forts(g)) list.push_back(f.to_vector());
        j["forts"] = list;
      } else {
        VertexSet avoid(g.order());
        std::stringstream ss(avoid_list);
        std::string tok;
        while (std::getline(ss, tok, ','))
          if (!tok.empty()) {
            int v = std::stoi(tok);
            if (v < 0 || v >= g.order()) throw std::invalid_argument("--avoid vertex " + tok + " out of range");
            avoid.insert(v);
          }
        IpOptions ip;
        ip.time_limit_s = forts_limit;
        ip.backend = forts_backend.backend();
        auto f = find_min_fort_ip(g, avoid, ip);
        j["fort"] = f ? nlohmann::json(f->to_vector()) : nlohmann::json(nullptr);
        j["size"] = f ? nlohmann::json(f->size()) : nlohmann::json(nullptr);
      }
      std::cout << j.dump() << "\n";
      return 0;
    }
    if (*bench_cmd) {
      bench::BenchConfig cfg = bench::parse_bench_config(read_text(bench_config));
      if (jobs > 0) cfg.jobs = jobs;
      auto records = bench::run_bench(cfg);
      bench::append_csv(csv_path, records);
      std::cout << "family,n,method,solved,total,avg_time_s,avg_value\n";
      for (const auto& s : bench::summarize(records))
        std::cout << s.family << ',' << s.n << ',' << s.method << ',' << s.solved << ',' << s.total << ','
                  << s.avg_time_s << ',' << s.avg_value << "\n";
      int errors = 0;
      for (const auto& r : records)
        if (r.status == "error") {
          ++errors;
          std::cerr << r.instance << " " << r.method << ": " << r.error << "\n";
        }
      return errors ? 3 : 0;
    }
    if (*check) {
      Graph g = read_graph(check_graph, check_format);
      bench::CheckReport rep = bench::run_check(g, check_limit, check_backend.backend());
      for (const auto& e : rep.entries)
        std::cout << (e.connected ? "Zc " : "Z  ") << e.method << " " << to_string(e.outcome.status) << " "
                  << (e.outcome.best_value ? std::to_string(*e.outcome.best_value) : "-") << "\n";
      if (!rep.agree) {
        std::cerr << "disagreement:\n" << rep.message;
        return 1;
      }
      std::cout << "all methods agree\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
