#include "zf/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "zf/combinatorial.hpp"

namespace zf::bench {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (auto t = trim(cur); !t.empty()) out.push_back(t);
  return out;
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos;
    double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("bad number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  double d = to_double(key, v);
  if (d != std::floor(d)) throw std::invalid_argument("bad integer for " + key + ": '" + v + "'");
  return static_cast<int>(d);
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ull ^ (b + 0x7f4a7c159e3779b9ull + (a << 6) + (a >> 2));
  x ^= x >> 31;
  x *= 0xbf58476d1ce4e5b9ull;
  return x ^ (x >> 29);
}

std::uint64_t family_code(const std::string& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : f) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::string fmt_double(double d) {
  std::ostringstream o;
  o.precision(6);
  o << std::fixed << d;
  return o.str();
}

std::string opt_str(const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : ""; }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  return out + "\"";
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  f.push_back(cur);
  return f;
}

}  // namespace

FortStrategy parse_strategy(const std::string& s) {
  if (s == "min-fort" || s == "min_fort_ip" || s == "ip") return FortStrategy::min_fort_ip;
  if (s == "closure-complement" || s == "closure_complement") return FortStrategy::closure_complement;
  if (s == "greedy-minimal" || s == "greedy_minimal" || s == "greedy") return FortStrategy::greedy_minimal;
  throw std::invalid_argument("unknown fort strategy '" + s + "'");
}

FacetMode parse_facet_mode(const std::string& s) {
  if (s == "off" || s == "none") return FacetMode::off;
  if (s == "simplified") return FacetMode::simplified;
  if (s == "full") return FacetMode::full;
  throw std::invalid_argument("unknown facet mode '" + s + "'");
}

Connectivity parse_connectivity(const std::string& s) {
  if (s == "none" || s == "off") return Connectivity::none;
  if (s == "mtz") return Connectivity::mtz;
  if (s == "absep" || s == "ab-separator" || s == "ab_separator") return Connectivity::ab_separator;
  throw std::invalid_argument("unknown connectivity model '" + s + "'");
}

std::string to_string(FortStrategy s) {
  switch (s) {
    case FortStrategy::min_fort_ip: return "min-fort";
    case FortStrategy::closure_complement: return "closure-complement";
    case FortStrategy::greedy_minimal: return "greedy-minimal";
  }
  return "?";
}

std::string to_string(FacetMode m) {
  switch (m) {
    case FacetMode::off: return "off";
    case FacetMode::simplified: return "simplified";
    case FacetMode::full: return "full";
  }
  return "?";
}

std::string to_string(Connectivity c) {
  switch (c) {
    case Connectivity::none: return "none";
    case Connectivity::mtz: return "mtz";
    case Connectivity::ab_separator: return "absep";
  }
  return "?";
}

MethodConfig parse_method(const std::string& spec, const MethodConfig& base) {
  auto parts = split(spec, ':');
  if (parts.empty()) throw std::invalid_argument("empty method");
  MethodConfig m = base;
  const std::string& name = parts[0];
  static const std::vector<std::string> plain{"wavefront", "brute", "brute-connected", "bnb",
                                              "infection", "fort-cover", "extended", "bounded"};
  if (std::find(plain.begin(), plain.end(), name) != plain.end()) {
    m.method = name;
  } else if (name == "fc" || name == "cc" || name == "mc") {
    m.method = "fort-cover";
    m.strategy = name == "fc" ? FortStrategy::min_fort_ip
                 : name == "cc" ? FortStrategy::closure_complement
                                : FortStrategy::greedy_minimal;
  } else if (name == "mtz" || name == "absep") {
    m.method = "fort-cover";
    m.connect = parse_connectivity(name);
  } else {
    throw std::invalid_argument("unknown method '" + name + "'");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw std::invalid_argument("method option '" + parts[i] + "' needs key=value");
    std::string key = parts[i].substr(0, eq), value = parts[i].substr(eq + 1);
    if (key == "strategy") m.strategy = parse_strategy(value);
    else if (key == "facets") m.facet = parse_facet_mode(value);
    else if (key == "connect") m.connect = parse_connectivity(value);
    else if (key == "T") m.T = to_int(key, value);
    else if (key == "preseed") m.preseed = value == "1" || value == "true" || value == "on";
    else throw std::invalid_argument("unknown method option '" + key + "'");
  }
  return m;
}

std::string method_label(const MethodConfig& m) {
  if (m.method == "bounded") return "bounded:T=" + std::to_string(m.T);
  if (m.method != "fort-cover") return m.method;
  std::string s = "fort-cover:strategy=" + to_string(m.strategy) + ":facets=" + to_string(m.facet);
  if (m.connect != Connectivity::none) s += ":connect=" + to_string(m.connect);
  if (!m.preseed) s += ":preseed=off";
  return s;
}

bool is_connected_method(const MethodConfig& m) {
  return m.method == "brute-connected" || m.method == "bnb" ||
         (m.method == "fort-cover" && m.connect != Connectivity::none);
}

SolveOutcome run_method(const Graph& g, const MethodConfig& m) {
  IpOptions ip;
  ip.backend = m.backend;
  ip.time_limit_s = m.time_limit_s;
  if (m.method == "wavefront") {
    WavefrontOptions w;
    w.time_limit_s = m.time_limit_s;
    w.memory_limit_bytes = m.memory_limit_bytes;
    return wavefront(g, w);
  }
  if (m.method == "brute" || m.method == "brute-connected") {
    BruteForceOptions b;
    b.time_limit_s = m.time_limit_s;
    return m.method == "brute" ? brute_force_zf(g, b) : brute_force_czf(g, b);
  }
  if (m.method == "bnb") return bnb_connected(g, m.time_limit_s);
  if (m.method == "infection") return solve_infection(g, ip);
  if (m.method == "bounded") return solve_bounded_timestep(g, m.T, ip);
  if (m.method == "extended") return solve_extended_cover(g, ip);
  if (m.method == "fort-cover") {
    FortCoverOptions f;
    f.strategy = m.strategy;
    f.facet = m.facet;
    f.connectivity = m.connect;
    f.preseed = m.preseed;
    f.ip = ip;
    return solve_fort_cover(g, f);
  }
  throw std::invalid_argument("unknown method '" + m.method + "'");
}

nlohmann::json outcome_json(const SolveOutcome& o) {
  nlohmann::json j;
  j["status"] = to_string(o.status);
  j["value"] = o.optimal() && o.best_value ? nlohmann::json(*o.best_value) : nlohmann::json(nullptr);
  j["lower"] = o.lower_bound;
  j["upper"] = o.best_value ? nlohmann::json(*o.best_value) : nlohmann::json(nullptr);
  j["set"] = o.incumbent ? nlohmann::json(o.incumbent->to_vector()) : nlohmann::json::array();
  j["time_s"] = o.stats.wall_time_s;
  nlohmann::json stats = nlohmann::json::object();
  for (auto& [k, v] : o.stats.counters) stats[k] = v;
  j["stats"] = stats;
  return j;
}

milp::ExternalSolverConfig parse_backend_config(const std::string& text) {
  milp::ExternalSolverConfig cfg;
  for (auto& [k, v] : parse_kv(text)) {
    if (k == "command") cfg.command = v;
    else if (k == "params") cfg.params = v;
    else if (k == "work_dir") cfg.work_dir = v;
    else if (k == "keep_files") cfg.keep_files = v == "1" || v == "true";
    else throw std::invalid_argument("unknown backend config key '" + k + "'");
  }
  if (cfg.command.empty()) throw std::invalid_argument("backend config has no command");
  return cfg;
}

// --- sweeps ----------------------------------------------------------------------

BenchConfig parse_bench_config(const std::string& text) {
  BenchConfig cfg;
  milp::ExternalSolverConfig ext;
  for (auto& [k, v] : parse_kv(text)) {
    if (k == "families") cfg.families = split(v, ',');
    else if (k == "sizes") {
      for (const std::string& part : split(v, ',')) {
        auto dots = part.find("..");
        if (dots == std::string::npos) {
          cfg.sizes.push_back(to_int(k, part));
          continue;
        }
        auto colon = part.find(':', dots);
        int lo = to_int(k, part.substr(0, dots));
        int hi = to_int(k, part.substr(dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
        int step = colon == std::string::npos ? 1 : to_int(k, part.substr(colon + 1));
        if (step <= 0) throw std::invalid_argument("sizes step must be positive");
        for (int s = lo; s <= hi; s += step) cfg.sizes.push_back(s);
      }
    } else if (k == "files") cfg.files = split(v, ',');
    else if (k == "instances") cfg.instances = to_int(k, v);
    else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(to_double(k, v));
    else if (k == "time_limit") cfg.time_limit_s = to_double(k, v);
    else if (k == "methods") cfg.methods = split(v, ';');
    else if (k == "ring_k") cfg.ring_k = to_int(k, v);
    else if (k == "ws_beta") cfg.ws_beta = to_double(k, v);
    else if (k == "random_p") cfg.random_p = to_double(k, v);
    else if (k == "jobs") cfg.jobs = std::max(1, to_int(k, v));
    else if (k == "backend_command") ext.command = v;
    else if (k == "backend_params") ext.params = v;
    else throw std::invalid_argument("unknown bench config key '" + k + "'");
  }
  if (cfg.methods.empty()) throw std::invalid_argument("bench config lists no methods");
  for (const std::string& m : cfg.methods) parse_method(m);
  if (!ext.command.empty()) cfg.backend = milp::Backend::external_backend(ext);
  return cfg;
}

std::vector<BenchInstance> make_instances(const BenchConfig& cfg) {
  std::vector<BenchInstance> out;
  for (const std::string& fam : cfg.families)
    for (int n : cfg.sizes) {
      // deterministic families have one instance per size
      const bool random = fam == "cubic" || fam == "ws" || fam == "random";
      const int count = random ? cfg.instances : 1;
      for (int i = 0; i < count; ++i) {
        BenchInstance inst;
        inst.family = fam;
        inst.seed = random ? mix(mix(cfg.seed, family_code(fam)), mix(static_cast<std::uint64_t>(n), i)) : 0;
        if (fam == "path") inst.graph = gen_path(n);
        else if (fam == "cycle") inst.graph = gen_cycle(n);
        else if (fam == "complete") inst.graph = gen_complete(n);
        else if (fam == "star") inst.graph = gen_star(n);
        else if (fam == "ring") inst.graph = gen_ring_lattice(n, cfg.ring_k);
        else if (fam == "cubic") inst.graph = gen_cubic(n, inst.seed);
        else if (fam == "ws") inst.graph = gen_watts_strogatz(n, cfg.ring_k, cfg.ws_beta, inst.seed);
        else if (fam == "random") inst.graph = gen_random_connected(n, cfg.random_p, inst.seed);
        else throw std::invalid_argument("unknown family '" + fam + "'");
        inst.id = fam + "_" + std::to_string(n) + (random ? "_" + std::to_string(i) : "");
        out.push_back(std::move(inst));
      }
    }
  for (const std::string& f : cfg.files) {
    BenchInstance inst;
    inst.family = "file";
    inst.id = std::filesystem::path(f).stem().string();
    inst.graph = load_graph(f, guess_graph_format(f));
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  const std::vector<BenchInstance> instances = make_instances(cfg);
  std::vector<MethodConfig> methods;
  for (const std::string& spec : cfg.methods) {
    MethodConfig base;
    base.time_limit_s = cfg.time_limit_s;
    base.backend = cfg.backend;
    methods.push_back(parse_method(spec, base));
  }
  std::vector<BenchRecord> records(instances.size() * methods.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < records.size(); k = next++) {
      const BenchInstance& inst = instances[k / methods.size()];
      const MethodConfig& m = methods[k % methods.size()];
      BenchRecord& r = records[k];
      r.instance = inst.id;
      r.family = inst.family;
      r.n = inst.graph.order();
      r.m = inst.graph.size();
      r.method = method_label(m);
      r.seed = inst.seed;
      try {
        SolveOutcome o = run_method(inst.graph, m);
        r.status = to_string(o.status);
        if (o.optimal()) r.value = o.best_value;
        if (o.status != SolveStatus::infeasible) r.lower = o.lower_bound;
        r.upper = o.best_value;
        r.time_s = o.stats.wall_time_s;
        std::string c;
        for (auto& [key, v] : o.stats.counters) c += (c.empty() ? "" : ";") + key + "=" + std::to_string(v);
        r.counters = c;
      } catch (const std::exception& e) {
        r.status = "error";
        r.error = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(records.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return records;
}

std::string csv_header() {
  return "schema,instance,family,n,m,method,status,value,lower,upper,time_s,seed,counters,error";
}

std::string csv_row(const BenchRecord& r) {
  std::ostringstream o;
  o << kSchemaVersion << ',' << csv_escape(r.instance) << ',' << csv_escape(r.family) << ',' << r.n << ',' << r.m << ','
    << csv_escape(r.method) << ',' << r.status << ',' << opt_str(r.value) << ',' << opt_str(r.lower) << ','
    << opt_str(r.upper) << ',' << fmt_double(r.time_s) << ',' << r.seed << ',' << csv_escape(r.counters) << ','
    << csv_escape(r.error);
  return o.str();
}

void append_csv(const std::string& path, const std::vector<BenchRecord>& records) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  if (!fresh) {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    if (header != csv_header())
      throw std::runtime_error(path + ": existing header does not match schema " + std::to_string(kSchemaVersion));
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path + " for appending");
  if (fresh) out << csv_header() << '\n';
  for (const BenchRecord& r : records) out << csv_row(r) << '\n';
}

std::vector<BenchRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line != csv_header()) throw std::runtime_error(path + ": unexpected header");
  auto opt = [](const std::string& s) -> std::optional<std::int64_t> {
    if (s.empty()) return std::nullopt;
    return std::stoll(s);
  };
  std::vector<BenchRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv_fields(line);
    if (f.size() != 14) throw std::runtime_error(path + ": malformed row '" + line + "'");
    BenchRecord r;
    r.instance = f[1];
    r.family = f[2];
    r.n = std::stoi(f[3]);
    r.m = std::stoi(f[4]);
    r.method = f[5];
    r.status = f[6];
    r.value = opt(f[7]);
    r.lower = opt(f[8]);
    r.upper = opt(f[9]);
    r.time_s = std::stod(f[10]);
    r.seed = std::stoull(f[11]);
    r.counters = f[12];
    r.error = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BenchSummary> summarize(const std::vector<BenchRecord>& records) {
  std::map<std::tuple<std::string, int, std::string>, BenchSummary> groups;
  std::vector<std::tuple<std::string, int, std::string>> order;
  for (const BenchRecord& r : records) {
    auto key = std::make_tuple(r.family, r.n, r.method);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.family = r.family;
      it->second.n = r.n;
      it->second.method = r.method;
    }
    BenchSummary& s = it->second;
    ++s.total;
    if (r.status == "optimal" && r.value) {
      ++s.solved;
      s.avg_time_s += r.time_s;
      s.avg_value += static_cast<double>(*r.value);
    }
  }
  std::vector<BenchSummary> out;
  for (const auto& key : order) {
    BenchSummary s = groups[key];
    if (s.solved > 0) {
      s.avg_time_s /= s.solved;
      s.avg_value /= s.solved;
    } else {
      s.avg_time_s = s.avg_value = std::nan("");
    }
    out.push_back(s);
  }
  return out;
}

// --- cross-checks ----------------------------------------------------------------

CheckReport run_check(const Graph& g, double time_limit_s, const milp::Backend& backend) {
  CheckReport rep;
  std::vector<std::string> specs{"wavefront", "fort-cover", "fort-cover:strategy=closure-complement",
                                 "fort-cover:strategy=greedy-minimal:facets=simplified", "infection"};
  const int n = g.order();
  bool isolated = false;
  for (Vertex v = 0; v < n; ++v) isolated |= g.degree(v) == 0;
  if (n <= 24) specs.push_back("brute");
  if (!isolated) specs.push_back("extended");
  if (g.is_connected()) {
    specs.insert(specs.end(), {"bnb", "absep", "mtz"});
    if (n <= 24) specs.push_back("brute-connected");
  }
  std::optional<std::int64_t> z, zc;
  for (const std::string& spec : specs) {
    MethodConfig base;
    base.time_limit_s = time_limit_s;
    base.backend = backend;
    MethodConfig m = parse_method(spec, base);
    CheckEntry e{method_label(m), is_connected_method(m), run_method(g, m)};
    if (e.outcome.optimal()) {
      auto& ref = e.connected ? zc : z;
      if (!ref) ref = e.outcome.best_value;
      if (*ref != *e.outcome.best_value) {
        rep.agree = false;
        rep.message += e.method + " returned " + std::to_string(*e.outcome.best_value) + ", expected " +
                       std::to_string(*ref) + "\n";
      }
    }
    rep.entries.push_back(std::move(e));
  }
  if (z && zc && *zc < *z) {
    rep.agree = false;
    rep.message += "Zc < Z\n";
  }
  if (!z) {
    rep.agree = false;
    rep.message += "no method solved Z to optimality\n";
  }
  return rep;
}

}  // namespace zf::bench
