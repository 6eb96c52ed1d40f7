// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Usage: zf_acceptance [criterion numbers...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zf/combinatorial.hpp"
#include "zf/forcing.hpp"
#include "zf/models.hpp"

using namespace zf;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

Graph data(const std::string& name) { return load_graph(std::filesystem::path(ZF_DATA_DIR) / name); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string val(const SolveOutcome& o) {
  return to_string(o.status) + "/" + (o.best_value ? std::to_string(*o.best_value) : "-");
}

// (Z, Zc) per instance, filled by criteria 3 to 6 and read by criterion 8.
std::map<std::string, std::pair<std::optional<std::int64_t>, std::optional<std::int64_t>>> solved;

void record(const std::string& id, bool connected, const SolveOutcome& o) {
  if (!o.optimal()) return;
  auto& slot = solved[id];
  (connected ? slot.second : slot.first) = o.best_value;
}

std::int64_t choose(int n, int k) {
  std::int64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

const double kLong = 600.0;

Verdict closure_oracle() {
  Verdict v;
  int sets = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Graph g = oracle::random_graph(seed, 1, 30);
    Rng rng(seed ^ 0xc105e);
    for (int k = 0; k < 4; ++k, ++sets) {
      VertexSet s(g.order());
      const std::uint64_t density = 2 + rng.below(6);
      for (Vertex u = 0; u < g.order(); ++u)
        if (rng.below(density) == 0) s.insert(u);
      if (compute_closure(g, s) != oracle::naive_closure(g, s))
        v.fail("seed " + std::to_string(seed) + " set " + s.to_string());
    }
  }
  if (v.pass) v.detail = std::to_string(sets) + " sets on 500 graphs";
  return v;
}

Verdict fort_duality() {
  Verdict v;
  long checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    Graph g = oracle::random_graph(seed, 1, 8);
    auto forts = enumerate_forts(g);
    if (forts != oracle::all_forts(g)) v.fail("fort list differs on seed " + std::to_string(seed));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.order()); ++mask, ++checked) {
      VertexSet s = oracle::from_mask(g.order(), mask);
      bool hits = true;
      for (const VertexSet& f : forts) hits = hits && f.intersects(s);
      if (hits != is_zero_forcing_set(g, s) || hits != oracle::forces_all(g, s))
        v.fail("seed " + std::to_string(seed) + " set " + s.to_string());
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " subsets on 120 graphs";
  return v;
}

Verdict z_agreement() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = oracle::random_graph(1000 + seed, 2, 12);
    const std::string id = "random_" + std::to_string(seed);
    auto brute = brute_force_zf(g, {kLong});
    std::vector<std::pair<std::string, SolveOutcome>> runs;
    runs.emplace_back("wavefront", wavefront(g, {kLong}));
    runs.emplace_back("infection", solve_infection(g, {{}, kLong}));
    runs.emplace_back("extended", solve_extended_cover(g, {{}, kLong}));
    for (auto s : {FortStrategy::min_fort_ip, FortStrategy::closure_complement, FortStrategy::greedy_minimal})
      for (auto f : {FacetMode::off, FacetMode::simplified, FacetMode::full}) {
        FortCoverOptions o;
        o.strategy = s;
        o.facet = f;
        o.ip.time_limit_s = kLong;
        runs.emplace_back("fort-cover " + std::to_string(int(s)) + "/" + std::to_string(int(f)), solve_fort_cover(g, o));
      }
    if (!brute.optimal()) {
      v.fail(id + ": brute force did not finish");
      continue;
    }
    record(id, false, brute);
    for (auto& [name, o] : runs)
      if (!o.optimal() || *o.best_value != *brute.best_value || !is_zero_forcing_set(g, *o.incumbent))
        v.fail(id + ": " + name + " gave " + val(o) + ", brute " + val(brute));
  }
  if (v.pass) v.detail = "14 methods agree on 100 graphs";
  return v;
}

Verdict zc_agreement() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Graph g = oracle::random_graph(1000 + seed, 2, 12);
    const std::string id = "random_" + std::to_string(seed);
    auto brute = brute_force_czf(g, {kLong});
    std::vector<std::pair<std::string, SolveOutcome>> runs;
    runs.emplace_back("bnb", bnb_connected(g, kLong));
    FortCoverOptions o;
    o.ip.time_limit_s = kLong;
    o.connectivity = Connectivity::mtz;
    runs.emplace_back("mtz", solve_fort_cover(g, o));
    o.connectivity = Connectivity::ab_separator;
    runs.emplace_back("absep", solve_fort_cover(g, o));
    if (!brute.optimal()) {
      v.fail(id + ": brute force did not finish");
      continue;
    }
    record(id, true, brute);
    for (auto& [name, r] : runs)
      if (!r.optimal() || *r.best_value != *brute.best_value || !is_zero_forcing_set(g, *r.incumbent) ||
          !g.induces_connected(*r.incumbent))
        v.fail(id + ": " + name + " gave " + val(r) + ", brute " + val(brute));
  }
  if (v.pass) v.detail = "4 methods agree on 100 graphs";
  return v;
}

const std::vector<std::tuple<std::string, std::string, int, int>> kInstances{
    {"karate", "karate.el", 13, 14},  {"ieee14", "ieee14.el", 4, 4},   {"ieee24", "ieee24.el", 6, 7},
    {"ieee30", "ieee30.el", 7, 9},    {"ieee39", "ieee39.el", 7, 15},  {"ieee57", "ieee57.el", 9, 11},
    {"RTS-96", "ieee_rts96.el", 15, 22}};

Verdict named_values(bool connected) {
  Verdict v;
  std::string times;
  for (const auto& [id, file, z, zc] : kInstances) {
    Graph g = data(file);
    FortCoverOptions o;
    o.ip.time_limit_s = kLong;
    if (connected) o.connectivity = Connectivity::ab_separator;
    auto r = solve_fort_cover(g, o);
    const int expect = connected ? zc : z;
    record(id, connected, r);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%s (%.1fs)", id.c_str(), r.best_value ? std::to_string(*r.best_value).c_str() : "-",
                  r.stats.wall_time_s);
    times += (times.empty() ? "" : ", ") + std::string(buf);
    if (!r.optimal() || *r.best_value != expect || !is_zero_forcing_set(g, *r.incumbent) ||
        (connected && !g.induces_connected(*r.incumbent)))
      v.fail(id + " gave " + val(r) + ", expected " + std::to_string(expect));
    if (r.stats.wall_time_s > kLong) v.fail(id + " exceeded 10 min");
  }
  if (v.pass) v.detail = times;
  return v;
}

Verdict star_series() {
  Verdict v;
  std::string times;
  for (int n : {11, 21, 31, 41, 51}) {
    auto r = solve_infection(gen_star(n), {{}, 60.0});
    if (!r.optimal() || *r.best_value != n - 2) v.fail("star " + std::to_string(n) + " gave " + val(r));
    char buf[48];
    std::snprintf(buf, sizeof buf, "%d:%.2fs", n, r.stats.wall_time_s);
    times += (times.empty() ? "" : " ") + std::string(buf);
  }
  auto w = wavefront(gen_star(31), {20.0, 0});
  if (v.pass) v.detail = times + "; wavefront star 31: " + to_string(w.status);
  return v;
}

Verdict zc_at_least_z() {
  Verdict v;
  int both = 0;
  for (auto& [id, p] : solved) {
    if (!p.first || !p.second) continue;
    ++both;
    if (*p.second < *p.first) v.fail(id + ": Zc " + std::to_string(*p.second) + " < Z " + std::to_string(*p.first));
  }
  if (both == 0) v.fail("no instance solved for both; run criteria 3 to 6 first");
  if (v.pass) v.detail = std::to_string(both) + " instances";
  return v;
}

Verdict bounded_timesteps() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = oracle::random_graph(2000 + seed, 2, 9);
    const int n = g.order();
    const std::string id = "seed " + std::to_string(seed);
    std::int64_t prev = n + 1;
    for (int T = 1; T <= n - 1; ++T) {
      auto r = solve_bounded_timestep(g, T, {{}, kLong});
      if (!r.optimal()) {
        v.fail(id + " T=" + std::to_string(T) + " " + val(r));
        break;
      }
      if (T == 1 || T == 2 || T == 4) {
        int want = oracle::bounded_forcing_number(g, T);
        if (*r.best_value != want) v.fail(id + " T=" + std::to_string(T) + " gave " + val(r) + ", oracle " + std::to_string(want));
      }
      if (oracle::naive_propagation_time(g, *r.incumbent) > T) v.fail(id + ": set too slow at T=" + std::to_string(T));
      if (*r.best_value > prev) v.fail(id + ": value increases at T=" + std::to_string(T));
      prev = *r.best_value;
      if (T == n - 1 && *r.best_value != oracle::zero_forcing_number(g)) v.fail(id + ": T=n-1 differs from Z");
    }
  }
  if (v.pass) v.detail = "50 graphs, T = 1..n-1";
  return v;
}

Verdict pool_bound() {
  Verdict v;
  auto r = wavefront(gen_empty(8));
  std::int64_t total = 0;
  for (int s = 1; s <= 8; ++s) {
    total += choose(8, s);
    std::int64_t got = r.stats.get("pool_after_stage_" + std::to_string(s));
    if (got != total) v.fail("empty graph stage " + std::to_string(s) + ": " + std::to_string(got) + " != " + std::to_string(total));
  }
  int stages = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = oracle::random_graph(3000 + seed, 4, 16);
    auto w = wavefront(g, {kLong, 0});
    if (!w.optimal()) {
      v.fail("seed " + std::to_string(seed) + " " + val(w));
      continue;
    }
    std::int64_t bound = 0;
    for (int s = 1; s <= g.order(); ++s) {
      bound += choose(g.order(), s);
      auto key = "pool_after_stage_" + std::to_string(s);
      if (!w.stats.counters.count(key)) continue;
      ++stages;
      if (w.stats.get(key) > bound) v.fail("seed " + std::to_string(seed) + " stage " + std::to_string(s));
    }
  }
  if (v.pass) v.detail = "equality on the empty graph; " + std::to_string(stages) + " stages within the bound";
  return v;
}

Verdict facet_conditions() {
  Verdict v;
  int forts_checked = 0, cuts = 0, facets = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Graph g = oracle::random_graph(4000 + seed, 2, 7);
    auto forts = enumerate_forts(g);
    auto zfs = oracle::all_zero_forcing_sets(g);
    for (const VertexSet& f : forts) {
      ++forts_checked;
      auto [c1, c2] = facet_conditions_oracle(g, forts, f);
      // the oracle is rechecked against the definition with plain loops
      bool d1 = true, d2 = true;
      for (const VertexSet& a : forts) d1 = d1 && !(a != f && a.is_subset_of(f));
      for (Vertex u = 0; u < g.order(); ++u) {
        if (f.contains(u)) continue;
        VertexSet allowed = f, common = f;
        allowed.insert(u);
        for (const VertexSet& a : forts)
          if (a.contains(u) && a.is_subset_of(allowed)) common &= a;
        d2 = d2 && !common.empty();
      }
      if (c1 != d1 || c2 != d2) v.fail("oracle mismatch seed " + std::to_string(seed));
      auto check = check_facet(g, f, FacetMode::full, {{}, kLong});
      const std::string id = "seed " + std::to_string(seed) + " fort " + f.to_string();
      // the model tests the second condition; minimality is checked separately
      if ((check.verdict == FacetVerdict::facet) != c2) v.fail(id + ": verdict disagrees");
      if (c1 && c2) ++facets;
      if (check.verdict != FacetVerdict::not_facet) continue;
      CoverRow cut = cg_cut_from_witness(g, f, check.v, check.witnesses);
      ++cuts;
      for (const VertexSet& z : zfs)
        if ((z & cut.support).size() < cut.rhs) v.fail(id + ": cut cuts off ZFS " + z.to_string());
    }
  }
  if (v.pass)
    v.detail = std::to_string(forts_checked) + " forts, " + std::to_string(facets) + " facets, " + std::to_string(cuts) +
               " CG cuts";
  return v;
}

Verdict separator_minimality() {
  Verdict v;
  int scenarios = 0;
  for (std::uint64_t seed = 0; scenarios < 200; ++seed) {
    Graph g = oracle::random_graph(5000 + seed, 4, 20);
    Rng rng(seed);
    VertexSet z(g.order());
    for (Vertex u = 0; u < g.order(); ++u)
      if (rng.below(3) == 0) z.insert(u);
    if (g.components(z).size() < 2) continue;
    ++scenarios;
    auto sep = find_minimal_ab_separator(g, z);
    const std::string id = "seed " + std::to_string(seed);
    if (!sep) {
      v.fail(id + ": no separator");
      continue;
    }
    if (!z.contains(sep->a) || !z.contains(sep->b) || sep->separator.intersects(z))
      v.fail(id + ": endpoints or separator misplaced");
    if (!oracle::separates(g, sep->a, sep->b, sep->separator)) v.fail(id + ": does not separate");
    sep->separator.for_each([&](Vertex c) {
      VertexSet smaller = sep->separator;
      smaller.erase(c);
      if (oracle::separates(g, sep->a, sep->b, smaller)) v.fail(id + ": not minimal");
    });
  }
  if (v.pass) v.detail = "200 scenarios";
  return v;
}

milp::MilpModel sample_model(int i) {
  Graph g = oracle::random_graph(6000 + i, 3, 7);
  switch (i % 5) {
    case 0: {
      auto forts = enumerate_forts(g);
      return build_fort_cover_master(g, forts).model;
    }
    case 1:
      return build_infection_model(g, g.order() - 1).model;
    case 2: {
      auto forts = enumerate_forts(g);
      return build_facet_model(g, forts.front(), forts.front().size(), true).model;
    }
    case 3: {
      auto forts = enumerate_forts(g);
      return build_mtz_master(g, forts).model;
    }
    default:
      return oracle::random_binary_model(7000 + i, 10, 8);
  }
}

Verdict backend_crosscheck() {
  Verdict v;
  const std::filesystem::path golden = std::filesystem::path(ZF_TEST_DIR) / "golden";
  milp::MilpModel one;
  one.add_binary("x", 1);
  one.add_row({{0, 1}}, milp::Sense::ge, 1, "c1");
  std::vector<VertexSet> seeds;
  for (const VertexSet& f : enumerate_forts(gen_path(3)))
    if (f.size() < 3) seeds.push_back(f);
  if (milp::format_lp(one) != slurp(golden / "one_var.lp")) v.fail("one_var.lp differs");
  if (milp::format_lp(build_fort_cover_master(gen_path(3), seeds).model) != slurp(golden / "p3_master.lp"))
    v.fail("p3_master.lp differs");
  if (milp::format_lp(build_infection_model(gen_path(3), 2).model) != slurp(golden / "p3_infection.lp"))
    v.fail("p3_infection.lp differs");

  const auto dir = std::filesystem::temp_directory_path() / "zf_acceptance_lp";
  std::filesystem::create_directories(dir);
  const std::string script = std::string(ZF_TOOLS_DIR) + "/highs_solve.py";
  const bool external = std::system("python3 -c 'import highspy' > /dev/null 2>&1") == 0;
  milp::ExternalSolverConfig cfg;
  cfg.command = "python3 " + script + " {lp_path} {sol_path} {time_limit} {params}";
  cfg.work_dir = dir;
  int compared = 0;
  for (int i = 0; i < 20; ++i) {
    milp::MilpModel m = sample_model(i);
    const auto a = dir / ("m" + std::to_string(i) + "_a.lp"), b = dir / ("m" + std::to_string(i) + "_b.lp");
    milp::export_lp(m, a);
    milp::export_lp(m, b);
    if (slurp(a) != slurp(b)) v.fail("model " + std::to_string(i) + " export not byte-stable");
    auto in = milp::solve_milp(m, {}, {kLong});
    bool binary = m.num_variables() <= 20;
    for (const auto& var : m.variables()) binary = binary && var.lo >= 0 && var.hi <= 1;
    if (binary && in.objective != oracle::milp_optimum(m)) v.fail("model " + std::to_string(i) + ": internal differs from enumeration");
    if (!external) continue;
    auto ex = milp::solve_milp(m, milp::Backend::external_backend(cfg), {kLong});
    ++compared;
    if (in.status != ex.status || in.objective != ex.objective)
      v.fail("model " + std::to_string(i) + ": internal " + to_string(in.status) + " " +
             (in.objective ? std::to_string(*in.objective) : "-") + ", external " + to_string(ex.status) + " " +
             (ex.objective ? std::to_string(*ex.objective) : "-"));
    if (ex.assignment && !m.feasible(*ex.assignment)) v.fail("model " + std::to_string(i) + ": external point infeasible");
  }
  std::filesystem::remove_all(dir);
  if (v.pass)
    v.detail = external ? std::to_string(compared) + " models agree with HiGHS; golden files match"
                        : "external backend not configured (highspy missing); golden files match";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"closure oracle equivalence", closure_oracle},
      {"fort duality", fort_duality},
      {"method agreement Z", z_agreement},
      {"method agreement Zc", zc_agreement},
      {"named instances Z", [] { return named_values(false); }},
      {"named instances Zc", [] { return named_values(true); }},
      {"star series", star_series},
      {"Zc >= Z", zc_at_least_z},
      {"bounded timesteps", bounded_timesteps},
      {"wavefront pool bound", pool_bound},
      {"facet conditions", facet_conditions},
      {"separator minimality", separator_minimality},
      {"backend cross-check", backend_crosscheck},
  };
  const std::vector<double> budget{5, 60, 600, 600, 7 * 600, 7 * 600, 5 * 60, 1e9, 600, 1e9, 1e9, 1e9, 1e9};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int num = static_cast<int>(k) + 1;
    if (!pick.empty() && !pick.count(num)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget[k]) v.fail("took " + std::to_string(secs) + " s; " + v.detail);
    if (!v.pass) ++failed;
    std::printf("%s %2d %s (%.2f s): %s\n", v.pass ? "PASS" : "FAIL", num, criteria[k].first.c_str(), secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
