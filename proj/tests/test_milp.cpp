#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "oracles.hpp"
#include "zf/forcing.hpp"
#include "zf/milp.hpp"
#include "zf/models.hpp"

using namespace zf;
using namespace zf::milp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir() {
  auto d = std::filesystem::temp_directory_path() / ("zf_milp_" + std::to_string(::getpid()));
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("model construction") {
  MilpModel m;
  int x = m.add_binary("x", 2);
  int y = m.add_integer("y", -1, 3, 1);
  CHECK_THROWS_AS(m.add_binary("x"), ModelError);
  CHECK_THROWS_AS(m.add_binary("1bad"), ModelError);
  CHECK_THROWS_AS(m.add_integer("z", 2, 1), ModelError);
  CHECK_THROWS_AS(m.add_row({{5, 1}}, Sense::ge, 0), ModelError);
  int r = m.add_row({{x, 1}, {y, 2}, {x, 2}}, Sense::le, 4);
  REQUIRE(m.constraints()[r].terms.size() == 2);
  CHECK(m.constraints()[r].terms[0].coef == 3);
  CHECK(m.constraints()[r].name == "c0");
  CHECK_THROWS_AS(m.add_row({{x, 1}}, Sense::ge, 0, "c0"), ModelError);
  CHECK(m.find("y") == y);
  CHECK(m.find("w") == -1);
  Assignment a{1, 1};
  CHECK(m.objective(a) == 3);
  CHECK(m.activity(m.constraints()[r], a) == 5);
  CHECK_FALSE(m.feasible(a));
  CHECK(m.first_violation(a) == r);
  CHECK(m.feasible(Assignment{0, 2}));
  CHECK_FALSE(m.feasible(Assignment{0, 4}));
  CHECK_THROWS_AS(m.fix(x, 3), ModelError);
}

TEST_CASE("internal solver small cases") {
  MilpModel m;
  int a = m.add_binary("s_0", 1), b = m.add_binary("s_1", 1);
  m.add_row({{a, 1}, {b, 1}}, Sense::ge, 1);
  auto r = solve_milp(m);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.objective == 1);
  CHECK(r.lower_bound == 1);

  MilpModel empty;
  for (int v = 0; v < 5; ++v) empty.add_binary("s_" + std::to_string(v), 1);
  auto e = solve_milp(empty);
  CHECK(e.objective == 0);
  CHECK(*e.assignment == Assignment(5, 0));

  MilpModel cover;
  for (int v = 0; v < 7; ++v) cover.add_binary("s_" + std::to_string(v), 1);
  cover.add_row({{0, 1}, {1, 1}}, Sense::ge, 1);
  cover.add_row({{2, 1}, {3, 1}}, Sense::ge, 1);
  cover.add_row({{4, 1}, {5, 1}, {6, 1}}, Sense::ge, 1);
  CHECK(solve_milp(cover).objective == 3);

  MilpModel bad;
  int s = bad.add_binary("s_0", 1);
  bad.add_row({{s, 1}}, Sense::ge, 1);
  bad.add_row({{s, 1}}, Sense::le, 0);
  CHECK(solve_milp(bad).status == SolveStatus::infeasible);

  MilpModel ints;
  int x = ints.add_integer("x", -5, 5, 3), y = ints.add_integer("y", 0, 10, -2);
  ints.add_row({{x, 2}, {y, 3}}, Sense::le, 7);
  ints.add_row({{x, 1}, {y, -1}}, Sense::ge, -4);
  // optimum by enumeration
  std::int64_t best = 1 << 30;
  for (int xv = -5; xv <= 5; ++xv)
    for (int yv = 0; yv <= 10; ++yv)
      if (2 * xv + 3 * yv <= 7 && xv - yv >= -4) best = std::min<std::int64_t>(best, 3 * xv - 2 * yv);
  CHECK(solve_milp(ints).objective == best);
}

TEST_CASE("internal solver matches exhaustive enumeration") {
  int infeasible = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    MilpModel m = oracle::random_binary_model(seed, 4 + static_cast<int>(seed % 11), 3 + static_cast<int>(seed % 7));
    auto expected = oracle::milp_optimum(m);
    auto r = solve_milp(m);
    if (!expected) {
      ++infeasible;
      CHECK(r.status == SolveStatus::infeasible);
      continue;
    }
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.objective == expected);
    CHECK(m.feasible(*r.assignment));
  }
  CHECK(infeasible < 200);
}

TEST_CASE("solve options") {
  MilpModel m;
  for (int v = 0; v < 6; ++v) m.add_binary("s_" + std::to_string(v), 1);
  m.add_row({{0, 1}, {1, 1}, {2, 1}}, Sense::ge, 2);
  SolveOptions o;
  o.hint = Assignment{1, 1, 0, 0, 0, 0};
  o.known_lower_bound = 2;
  auto r = solve_milp(m, {}, o);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(*r.assignment == *o.hint);
  CHECK(r.stats.get("nodes") == 0);

  SolveOptions bad_hint;
  bad_hint.hint = Assignment(6, 0);
  CHECK(solve_milp(m, {}, bad_hint).objective == 2);
}

TEST_CASE("internal solver timeout keeps a valid bound") {
  Graph g = load_graph(std::filesystem::path(ZF_DATA_DIR) / "ieee57.el");
  auto forts = std::vector<VertexSet>{};
  InfectionModel im = build_infection_model(g, g.order() - 1);
  SolveOptions o;
  o.time_limit_s = 0.2;
  auto r = solve_milp(im.model, {}, o);
  if (r.status == SolveStatus::timeout) {
    CHECK(r.lower_bound <= 9);
    if (r.objective) CHECK(*r.objective >= 9);
  } else {
    CHECK(r.objective == 9);
  }
}

TEST_CASE("LP golden files") {
  const std::filesystem::path golden = std::filesystem::path(ZF_TEST_DIR) / "golden";
  MilpModel one;
  one.add_binary("x", 1);
  one.add_row({{0, 1}}, Sense::ge, 1, "c1");
  CHECK(format_lp(one) == slurp(golden / "one_var.lp"));

  std::vector<VertexSet> seeds;
  for (const VertexSet& f : enumerate_forts(gen_path(3)))
    if (f.size() < 3) seeds.push_back(f);
  CHECK(format_lp(build_fort_cover_master(gen_path(3), seeds).model) == slurp(golden / "p3_master.lp"));
  CHECK(format_lp(build_infection_model(gen_path(3), 2).model) == slurp(golden / "p3_infection.lp"));

  auto dir = scratch_dir();
  auto model = build_infection_model(gen_cycle(7), 6).model;
  export_lp(model, dir / "a.lp");
  export_lp(model, dir / "b.lp");
  CHECK(slurp(dir / "a.lp") == slurp(dir / "b.lp"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("LP lines are wrapped") {
  MilpModel m;
  std::vector<Term> t;
  for (int v = 0; v < 60; ++v) t.push_back({m.add_binary("long_variable_name_" + std::to_string(v), 1), 1});
  m.add_row(t, Sense::ge, 1, "wide");
  std::istringstream in(format_lp(m));
  std::string line;
  while (std::getline(in, line)) CHECK(line.size() <= 78);
}

TEST_CASE("solution parser") {
  MilpModel m;
  m.add_binary("a");
  m.add_integer("b", 2, 5);
  auto p = parse_solution("# status optimal\n# objective 3\n# bound 3\na 1\nb 3.0000001\n", m);
  CHECK(p.status == "optimal");
  CHECK(p.objective == doctest::Approx(3));
  CHECK(p.bound == doctest::Approx(3));
  CHECK(*p.assignment == Assignment{1, 3});
  auto q = parse_solution("#status infeasible\n", m);
  CHECK(q.status == "infeasible");
  CHECK_FALSE(q.assignment);
  CHECK(*parse_solution("a 1\n", m).assignment == Assignment{1, 2});
  CHECK_THROWS_AS(parse_solution("c 1\n", m), BackendError);
  CHECK_THROWS_AS(parse_solution("a\n", m), BackendError);
  CHECK_THROWS_AS(parse_solution("a one\n", m), BackendError);
}

TEST_CASE("separation driver") {
  Graph g = gen_star(4);
  FortCoverModel fc = build_fort_cover_master(g, {});
  std::vector<SeparationCallback> cbs{[&](const Assignment& a) -> std::vector<Constraint> {
    VertexSet s(4);
    for (Vertex v = 0; v < 4; ++v)
      if (a[fc.s[v]]) s.insert(v);
    auto f = closure_complement_fort(g, s);
    if (!f) return {};
    return {fort_row(fc.s, *f)};
  }};
  SeparationOptions restart;
  restart.lazy = false;
  auto r = solve_with_separation(fc.model, cbs, {}, restart);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.objective == 2);
  CHECK(r.rows_added == fc.model.num_constraints());
  CHECK(std::is_sorted(r.trajectory.begin(), r.trajectory.end()));
  CHECK(r.trajectory.front() == 0);
  CHECK(r.iterations == r.rows_added + 1);

  FortCoverModel fresh = build_fort_cover_master(g, {});
  fc.s = fresh.s;
  auto lazy = solve_with_separation(fresh.model, cbs);
  CHECK(lazy.status == SolveStatus::optimal);
  CHECK(lazy.objective == 2);
  CHECK(lazy.iterations == 1);
  CHECK(lazy.rows_added == fresh.model.num_constraints());
  CHECK(lazy.stats.get("master_lazy_rows") == lazy.rows_added);

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph h = oracle::random_graph(seed, 3, 10);
    for (bool use_lazy : {false, true}) {
      FortCoverModel master = build_fort_cover_master(h, {});
      auto cb = [&](const Assignment& a) -> std::vector<Constraint> {
        VertexSet s(h.order());
        for (Vertex v = 0; v < h.order(); ++v)
          if (a[master.s[v]]) s.insert(v);
        auto f = greedy_minimal_fort(h, s);
        if (!f) return {};
        return {fort_row(master.s, *f)};
      };
      SeparationOptions so;
      so.lazy = use_lazy;
      auto res = solve_with_separation(master.model, {cb}, {}, so);
      CHECK(res.objective == oracle::zero_forcing_number(h));
    }
  }

  MilpModel cover = oracle::random_binary_model(3, 10, 6);
  auto direct = solve_milp(cover);
  auto looped = solve_with_separation(cover, {[](const Assignment&) { return std::vector<Constraint>{}; }});
  CHECK(looped.status == direct.status);
  CHECK(looped.objective == direct.objective);
  CHECK(looped.iterations == 1);

  MilpModel m;
  int x = m.add_binary("x", 1);
  auto useless = [&](const Assignment&) { return std::vector<Constraint>{{{{x, 1}}, Sense::ge, 0, "slack"}}; };
  CHECK_THROWS_AS(solve_with_separation(m, {useless}), std::logic_error);
}

TEST_CASE("external backend plumbing") {
  auto dir = scratch_dir();
  MilpModel m;
  int a = m.add_binary("s_0", 1), b = m.add_binary("s_1", 1);
  m.add_row({{a, 1}, {b, 1}}, Sense::ge, 1);

  ExternalSolverConfig fake;
  fake.work_dir = dir;
  fake.command = "printf '# status optimal\\ns_0 0\\ns_1 1\\n' > {sol_path}";
  auto r = solve_milp(m, Backend::external_backend(fake));
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.objective == 1);
  CHECK(std::filesystem::is_empty(dir));

  ExternalSolverConfig wrong = fake;
  wrong.command = "printf '# status optimal\\ns_0 0\\ns_1 0\\n' > {sol_path}";
  CHECK_THROWS_AS(solve_milp(m, Backend::external_backend(wrong)), BackendError);

  ExternalSolverConfig failing = fake;
  failing.command = "echo solver exploded >&2; exit 3";
  try {
    solve_milp(m, Backend::external_backend(failing));
    FAIL("expected BackendError");
  } catch (const BackendError& e) {
    CHECK(std::string(e.what()).find("solver exploded") != std::string::npos);
  }

  ExternalSolverConfig infeasible = fake;
  infeasible.command = "echo '# status infeasible' > {sol_path}";
  CHECK(solve_milp(m, Backend::external_backend(infeasible)).status == SolveStatus::infeasible);

  ExternalSolverConfig keep = fake;
  keep.keep_files = true;
  keep.command = "cp {lp_path} {sol_path}.lp && printf 's_0 1\\n' > {sol_path}";
  CHECK(solve_milp(m, Backend::external_backend(keep)).objective == 1);
  bool found_lp = false;
  for (auto& e : std::filesystem::directory_iterator(dir)) found_lp |= e.path().extension() == ".lp";
  CHECK(found_lp);

  CHECK_THROWS_AS(solve_milp(m, Backend::external_backend({})), BackendError);
  std::filesystem::remove_all(dir);
}
