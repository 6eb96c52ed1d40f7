#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "zf/combinatorial.hpp"
#include "zf/forcing.hpp"
#include "zf/models.hpp"

using namespace zf;

namespace {

Graph data(const char* name) { return load_graph(std::filesystem::path(ZF_DATA_DIR) / name); }

Graph from_edges(int n, std::vector<Edge> edges) { return Graph(n, edges); }

void check_value(const SolveOutcome& o, std::int64_t expected) {
  REQUIRE(o.optimal());
  CHECK(o.best_value == expected);
  CHECK(o.lower_bound == expected);
  REQUIRE(o.incumbent);
  CHECK(o.incumbent->size() == expected);
}

}  // namespace

TEST_CASE("infection model shape") {
  Graph g = gen_random_connected(9, 0.3, 4);
  InfectionModel im = build_infection_model(g, 8);
  int order_rows = 0;
  for (Vertex u = 0; u < g.order(); ++u) order_rows += g.degree(u) * (g.degree(u) - 1);
  CHECK(im.model.num_constraints() == g.order() + 2 * g.size() + order_rows);
  CHECK(im.model.num_variables() == 2 * g.order() + 2 * g.size());
  CHECK_THROWS_AS(build_infection_model(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_infection_model(g, 9), std::invalid_argument);
}

TEST_CASE("infection model values") {
  check_value(solve_infection(gen_path(5)), 1);
  check_value(solve_infection(gen_star(31)), 29);
  check_value(solve_infection(gen_path(1)), 1);
  check_value(solve_bounded_timestep(gen_path(5), 1), 3);
  check_value(solve_bounded_timestep(gen_path(5), 4), 1);
  check_value(solve_bounded_timestep(gen_path(5), 40), 1);
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Graph g = oracle::random_graph(seed, 2, 8);
    for (int T : {1, 2, 4}) {
      auto o = solve_bounded_timestep(g, T);
      check_value(o, oracle::bounded_forcing_number(g, T));
      CHECK(propagation_time(g, *o.incumbent) <= T);
    }
  }
}

TEST_CASE("fort cover master") {
  Graph p3 = gen_path(3);
  auto none = build_fort_cover_master(p3, {});
  auto r = milp::solve_milp(none.model);
  CHECK(r.objective == 0);
  CHECK(*r.assignment == milp::Assignment(3, 0));

  auto all = enumerate_forts(p3);
  auto full = build_fort_cover_master(p3, all);
  CHECK(milp::solve_milp(full.model).objective == 1);

  std::vector<VertexSet> two{VertexSet(6, {0, 2, 4}), VertexSet(6, {1, 3, 5})};
  REQUIRE(is_fort(gen_cycle(6), two[0]));
  CHECK(milp::solve_milp(build_fort_cover_master(gen_cycle(6), two).model).objective == 2);

  std::vector<VertexSet> bad{VertexSet(3, {2})};
  CHECK_THROWS_AS(build_fort_cover_master(p3, bad), std::invalid_argument);
}

TEST_CASE("minimum fort IP") {
  Graph star = gen_star(4);
  auto f = find_min_fort_ip(star, compute_closure(star, VertexSet(4, {0})));
  REQUIRE(f);
  CHECK(f->size() == 2);
  CHECK(is_fort(star, *f));
  CHECK_FALSE(f->contains(0));
  auto c4 = find_min_fort_ip(gen_cycle(4), VertexSet(4));
  REQUIRE(c4);
  CHECK(c4->size() == 2);
  CHECK_FALSE(find_min_fort_ip(gen_cycle(4), VertexSet::full(4)));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Graph g = oracle::random_graph(seed, 2, 10);
    Rng rng(seed);
    VertexSet avoid(g.order());
    for (Vertex v = 0; v < g.order(); ++v)
      if (rng.below(4) == 0) avoid.insert(v);
    auto got = find_min_fort_ip(g, avoid);
    int best = g.order() + 1;
    for (const VertexSet& x : oracle::all_forts(g))
      if (!x.intersects(avoid)) best = std::min(best, x.size());
    if (best > g.order()) {
      CHECK_FALSE(got);
      continue;
    }
    REQUIRE(got);
    CHECK(got->size() == best);
    CHECK(oracle::is_fort(g, *got));
    CHECK_FALSE(got->intersects(avoid));
  }
}

TEST_CASE("disjoint minimum forts") {
  Graph g = data("karate.el");
  auto forts = disjoint_min_forts(g);
  CHECK(forts.size() >= 2);
  VertexSet used(g.order());
  for (const VertexSet& f : forts) {
    CHECK(is_fort(g, f));
    CHECK_FALSE(f.intersects(used));
    used |= f;
  }
  CHECK(static_cast<int>(forts.size()) <= 13);
}

TEST_CASE("facet check") {
  Graph c4 = gen_cycle(4);
  auto fc = check_facet(c4, VertexSet(4, {0, 2}), FacetMode::full);
  CHECK(fc.verdict == FacetVerdict::facet);
  CHECK(check_facet(c4, VertexSet(4, {0, 2}), FacetMode::off).verdict == FacetVerdict::unknown);
  auto sv = check_facet(c4, VertexSet(4, {0, 2}), FacetMode::simplified).verdict;
  CHECK(sv != FacetVerdict::not_facet);

  Graph g = from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  VertexSet f(4, {0, 1, 3});
  auto nf = check_facet(g, f, FacetMode::full);
  REQUIRE(nf.verdict == FacetVerdict::not_facet);
  CHECK(nf.v == 2);
  VertexSet common = f;
  for (const VertexSet& a : nf.witnesses) {
    CHECK(is_fort(g, a));
    CHECK(a.contains(nf.v));
    CHECK(a.is_subset_of(f | VertexSet(4, {nf.v})));
    common &= a;
  }
  CHECK(common.empty());
  auto [c1, c2] = facet_conditions_oracle(g, enumerate_forts(g), f);
  CHECK_FALSE((c1 && c2));
}

TEST_CASE("facet model symmetry breaking needs one copy per member") {
  CHECK_THROWS_AS(build_facet_model(gen_cycle(4), VertexSet(4, {0, 2}), 3, true), std::invalid_argument);
  auto fm = build_facet_model(gen_cycle(4), VertexSet(4, {0, 2}), 2, true);
  CHECK(fm.x[0] == -1);
  CHECK(fm.x[1] >= 0);
  CHECK(fm.z.size() == 2);
}

TEST_CASE("Chvatal-Gomory cut") {
  Graph g = from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  VertexSet f(4, {0, 1, 3});
  std::vector<VertexSet> w{VertexSet(4, {1, 2}), VertexSet(4, {0, 2, 3})};
  CoverRow cut = cg_cut_from_witness(g, f, 2, w);
  CHECK(cut.support == VertexSet::full(4));
  CHECK(cut.rhs == 2);
  for (const VertexSet& z : oracle::all_zero_forcing_sets(g)) CHECK((z & cut.support).size() >= cut.rhs);

  CHECK_THROWS_AS(cg_cut_from_witness(g, f, 0, w), std::invalid_argument);
  CHECK_THROWS_AS(cg_cut_from_witness(g, f, 2, {}), std::invalid_argument);
  CHECK_THROWS_AS(cg_cut_from_witness(g, f, 2, {VertexSet(4, {1, 2}), VertexSet(4, {1, 2})}), std::invalid_argument);
  CHECK_THROWS_AS(cg_cut_from_witness(g, f, 2, {VertexSet(4, {2})}), std::invalid_argument);
  CHECK_THROWS_AS(cg_cut_from_witness(g, VertexSet(4, {2}), 0, w), std::invalid_argument);
}

TEST_CASE("a,b-separators") {
  Graph p3 = gen_path(3);
  auto s = find_minimal_ab_separator(p3, VertexSet(3, {0, 2}));
  REQUIRE(s);
  CHECK(s->a == 0);
  CHECK(s->b == 2);
  CHECK(s->separator == VertexSet(3, {1}));
  auto c4 = find_minimal_ab_separator(gen_cycle(4), VertexSet(4, {0, 2}));
  REQUIRE(c4);
  CHECK(c4->separator == VertexSet(4, {1, 3}));
  CHECK_FALSE(find_minimal_ab_separator(p3, VertexSet(3, {0, 1})));
  CHECK_FALSE(find_minimal_ab_separator(p3, VertexSet(3)));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Graph g = oracle::random_graph(seed, 3, 16);
    Rng rng(seed * 3 + 1);
    VertexSet z(g.order());
    for (Vertex v = 0; v < g.order(); ++v)
      if (rng.below(3) == 0) z.insert(v);
    auto sep = find_minimal_ab_separator(g, z);
    REQUIRE(sep.has_value() == (g.components(z).size() >= 2));
    if (!sep) continue;
    CHECK(z.contains(sep->a));
    CHECK(z.contains(sep->b));
    CHECK_FALSE(sep->separator.intersects(z));
    CHECK(oracle::separates(g, sep->a, sep->b, sep->separator));
    sep->separator.for_each([&](Vertex c) {
      VertexSet smaller = sep->separator;
      smaller.erase(c);
      CHECK_FALSE(oracle::separates(g, sep->a, sep->b, smaller));
    });
  }
}

TEST_CASE("MTZ master") {
  Graph g = gen_random_connected(8, 0.3, 2);
  MtzModel mm = build_mtz_master(g, {});
  const int n = g.order(), m = g.size();
  CHECK(mm.model.num_variables() == n + (2 * m + 2 * n + 1) + (n + 2));
  CHECK_THROWS_AS(build_mtz_master(gen_empty(3), {}), std::invalid_argument);

  FortCoverOptions o;
  o.connectivity = Connectivity::mtz;
  check_value(solve_fort_cover(gen_path(3), o), 1);
  check_value(solve_fort_cover(gen_cycle(6), o), 2);
  check_value(solve_fort_cover(data("ieee14.el"), o), 4);
}

TEST_CASE("extended fort cover") {
  CHECK(border_size(gen_cycle(4), *find_min_border_fort(gen_cycle(4), VertexSet(4))) == 0);
  auto c4 = find_min_border_fort(gen_cycle(4), VertexSet(4, {0}));
  REQUIRE(c4);
  CHECK(border_size(gen_cycle(4), *c4) == 2);
  CHECK(is_fort(gen_cycle(4), *c4));
  CHECK_FALSE(find_min_border_fort(gen_cycle(4), VertexSet::full(4)));
  CHECK_THROWS_AS(build_extended_master(gen_empty(2), {}), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = oracle::random_graph(seed, 3, 10);
    Rng rng(seed);
    VertexSet avoid(g.order());
    for (Vertex v = 0; v < g.order(); ++v)
      if (rng.below(5) == 0) avoid.insert(v);
    auto f = find_min_border_fort(g, avoid);
    int best = g.order() + 1;
    for (const VertexSet& x : oracle::all_forts(g))
      if (!x.intersects(avoid)) best = std::min(best, border_size(g, x));
    if (best > g.order()) {
      CHECK_FALSE(f);
      continue;
    }
    REQUIRE(f);
    CHECK(oracle::is_fort(g, *f));
    CHECK_FALSE(f->intersects(avoid));
    CHECK(border_size(g, *f) == best);
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = gen_cubic(12 + 2 * static_cast<int>(seed), seed);
    auto o = solve_extended_cover(g);
    check_value(o, *wavefront(g).best_value);
    CHECK(is_zero_forcing_set(g, *o.incumbent));
  }
}

TEST_CASE("fort cover strategies and facet modes agree") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Graph g = gen_cubic(10 + 2 * static_cast<int>(seed), seed + 11);
    const std::int64_t z = *wavefront(g).best_value;
    for (auto s : {FortStrategy::min_fort_ip, FortStrategy::closure_complement, FortStrategy::greedy_minimal})
      for (auto f : {FacetMode::off, FacetMode::simplified, FacetMode::full}) {
        FortCoverOptions o;
        o.strategy = s;
        o.facet = f;
        auto r = solve_fort_cover(g, o);
        check_value(r, z);
        CHECK(is_zero_forcing_set(g, *r.incumbent));
      }
    FortCoverOptions plain;
    plain.preseed = false;
    check_value(solve_fort_cover(g, plain), z);
  }
}

TEST_CASE("fort cover on named instances") {
  check_value(solve_fort_cover(data("karate.el")), 13);
  FortCoverOptions o;
  o.connectivity = Connectivity::ab_separator;
  auto zc = solve_fort_cover(data("karate.el"), o);
  check_value(zc, 14);
  CHECK(data("karate.el").induces_connected(*zc.incumbent));
  check_value(solve_fort_cover(data("ieee14.el"), o), 4);
}

TEST_CASE("degenerate graphs") {
  check_value(solve_fort_cover(Graph{}), 0);
  check_value(solve_fort_cover(gen_path(1)), 1);
  check_value(solve_fort_cover(gen_empty(3)), 3);
  FortCoverOptions o;
  o.connectivity = Connectivity::ab_separator;
  CHECK(solve_fort_cover(gen_empty(3), o).status == SolveStatus::infeasible);
}

TEST_CASE("fort cover timeout reports bounds") {
  FortCoverOptions o;
  o.ip.time_limit_s = 0.05;
  o.strategy = FortStrategy::closure_complement;
  Graph g = data("ieee57.el");
  auto r = solve_fort_cover(g, o);
  if (r.status == SolveStatus::timeout) {
    CHECK(r.lower_bound <= 9);
    REQUIRE(r.incumbent);
    CHECK(is_zero_forcing_set(g, *r.incumbent));
    CHECK(*r.best_value >= 9);
  }
}

TEST_CASE("per-component separators") {
  CHECK(component_separators(gen_path(3), VertexSet(3, {0, 1})).empty());
  auto p5 = component_separators(gen_path(5), VertexSet(5, {0, 2, 4}));
  REQUIRE(p5.size() == 3);
  for (const AbSeparator& sep : p5) CHECK(sep.separator.size() == 1);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = oracle::random_graph(seed + 77, 4, 16);
    Rng rng(seed);
    VertexSet z(g.order());
    for (Vertex v = 0; v < g.order(); ++v)
      if (rng.below(3) == 0) z.insert(v);
    auto seps = component_separators(g, z);
    CHECK(seps.size() == (g.components(z).size() >= 2 ? g.components(z).size() : 0));
    for (const AbSeparator& sep : seps) {
      CHECK(z.contains(sep.a));
      CHECK(z.contains(sep.b));
      CHECK_FALSE(sep.separator.intersects(z));
      CHECK(oracle::separates(g, sep.a, sep.b, sep.separator));
      sep.separator.for_each([&](Vertex c) {
        VertexSet smaller = sep.separator;
        smaller.erase(c);
        CHECK_FALSE(oracle::separates(g, sep.a, sep.b, smaller));
      });
    }
  }
}
