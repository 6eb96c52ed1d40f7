#include "zf/models.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "zf/forcing.hpp"

namespace zf {

using milp::Constraint;
using milp::MilpModel;
using milp::Sense;
using milp::Term;

namespace {

std::string vname(const char* prefix, int a) { return std::string(prefix) + "_" + std::to_string(a); }
std::string vname(const char* prefix, int a, int b) { return vname(prefix, a) + "_" + std::to_string(b); }

// x_w - x_v + sum_{a in N(w) \ {v}} x_a >= 0 for every v and w in N(v).
void add_fort_rows(MilpModel& m, const Graph& g, const std::vector<int>& x, const std::string& prefix) {
  for (Vertex v = 0; v < g.order(); ++v)
    for (Vertex w : g.neighbors(v)) {
      std::vector<Term> t{{x[w], 1}, {x[v], -1}};
      for (Vertex a : g.neighbors(w))
        if (a != v) t.push_back({x[a], 1});
      m.add_row(std::move(t), Sense::ge, 0, prefix + "_" + std::to_string(v) + "_" + std::to_string(w));
    }
}

VertexSet chosen(const std::vector<int>& vars, const milp::Assignment& a, int n) {
  VertexSet s(n);
  for (Vertex v = 0; v < n; ++v)
    if (vars[v] >= 0 && a[vars[v]] == 1) s.insert(v);
  return s;
}

}  // namespace

// --- infection ---------------------------------------------------------------------

InfectionModel build_infection_model(const Graph& g, int t_max) {
  const int n = g.order();
  if (t_max < 1 || t_max > n - 1)
    throw std::invalid_argument("build_infection_model: t_max must be in [1, n-1], got " + std::to_string(t_max));
  InfectionModel im;
  im.t_max = t_max;
  MilpModel& m = im.model;
  for (Vertex v = 0; v < n; ++v) im.s.push_back(m.add_binary(vname("s", v), 1, 0));
  for (Vertex v = 0; v < n; ++v) im.x.push_back(m.add_integer(vname("x", v), 0, t_max, 0, 2));
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) {
      im.arcs.emplace_back(u, v);
      im.y.push_back(m.add_binary(vname("y", u, v), 0, 1));
    }
  std::vector<std::vector<int>> into(static_cast<std::size_t>(n));
  for (std::size_t k = 0; k < im.arcs.size(); ++k) into[im.arcs[k].second].push_back(im.y[k]);
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Term> t{{im.s[v], 1}};
    for (int y : into[v]) t.push_back({y, 1});
    m.add_row(std::move(t), Sense::eq, 1, vname("forced", v));
  }
  const std::int64_t big = t_max + 1;
  for (std::size_t k = 0; k < im.arcs.size(); ++k) {
    auto [u, v] = im.arcs[k];
    m.add_row({{im.x[u], 1}, {im.x[v], -1}, {im.y[k], big}}, Sense::le, t_max, vname("time", u, v));
  }
  for (std::size_t k = 0; k < im.arcs.size(); ++k) {
    auto [u, v] = im.arcs[k];
    for (Vertex w : g.neighbors(u))
      if (w != v)
        m.add_row({{im.x[w], 1}, {im.x[v], -1}, {im.y[k], big}}, Sense::le, t_max,
                  vname("order", u, v) + "_" + std::to_string(w));
  }
  return im;
}

namespace {

// Feasible start for the infection model: shrink V greedily while the
// propagation time stays within t_max, then encode the forcing trace.
milp::Assignment infection_hint(const Graph& g, const InfectionModel& im) {
  const int n = g.order();
  VertexSet s = g.vertices();
  for (Vertex v = 0; v < n; ++v) {
    s.erase(v);
    if (propagation_time(g, s) > im.t_max) s.insert(v);
  }
  auto [cl, trace] = compute_closure_traced(g, s);
  milp::Assignment a(static_cast<std::size_t>(im.model.num_variables()), 0);
  for (Vertex v = 0; v < n; ++v) {
    a[im.s[v]] = s.contains(v) ? 1 : 0;
    a[im.x[v]] = trace.rounds[v];
  }
  for (auto [u, v] : trace.forces)
    for (std::size_t k = 0; k < im.arcs.size(); ++k)
      if (im.arcs[k] == Edge{u, v}) a[im.y[k]] = 1;
  return a;
}

SolveOutcome infection_outcome(const Graph& g, const InfectionModel& im, const milp::MilpResult& r) {
  SolveOutcome out;
  out.status = r.status;
  out.lower_bound = r.lower_bound;
  out.stats = r.stats;
  if (r.assignment) {
    VertexSet s = chosen(im.s, *r.assignment, g.order());
    if (propagation_time(g, s) > im.t_max)
      throw std::logic_error("infection model returned a set that does not force within t_max");
    out.best_value = static_cast<std::int64_t>(s.size());
    out.incumbent = s;
  }
  return out;
}

SolveOutcome trivial_outcome(const Graph& g) {
  SolveOutcome out;
  out.status = SolveStatus::optimal;
  out.best_value = g.order();
  out.lower_bound = g.order();
  out.incumbent = g.vertices();
  return out;
}

}  // namespace

SolveOutcome solve_bounded_timestep(const Graph& g, int T, const IpOptions& opts) {
  if (T < 1) throw std::invalid_argument("solve_bounded_timestep: T must be >= 1");
  if (g.order() <= 1) return trivial_outcome(g);
  InfectionModel im = build_infection_model(g, std::min(T, g.order() - 1));
  milp::SolveOptions so;
  so.time_limit_s = opts.time_limit_s;
  so.hint = infection_hint(g, im);
  return infection_outcome(g, im, milp::solve_milp(im.model, opts.backend, so));
}

SolveOutcome solve_infection(const Graph& g, const IpOptions& opts) {
  if (g.order() <= 1) return trivial_outcome(g);
  return solve_bounded_timestep(g, g.order() - 1, opts);
}

// --- fort cover ------------------------------------------------------------------

Constraint fort_row(const std::vector<int>& s, const VertexSet& fort, const std::string& name) {
  Constraint c;
  fort.for_each([&](Vertex v) { c.terms.push_back({s[v], 1}); });
  c.sense = Sense::ge;
  c.rhs = 1;
  c.name = name;
  return c;
}

FortCoverModel build_fort_cover_master(const Graph& g, std::span<const VertexSet> seed_forts) {
  FortCoverModel fc;
  for (Vertex v = 0; v < g.order(); ++v) fc.s.push_back(fc.model.add_binary(vname("s", v), 1));
  int k = 0;
  for (const VertexSet& f : seed_forts) {
    if (!is_fort(g, f)) throw std::invalid_argument("build_fort_cover_master: seed " + f.to_string() + " is not a fort");
    fc.model.add_constraint(fort_row(fc.s, f, vname("fort", k++)));
  }
  return fc;
}

namespace {

MilpModel fort_finding_model(const Graph& g, const VertexSet& avoid, std::vector<int>& x) {
  MilpModel m;
  const int n = g.order();
  x.clear();
  for (Vertex v = 0; v < n; ++v) x.push_back(m.add_binary(vname("x", v), 1));
  std::vector<Term> all;
  for (Vertex v = 0; v < n; ++v) all.push_back({x[v], 1});
  m.add_row(all, Sense::ge, 1, "nonempty");
  add_fort_rows(m, g, x, "fort");
  avoid.for_each([&](Vertex v) { m.add_row({{x[v], 1}}, Sense::eq, 0, vname("avoid", v)); });
  return m;
}

std::optional<VertexSet> fort_from(const Graph& g, const std::vector<int>& x, const milp::MilpResult& r) {
  if (!r.assignment) return std::nullopt;
  VertexSet f = chosen(x, *r.assignment, g.order());
  if (!is_fort(g, f)) throw std::logic_error("fort model returned a non-fort " + f.to_string());
  return f;
}

}  // namespace

std::optional<VertexSet> find_min_fort_ip(const Graph& g, const VertexSet& avoid, const IpOptions& opts) {
  auto start = greedy_minimal_fort(g, avoid);
  if (!start) return std::nullopt;  // cl(avoid) = V leaves no room for a fort
  std::vector<int> x;
  MilpModel m = fort_finding_model(g, avoid, x);
  milp::SolveOptions so;
  so.time_limit_s = opts.time_limit_s;
  so.known_lower_bound = 1;
  milp::Assignment hint(static_cast<std::size_t>(m.num_variables()), 0);
  start->for_each([&](Vertex v) { hint[x[v]] = 1; });
  so.hint = hint;
  milp::MilpResult r = milp::solve_milp(m, opts.backend, so);
  if (r.status == SolveStatus::infeasible) return std::nullopt;
  if (auto f = fort_from(g, x, r)) return f;
  return start;
}

std::vector<VertexSet> disjoint_min_forts(const Graph& g, const IpOptions& opts) {
  Deadline deadline(opts.time_limit_s);
  std::vector<VertexSet> forts;
  VertexSet used(g.order());
  while (!deadline.expired()) {
    IpOptions sub = opts;
    sub.time_limit_s = deadline.limited() ? std::max(deadline.remaining(), 1e-3) : 0.0;
    auto f = find_min_fort_ip(g, used, sub);
    if (!f || f->intersects(used)) break;
    used |= *f;
    forts.push_back(std::move(*f));
  }
  return forts;
}

// --- facet checking ----------------------------------------------------------------

FacetModel build_facet_model(const Graph& g, const VertexSet& fort, int copies, bool symmetry_breaking) {
  const int n = g.order();
  const std::vector<Vertex> members = fort.to_vector();
  if (symmetry_breaking && copies != static_cast<int>(members.size()))
    throw std::invalid_argument("build_facet_model: symmetry breaking needs one copy per fort member");
  FacetModel fm;
  MilpModel& m = fm.model;
  fm.x.assign(static_cast<std::size_t>(n), -1);
  for (Vertex v = 0; v < n; ++v)
    if (!fort.contains(v)) fm.x[v] = m.add_binary(vname("x", v), 0, 0);
  for (int i = 0; i < copies; ++i) fm.y.push_back(m.add_binary(vname("y", i), 1, 2));
  fm.z.assign(static_cast<std::size_t>(copies), {});
  for (int i = 0; i < copies; ++i)
    for (Vertex w = 0; w < n; ++w) fm.z[i].push_back(m.add_binary(vname("zf", i, w), 0, 1));

  std::vector<Term> pick;
  for (Vertex v = 0; v < n; ++v)
    if (fm.x[v] >= 0) pick.push_back({fm.x[v], 1});
  m.add_row(pick, Sense::eq, 1, "pick");
  for (int i = 0; i < copies; ++i) {
    std::vector<Term> t{{fm.y[i], -1}};
    for (Vertex v = 0; v < n; ++v)
      if (fm.x[v] >= 0) t.push_back({fm.z[i][v], 1});
    m.add_row(std::move(t), Sense::eq, 0, vname("copy", i));
    for (Vertex v = 0; v < n; ++v)
      if (fm.x[v] >= 0) m.add_row({{fm.z[i][v], 1}, {fm.x[v], -1}}, Sense::le, 0, vname("link", i, v));
  }
  for (Vertex w : members) {
    std::vector<Term> t;
    for (int i = 0; i < copies; ++i) {
      t.push_back({fm.z[i][w], 1});
      t.push_back({fm.y[i], -1});
    }
    m.add_row(std::move(t), Sense::le, -1, vname("miss", w));
  }
  for (int i = 0; i < copies; ++i) add_fort_rows(m, g, fm.z[i], vname("fort", i));
  for (int i = 0; i < copies; ++i)
    for (Vertex w = 0; w < n; ++w) m.add_row({{fm.z[i][w], 1}, {fm.y[i], -1}}, Sense::le, 0, vname("used", i, w));
  if (symmetry_breaking)
    for (int i = 0; i < copies; ++i) m.fix(fm.z[i][members[i]], 0);
  return fm;
}

FacetCheck check_facet(const Graph& g, const VertexSet& fort, FacetMode mode, const IpOptions& opts) {
  FacetCheck res;
  if (mode == FacetMode::off) return res;
  const bool full = mode == FacetMode::full;
  const int copies = full ? static_cast<int>(fort.size()) : 2;
  FacetModel fm = build_facet_model(g, fort, copies, full);
  milp::SolveOptions so;
  so.time_limit_s = opts.time_limit_s;
  milp::MilpResult r = milp::solve_milp(fm.model, opts.backend, so);
  if (r.status == SolveStatus::infeasible) {
    res.verdict = full ? FacetVerdict::facet : FacetVerdict::unknown;
    return res;
  }
  if (!r.assignment) return res;
  const milp::Assignment& a = *r.assignment;
  for (Vertex v = 0; v < g.order(); ++v)
    if (fm.x[v] >= 0 && a[fm.x[v]] == 1) res.v = v;
  for (int i = 0; i < copies; ++i) {
    if (a[fm.y[i]] != 1) continue;
    VertexSet w = chosen(fm.z[i], a, g.order());
    if (std::find(res.witnesses.begin(), res.witnesses.end(), w) == res.witnesses.end()) res.witnesses.push_back(w);
  }
  std::sort(res.witnesses.begin(), res.witnesses.end());
  res.verdict = FacetVerdict::not_facet;
  return res;
}

CoverRow cg_cut_from_witness(const Graph& g, const VertexSet& fort, Vertex v, const std::vector<VertexSet>& witnesses) {
  const int n = g.order();
  if (!is_fort(g, fort)) throw std::invalid_argument("cg_cut_from_witness: " + fort.to_string() + " is not a fort");
  if (v < 0 || v >= n || fort.contains(v)) throw std::invalid_argument("cg_cut_from_witness: v must lie outside the fort");
  if (witnesses.empty()) throw std::invalid_argument("cg_cut_from_witness: no witnesses");
  VertexSet allowed = fort;
  allowed.insert(v);
  VertexSet common = fort;
  for (const VertexSet& a : witnesses) {
    if (!is_fort(g, a)) throw std::invalid_argument("cg_cut_from_witness: witness " + a.to_string() + " is not a fort");
    if (!a.contains(v)) throw std::invalid_argument("cg_cut_from_witness: witness misses v");
    if (!a.is_subset_of(allowed)) throw std::invalid_argument("cg_cut_from_witness: witness leaves F u {v}");
    common &= a;
  }
  if (!common.empty())
    throw std::invalid_argument("cg_cut_from_witness: witnesses share " + common.to_string() + " inside the fort");
  // Sum the p+1 cover rows, divide by p, round up.
  const std::int64_t p = static_cast<std::int64_t>(witnesses.size());
  std::vector<std::int64_t> coef(static_cast<std::size_t>(n), 0);
  fort.for_each([&](Vertex u) { ++coef[u]; });
  for (const VertexSet& a : witnesses) a.for_each([&](Vertex u) { ++coef[u]; });
  CoverRow row{VertexSet(n), (p + 1 + p - 1) / p};
  for (Vertex u = 0; u < n; ++u) {
    std::int64_t c = (coef[u] + p - 1) / p;
    if (c > 1) throw std::logic_error("cg_cut_from_witness: rounded coefficient exceeds 1");
    if (c == 1) row.support.insert(u);
  }
  return row;
}

std::pair<bool, bool> facet_conditions_oracle(const Graph& g, const std::vector<VertexSet>& all_forts,
                                              const VertexSet& fort) {
  bool cond1 = true;
  for (const VertexSet& a : all_forts)
    if (a != fort && a.is_subset_of(fort)) cond1 = false;
  bool cond2 = true;
  for (Vertex v = 0; v < g.order() && cond2; ++v) {
    if (fort.contains(v)) continue;
    VertexSet allowed = fort;
    allowed.insert(v);
    VertexSet common = fort;
    for (const VertexSet& a : all_forts)
      if (a.contains(v) && a.is_subset_of(allowed)) common &= a;
    if (common.empty()) cond2 = false;
  }
  return {cond1, cond2};
}

// --- connectivity ------------------------------------------------------------------

bool separates(const Graph& g, Vertex a, Vertex b, const VertexSet& c) {
  if (c.contains(a) || c.contains(b)) return true;
  std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
  std::vector<Vertex> stack{a};
  seen[a] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    if (u == b) return false;
    for (Vertex w : g.neighbors(u))
      if (!seen[w] && !c.contains(w)) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return true;
}

std::optional<AbSeparator> find_minimal_ab_separator(const Graph& g, const VertexSet& z) {
  auto comps = g.components(z);
  if (comps.size() < 2) return std::nullopt;
  std::stable_sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) { return x.size() > y.size(); });
  AbSeparator sep;
  sep.a = comps[0].front();
  sep.b = comps[1].front();
  if (sep.a > sep.b) std::swap(sep.a, sep.b);
  sep.separator = z.complement();
  for (Vertex c : z.complement().to_vector()) {
    sep.separator.erase(c);
    if (!separates(g, sep.a, sep.b, sep.separator)) sep.separator.insert(c);
  }
  return sep;
}

std::vector<AbSeparator> component_separators(const Graph& g, const VertexSet& z) {
  auto comps = g.components(z);
  std::vector<AbSeparator> out;
  if (comps.size() < 2) return out;
  std::stable_sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) { return x.size() > y.size(); });
  for (std::size_t i = 0; i < comps.size(); ++i) {
    VertexSet comp = VertexSet::from_range(g.order(), comps[i]);
    AbSeparator sep;
    sep.a = comps[i].front();
    sep.b = comps[i == 0 ? 1 : 0].front();
    sep.separator = g.neighborhood(comp) - comp;
    for (Vertex c : sep.separator.to_vector()) {
      sep.separator.erase(c);
      if (!separates(g, sep.a, sep.b, sep.separator)) sep.separator.insert(c);
    }
    if (sep.a > sep.b) std::swap(sep.a, sep.b);
    out.push_back(std::move(sep));
  }
  return out;
}

MtzModel build_mtz_master(const Graph& g, std::span<const VertexSet> seed_forts) {
  if (!g.is_connected()) throw std::invalid_argument("build_mtz_master: graph is disconnected");
  const int n = g.order();
  MtzModel mm;
  MilpModel& m = mm.model;
  for (Vertex v = 0; v < n; ++v) mm.s.push_back(m.add_binary(vname("s", v), 1, 0));
  int k = 0;
  for (const VertexSet& f : seed_forts) {
    if (!is_fort(g, f)) throw std::invalid_argument("build_mtz_master: seed " + f.to_string() + " is not a fort");
    m.add_constraint(fort_row(mm.s, f, vname("fort", k++)));
  }
  // arcs of E in both orientations
  std::vector<std::vector<int>> y(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
  for (Vertex i = 0; i < n; ++i)
    for (Vertex v : g.neighbors(i)) y[i][v] = m.add_binary(vname("y", i, v), 0, 1);
  std::vector<int> ya, yb;
  for (Vertex v = 0; v < n; ++v) ya.push_back(m.add_binary(vname("y_alpha", v), 0, 1));
  for (Vertex v = 0; v < n; ++v) yb.push_back(m.add_binary(vname("y_beta", v), 0, 1));
  int yab = m.add_binary("y_alpha_beta", 0, 1);
  m.fix(yab, 1);
  std::vector<int> u;
  for (Vertex v = 0; v < n; ++v) u.push_back(m.add_integer(vname("u", v), 1, n + 1, 0, 2));
  int ua = m.add_integer("u_alpha", 0, 0, 0, 2);
  int ub = m.add_integer("u_beta", 1, n + 1, 0, 2);

  std::vector<Term> root;
  for (Vertex v = 0; v < n; ++v) root.push_back({yb[v], 1});
  m.add_row(root, Sense::eq, 1, "root");
  for (Vertex v = 0; v < n; ++v) {
    std::vector<Term> t{{ya[v], 1}, {yb[v], 1}};
    for (Vertex i : g.neighbors(v)) t.push_back({y[i][v], 1});
    m.add_row(std::move(t), Sense::eq, 1, vname("indeg", v));
  }
  for (Vertex v = 0; v < n; ++v)
    for (Vertex i : g.neighbors(v)) m.add_row({{ya[v], 1}, {y[v][i], 1}}, Sense::le, 1, vname("leaf", v, i));
  for (Vertex i = 0; i < n; ++i)
    for (Vertex v : g.neighbors(i))
      m.add_row({{y[i][v], n + 1}, {u[i], 1}, {u[v], -1}, {y[v][i], n - 1}}, Sense::le, n, vname("mtz", i, v));
  for (Vertex v = 0; v < n; ++v) {
    m.add_row({{ya[v], n + 1}, {ua, 1}, {u[v], -1}}, Sense::le, n, vname("mtz_alpha", v));
    m.add_row({{yb[v], n + 1}, {ub, 1}, {u[v], -1}}, Sense::le, n, vname("mtz_beta", v));
  }
  m.add_row({{yab, n + 1}, {ua, 1}, {ub, -1}}, Sense::le, n, "mtz_alpha_beta");
  for (Vertex v = 0; v < n; ++v) m.add_row({{mm.s[v], 1}, {ya[v], 1}}, Sense::eq, 1, vname("select", v));
  return mm;
}

// --- extended fort cover -------------------------------------------------------------

ExtendedModel build_extended_master(const Graph& g, std::span<const VertexSet> seed_forts) {
  const int n = g.order();
  for (Vertex v = 0; v < n; ++v)
    if (g.degree(v) == 0) throw std::invalid_argument("build_extended_master: graph has an isolated vertex");
  ExtendedModel em;
  MilpModel& m = em.model;
  for (Vertex v = 0; v < n; ++v) em.s.push_back(m.add_binary(vname("s", v), 1, 0));
  for (Vertex v = 0; v < n; ++v) em.z.push_back(m.add_binary(vname("z", v), g.degree(v), 0));
  for (Vertex v = 0; v < n; ++v) em.neighborhood_closure.push_back(compute_closure(g, g.closed_neighborhood(v)));
  int k = 0;
  for (const VertexSet& f : seed_forts) {
    if (!is_fort(g, f)) throw std::invalid_argument("build_extended_master: seed " + f.to_string() + " is not a fort");
    m.add_constraint(extended_fort_row(em, f, vname("fort", k++)));
  }
  std::vector<Term> any;
  for (Vertex v = 0; v < n; ++v) any.push_back({em.z[v], 1});
  m.add_row(any, Sense::ge, 1, "anyz");
  for (Vertex v = 0; v < n; ++v)
    em.neighborhood_closure[v].for_each(
        [&](Vertex w) { m.add_row({{em.s[w], 1}, {em.z[v], 1}}, Sense::le, 1, vname("excl", v, w)); });
  return em;
}

Constraint extended_fort_row(const ExtendedModel& m, const VertexSet& fort, const std::string& name) {
  Constraint c = fort_row(m.s, fort, name);
  for (std::size_t w = 0; w < m.z.size(); ++w)
    if (m.neighborhood_closure[w].intersects(fort)) c.terms.push_back({m.z[w], 1});
  return c;
}

VertexSet extended_forcing_set(const Graph& g, const ExtendedModel& m, const milp::Assignment& a) {
  VertexSet d = chosen(m.s, a, g.order());
  for (Vertex w = 0; w < g.order(); ++w) {
    if (a[m.z[w]] != 1) continue;
    VertexSet nb = g.closed_neighborhood(w);
    auto nbrs = g.neighbors(w);
    if (!nbrs.empty()) nb.erase(nbrs.back());
    d |= nb;
  }
  return d;
}

int border_size(const Graph& g, const VertexSet& fort) {
  int count = 0;
  fort.for_each([&](Vertex v) {
    for (Vertex a : g.neighbors(v))
      if (!fort.contains(a)) {
        ++count;
        return;
      }
  });
  return count;
}

std::optional<VertexSet> find_min_border_fort(const Graph& g, const VertexSet& avoid, const IpOptions& opts) {
  auto start = closure_complement_fort(g, avoid);
  if (!start) return std::nullopt;
  const int n = g.order();
  MilpModel m;
  std::vector<int> x, b;
  for (Vertex v = 0; v < n; ++v) x.push_back(m.add_binary(vname("x", v), 0, 0));
  for (Vertex v = 0; v < n; ++v) b.push_back(m.add_binary(vname("b", v), 1, 1));
  std::vector<Term> all;
  for (Vertex v = 0; v < n; ++v) all.push_back({x[v], 1});
  m.add_row(all, Sense::ge, 1, "nonempty");
  add_fort_rows(m, g, x, "fort");
  for (Vertex v = 0; v < n; ++v) {
    const std::int64_t d = g.degree(v);
    if (d == 0) continue;
    std::vector<Term> t{{x[v], d}, {b[v], -d}};
    for (Vertex a : g.neighbors(v)) t.push_back({x[a], -1});
    m.add_row(std::move(t), Sense::le, 0, vname("border", v));
  }
  avoid.for_each([&](Vertex v) { m.add_row({{x[v], 1}}, Sense::eq, 0, vname("avoid", v)); });

  milp::Assignment hint(static_cast<std::size_t>(m.num_variables()), 0);
  start->for_each([&](Vertex v) { hint[x[v]] = 1; });
  for (Vertex v = 0; v < n; ++v)
    if (start->contains(v))
      for (Vertex a : g.neighbors(v))
        if (!start->contains(a)) hint[b[v]] = 1;
  milp::SolveOptions so;
  so.time_limit_s = opts.time_limit_s;
  so.hint = hint;
  so.known_lower_bound = 0;
  milp::MilpResult r = milp::solve_milp(m, opts.backend, so);
  if (r.status == SolveStatus::infeasible) return std::nullopt;
  if (auto f = fort_from(g, x, r)) return f;
  return start;
}

}  // namespace zf
