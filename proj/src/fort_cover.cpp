#include <algorithm>
#include <queue>
#include <stdexcept>

#include "zf/forcing.hpp"
#include "zf/models.hpp"

namespace zf {

namespace {

using milp::Assignment;
using milp::Constraint;
using milp::Sense;

VertexSet chosen(const std::vector<int>& vars, const Assignment& a, int n) {
  VertexSet s(n);
  for (Vertex v = 0; v < n; ++v)
    if (a[vars[v]] == 1) s.insert(v);
  return s;
}

IpOptions with_remaining(const IpOptions& base, const Deadline& d) {
  IpOptions o = base;
  o.time_limit_s = d.limited() ? std::max(d.remaining(), 1e-3) : 0.0;
  return o;
}

// Adds shortest paths between components of g[s] until it is connected.
void connect(const Graph& g, VertexSet& s) {
  while (true) {
    auto comps = g.components(s);
    if (comps.size() <= 1) return;
    std::vector<Vertex> parent(static_cast<std::size_t>(g.order()), -1);
    std::vector<char> seen(static_cast<std::size_t>(g.order()), 0);
    std::queue<Vertex> q;
    for (Vertex v : comps[0]) {
      seen[v] = 1;
      q.push(v);
    }
    Vertex hit = -1;
    while (!q.empty() && hit < 0) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : g.neighbors(u)) {
        if (seen[w]) continue;
        seen[w] = 1;
        parent[w] = u;
        if (s.contains(w)) {
          hit = w;
          break;
        }
        q.push(w);
      }
    }
    if (hit < 0) return;  // disconnected graph
    for (Vertex v = parent[hit]; v >= 0 && !s.contains(v); v = parent[v]) s.insert(v);
  }
}

// Greedy upper bound: grow s to a forcing set (and connect it), then drop
// vertices in ascending order while the result stays valid.
VertexSet repair_set(const Graph& g, VertexSet s, bool connected) {
  auto valid = [&](const VertexSet& t) {
    return is_zero_forcing_set(g, t) && (!connected || g.induces_connected(t));
  };
  for (Vertex v = 0; v < g.order() && !is_zero_forcing_set(g, s); ++v)
    if (!s.contains(v)) {
      VertexSet before = compute_closure(g, s);
      if (before.contains(v)) continue;
      s.insert(v);
    }
  if (connected) connect(g, s);
  for (Vertex v : s.to_vector()) {
    s.erase(v);
    if (!valid(s)) s.insert(v);
  }
  return s;
}

SolveOutcome small_case(const Graph& g) {
  SolveOutcome out;
  out.status = SolveStatus::optimal;
  out.best_value = g.order();
  out.lower_bound = g.order();
  out.incumbent = g.vertices();
  return out;
}

}  // namespace

SolveOutcome solve_fort_cover(const Graph& g, const FortCoverOptions& opts) {
  const int n = g.order();
  if (n <= 1) return small_case(g);
  const bool need_connected = opts.connectivity != Connectivity::none;
  if (need_connected && !g.is_connected()) {
    SolveOutcome out;
    out.status = SolveStatus::infeasible;
    return out;
  }
  Deadline deadline(opts.ip.time_limit_s);
  SolveStats stats;

  std::vector<VertexSet> seeds;
  if (opts.preseed) seeds = disjoint_min_forts(g, with_remaining(opts.ip, deadline));
  stats.add("seed_forts", static_cast<std::int64_t>(seeds.size()));

  milp::MilpModel model;
  std::vector<int> s;
  if (opts.connectivity == Connectivity::mtz) {
    MtzModel mm = build_mtz_master(g, seeds);
    model = std::move(mm.model);
    s = std::move(mm.s);
  } else {
    FortCoverModel fc = build_fort_cover_master(g, seeds);
    model = std::move(fc.model);
    s = std::move(fc.s);
  }

  int row_id = 0;
  std::vector<milp::SeparationCallback> callbacks;
  callbacks.push_back([&](const Assignment& a) -> std::vector<Constraint> {
    VertexSet z = chosen(s, a, n);
    if (is_zero_forcing_set(g, z)) return {};
    Deadline clock;
    struct Timer {
      Deadline& clock;
      SolveStats& stats;
      ~Timer() { stats.add("separation_ms", static_cast<std::int64_t>(clock.elapsed() * 1000)); }
    } timer{clock, stats};
    std::optional<VertexSet> fort;
    switch (opts.strategy) {
      case FortStrategy::min_fort_ip: fort = find_min_fort_ip(g, z, with_remaining(opts.ip, deadline)); break;
      case FortStrategy::closure_complement: fort = closure_complement_fort(g, z); break;
      case FortStrategy::greedy_minimal: fort = greedy_minimal_fort(g, z); break;
    }
    if (!fort) throw std::logic_error("no fort found outside a non-forcing set");
    // a fort with a smaller fort inside is never a facet
    if (opts.facet != FacetMode::off && is_minimal_fort(g, *fort)) {
      stats.add("facet_checks");
      FacetCheck fc = check_facet(g, *fort, opts.facet, with_remaining(opts.ip, deadline));
      if (fc.verdict == FacetVerdict::not_facet) {
        CoverRow cut = cg_cut_from_witness(g, *fort, fc.v, fc.witnesses);
        Constraint c;
        cut.support.for_each([&](Vertex v) { c.terms.push_back({s[v], 1}); });
        c.sense = Sense::ge;
        c.rhs = cut.rhs;
        c.name = "cg_" + std::to_string(row_id++);
        stats.add("cg_cuts");
        return {c};
      }
    }
    stats.add("forts_added");
    return {fort_row(s, *fort, "gen_fort_" + std::to_string(row_id++))};
  });
  if (opts.connectivity == Connectivity::ab_separator)
    callbacks.push_back([&](const Assignment& a) -> std::vector<Constraint> {
      VertexSet z = chosen(s, a, n);
      auto first = find_minimal_ab_separator(g, z);
      if (!first) return {};
      std::vector<AbSeparator> seps{*first};
      for (AbSeparator& extra : component_separators(g, z)) seps.push_back(std::move(extra));
      std::vector<Constraint> rows;
      std::vector<std::pair<VertexSet, VertexSet>> seen;
      for (const AbSeparator& sep : seps) {
        VertexSet ends(n, {sep.a, sep.b});
        if (std::find(seen.begin(), seen.end(), std::pair{ends, sep.separator}) != seen.end()) continue;
        seen.emplace_back(ends, sep.separator);
        Constraint c;
        c.terms = {{s[sep.a], 1}, {s[sep.b], 1}};
        sep.separator.for_each([&](Vertex v) { c.terms.push_back({s[v], -1}); });
        c.sense = Sense::le;
        c.rhs = 1;
        c.name = "sep_" + std::to_string(row_id++);
        stats.add("separators_added");
        rows.push_back(std::move(c));
      }
      return rows;
    });

  milp::SeparationOptions so;
  so.time_limit_s = deadline.limited() ? std::max(deadline.remaining(), 1e-3) : 0.0;
  if (!seeds.empty()) so.known_lower_bound = static_cast<std::int64_t>(seeds.size());
  if (opts.connectivity != Connectivity::mtz)
    so.repair = [&](const Assignment& a) -> std::optional<Assignment> {
      VertexSet r = repair_set(g, chosen(s, a, n), need_connected);
      Assignment out(static_cast<std::size_t>(model.num_variables()), 0);
      r.for_each([&](Vertex v) { out[s[v]] = 1; });
      return out;
    };

  milp::SeparationResult r = milp::solve_with_separation(model, callbacks, opts.ip.backend, so);
  SolveOutcome out;
  out.status = r.status;
  out.lower_bound = r.lower_bound;
  out.stats = r.stats;
  for (auto& [k, v] : stats.counters) out.stats.counters[k] = v;
  out.stats.counters["iterations"] = r.iterations;
  out.stats.wall_time_s = deadline.elapsed();
  if (r.status == SolveStatus::infeasible) return out;

  VertexSet best = r.assignment ? chosen(s, *r.assignment, n) : repair_set(g, g.vertices(), need_connected);
  if (!is_zero_forcing_set(g, best) || (need_connected && !g.induces_connected(best)))
    throw std::logic_error("fort cover produced an invalid set " + best.to_string());
  if (r.status == SolveStatus::optimal && best.size() != r.lower_bound)
    throw std::logic_error("fort cover optimum does not match the set size");
  out.best_value = best.size();
  out.incumbent = best;
  out.lower_bound = std::min<std::int64_t>(out.lower_bound, best.size());
  return out;
}

SolveOutcome solve_extended_cover(const Graph& g, const IpOptions& opts) {
  const int n = g.order();
  if (n <= 1) return small_case(g);
  Deadline deadline(opts.time_limit_s);

  std::vector<VertexSet> seeds = disjoint_min_forts(g, with_remaining(opts, deadline));
  const auto known = static_cast<std::int64_t>(seeds.size());
  for (Vertex v = 0; v < n; ++v) {
    VertexSet rest = compute_closure(g, g.closed_neighborhood(v)).complement();
    if (!rest.empty() && std::find(seeds.begin(), seeds.end(), rest) == seeds.end()) seeds.push_back(rest);
  }
  ExtendedModel em = build_extended_master(g, seeds);

  SolveStats stats;
  stats.add("seed_forts", static_cast<std::int64_t>(seeds.size()));
  int row_id = 0;
  std::vector<milp::SeparationCallback> callbacks;
  callbacks.push_back([&](const Assignment& a) -> std::vector<Constraint> {
    if (is_zero_forcing_set(g, extended_forcing_set(g, em, a))) return {};
    VertexSet avoid = chosen(em.s, a, n);
    for (Vertex w = 0; w < n; ++w)
      if (a[em.z[w]] == 1) avoid |= g.closed_neighborhood(w);
    auto fort = find_min_border_fort(g, compute_closure(g, avoid), with_remaining(opts, deadline));
    if (!fort) throw std::logic_error("no fort found outside a non-forcing set");
    stats.add("forts_added");
    return {extended_fort_row(em, *fort, "gen_fort_" + std::to_string(row_id++))};
  });

  milp::SeparationOptions so;
  so.time_limit_s = deadline.limited() ? std::max(deadline.remaining(), 1e-3) : 0.0;
  if (known > 0) so.known_lower_bound = known;
  milp::SeparationResult r = milp::solve_with_separation(em.model, callbacks, opts.backend, so);

  SolveOutcome out;
  out.status = r.status;
  out.lower_bound = r.lower_bound;
  out.stats = r.stats;
  for (auto& [k, v] : stats.counters) out.stats.counters[k] = v;
  out.stats.counters["iterations"] = r.iterations;
  out.stats.wall_time_s = deadline.elapsed();
  if (r.status == SolveStatus::infeasible) return out;
  VertexSet best = r.assignment ? extended_forcing_set(g, em, *r.assignment) : repair_set(g, g.vertices(), false);
  if (!is_zero_forcing_set(g, best)) throw std::logic_error("extended cover produced a non-forcing set");
  out.best_value = best.size();
  out.incumbent = best;
  out.lower_bound = std::min<std::int64_t>(out.lower_bound, best.size());
  if (r.status == SolveStatus::optimal && best.size() != r.lower_bound)
    throw std::logic_error("extended cover optimum does not match the forcing set size");
  return out;
}

}  // namespace zf
