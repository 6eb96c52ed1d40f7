#include "zf/forcing.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace zf {

ClosureWorkspace::ClosureWorkspace(const Graph& g)
    : g_(&g), colored_(static_cast<std::size_t>(g.order()), 0), count_(static_cast<std::size_t>(g.order()), 0) {
  stack_.reserve(static_cast<std::size_t>(g.order()));
}

void ClosureWorkspace::closure(const VertexSet& z, VertexSet& out) {
  const Graph& g = *g_;
  std::fill(colored_.begin(), colored_.end(), 0);
  stack_.clear();
  z.for_each([&](Vertex v) { colored_[v] = 1; });
  auto activate = [&](Vertex v) {
    int c = 0;
    for (Vertex y : g.neighbors(v)) c += colored_[y];
    count_[v] = c;
    if (c == g.degree(v) - 1) stack_.push_back(v);
  };
  z.for_each(activate);
  while (!stack_.empty()) {
    Vertex u = stack_.back();
    stack_.pop_back();
    Vertex v = -1;
    for (Vertex y : g.neighbors(u))
      if (!colored_[y]) {
        v = y;
        break;
      }
    // u's last uncolored neighbor may have been forced by someone else since u was pushed.
    if (v < 0) continue;
    colored_[v] = 1;
    for (Vertex w : g.neighbors(v))
      if (colored_[w] && w != u) {
        if (++count_[w] == g.degree(w) - 1) stack_.push_back(w);
      }
    activate(v);
  }
  out.clear();
  for (Vertex v = 0; v < g.order(); ++v)
    if (colored_[v]) out.insert(v);
}

VertexSet compute_closure(const Graph& g, const VertexSet& z) {
  ClosureWorkspace ws(g);
  VertexSet out(g.order());
  ws.closure(z, out);
  return out;
}

std::pair<VertexSet, ForcingTrace> compute_closure_traced(const Graph& g, const VertexSet& z) {
  const int n = g.order();
  ForcingTrace trace;
  trace.rounds.assign(static_cast<std::size_t>(n), -1);
  VertexSet colored = z;
  z.for_each([&](Vertex v) { trace.rounds[v] = 0; });
  for (int round = 1;; ++round) {
    // forcer chosen per target: lowest-id colored vertex whose only uncolored neighbor it is
    std::vector<Vertex> forcer(static_cast<std::size_t>(n), -1);
    bool any = false;
    colored.for_each([&](Vertex u) {
      Vertex target = -1;
      for (Vertex y : g.neighbors(u))
        if (!colored.contains(y)) {
          if (target >= 0) return;
          target = y;
        }
      if (target >= 0 && forcer[target] < 0) {
        forcer[target] = u;
        any = true;
      }
    });
    if (!any) break;
    for (Vertex v = 0; v < n; ++v)
      if (forcer[v] >= 0) {
        trace.forces.emplace_back(forcer[v], v);
        trace.rounds[v] = round;
        colored.insert(v);
      }
  }
  return {std::move(colored), std::move(trace)};
}

std::vector<std::vector<Vertex>> forcing_chains(const Graph& g, const VertexSet& z, const ForcingTrace& trace) {
  std::vector<Vertex> next(static_cast<std::size_t>(g.order()), -1);
  for (auto [u, v] : trace.forces) next[u] = v;
  std::vector<std::vector<Vertex>> chains;
  z.for_each([&](Vertex start) {
    std::vector<Vertex> chain{start};
    for (Vertex v = next[start]; v >= 0; v = next[v]) chain.push_back(v);
    chains.push_back(std::move(chain));
  });
  return chains;
}

bool is_zero_forcing_set(const Graph& g, const VertexSet& z) { return compute_closure(g, z).is_full(); }

bool is_fort(const Graph& g, const VertexSet& f) {
  if (f.empty()) return false;
  for (Vertex v = 0; v < g.order(); ++v) {
    if (f.contains(v)) continue;
    int inside = 0;
    for (Vertex w : g.neighbors(v)) inside += f.contains(w) ? 1 : 0;
    if (inside == 1) return false;
  }
  return true;
}

int propagation_time(const Graph& g, const VertexSet& z) {
  auto [closure, trace] = compute_closure_traced(g, z);
  if (!closure.is_full()) return kInfiniteTime;
  int t = 0;
  for (int r : trace.rounds) t = std::max(t, r);
  return t;
}

std::optional<VertexSet> closure_complement_fort(const Graph& g, const VertexSet& s) {
  VertexSet cl = compute_closure(g, s);
  if (cl.is_full()) return std::nullopt;
  return cl.complement();
}

std::optional<VertexSet> greedy_minimal_fort(const Graph& g, const VertexSet& s) {
  ClosureWorkspace ws(g);
  VertexSet m(g.order());
  ws.closure(s, m);
  if (m.is_full()) return std::nullopt;
  VertexSet trial(g.order());
  for (Vertex v = 0; v < g.order(); ++v) {
    if (m.contains(v)) continue;
    VertexSet grown = m;
    grown.insert(v);
    ws.closure(grown, trial);
    if (!trial.is_full()) m = trial;
  }
  return m.complement();
}

bool is_minimal_fort(const Graph& g, const VertexSet& f) {
  if (!is_fort(g, f)) return false;
  ClosureWorkspace ws(g);
  VertexSet outside = f.complement(), cl(g.order());
  bool minimal = true;
  f.for_each([&](Vertex v) {
    if (!minimal) return;
    VertexSet start = outside;
    start.insert(v);
    ws.closure(start, cl);
    minimal = cl.is_full();
  });
  return minimal;
}

std::vector<VertexSet> enumerate_forts(const Graph& g, int max_order) {
  const int n = g.order();
  if (n > max_order)
    throw std::length_error("enumerate_forts: n=" + std::to_string(n) + " exceeds limit " + std::to_string(max_order));
  // settled[i]: vertices whose own membership and whole neighborhood are known
  // once vertices 0..i have been decided.
  std::vector<std::vector<Vertex>> settled(static_cast<std::size_t>(n));
  for (Vertex w = 0; w < n; ++w) {
    int last = w;
    for (Vertex y : g.neighbors(w)) last = std::max(last, y);
    settled[last].push_back(w);
  }
  std::vector<VertexSet> forts;
  VertexSet current(n);
  std::vector<int> inside(static_cast<std::size_t>(n), 0);

  std::function<void(int)> recurse = [&](int i) {
    if (i == n) {
      if (!current.empty()) forts.push_back(current);
      return;
    }
    for (int take = 0; take < 2; ++take) {
      if (take) {
        current.insert(i);
        for (Vertex y : g.neighbors(i)) ++inside[y];
      }
      bool ok = true;
      for (Vertex w : settled[i])
        if (!current.contains(w) && inside[w] == 1) {
          ok = false;
          break;
        }
      if (ok) recurse(i + 1);
      if (take) {
        current.erase(i);
        for (Vertex y : g.neighbors(i)) --inside[y];
      }
    }
  };
  if (n > 0) recurse(0);
  std::sort(forts.begin(), forts.end());
  return forts;
}

}  // namespace zf
