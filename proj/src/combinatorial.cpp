#include "zf/combinatorial.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "zf/forcing.hpp"

namespace zf {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::timeout:
      return "timeout";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::out_of_memory:
      return "out_of_memory";
  }
  return "unknown";
}

namespace {

// --- brute force ------------------------------------------------------------

// BFS inside s using word-parallel neighborhood masks.
bool connected_in(const std::vector<VertexSet>& closed_nbhd, const VertexSet& s) {
  Vertex root = s.first();
  if (root < 0) return true;
  VertexSet reached(s.universe());
  VertexSet frontier(s.universe());
  reached.insert(root);
  frontier.insert(root);
  while (!frontier.empty()) {
    VertexSet grow(s.universe());
    frontier.for_each([&](Vertex v) { grow |= closed_nbhd[v]; });
    grow &= s;
    frontier = grow - reached;
    reached |= frontier;
  }
  return reached == s;
}

SolveOutcome brute_force(const Graph& g, const BruteForceOptions& opts, bool connected) {
  Deadline deadline(opts.time_limit_s);
  const int n = g.order();
  SolveOutcome out;
  out.lower_bound = n == 0 ? 0 : 1;
  if (n == 0) {
    out.status = SolveStatus::optimal;
    out.best_value = 0;
    out.incumbent = VertexSet(0);
    return out;
  }
  std::vector<VertexSet> closed_nbhd;
  for (Vertex v = 0; v < n; ++v) closed_nbhd.push_back(g.closed_neighborhood(v));

  std::atomic<std::int64_t> examined{0};
  for (int k = 1; k <= n; ++k) {
    std::atomic<int> best_max{n};  // smallest largest-element of a hit so far
    std::atomic<bool> timed_out{false};
    std::vector<std::optional<VertexSet>> hit_for_max(static_cast<std::size_t>(n));
    std::mutex hit_mutex;

    // Enumerates the k-subsets whose largest element is `top`, colex order.
    auto scan_top = [&](int top, ClosureWorkspace& ws, VertexSet& set, VertexSet& cl) -> bool {
      std::vector<int> c(static_cast<std::size_t>(k - 1));
      for (int i = 0; i < k - 1; ++i) c[i] = i;
      std::int64_t local = 0;
      while (true) {
        set.clear();
        for (int x : c) set.insert(x);
        set.insert(top);
        ++local;
        if ((local & 1023) == 0) {
          examined += 1024;
          if (deadline.expired()) {
            timed_out = true;
            return false;
          }
          if (best_max.load() < top) return false;
        }
        if (!connected || connected_in(closed_nbhd, set)) {
          ws.closure(set, cl);
          if (cl.is_full()) {
            examined += local & 1023;
            std::lock_guard lock(hit_mutex);
            hit_for_max[top] = set;
            int cur = best_max.load();
            while (top < cur && !best_max.compare_exchange_weak(cur, top)) {
            }
            return true;
          }
        }
        // next combination of k-1 elements below top, colex
        int j = 0;
        while (j < k - 1 && c[j] + 1 == (j + 1 < k - 1 ? c[j + 1] : top)) ++j;
        if (j == k - 1) break;
        ++c[j];
        for (int i = 0; i < j; ++i) c[i] = i;
      }
      examined += local & 1023;
      return false;
    };

    auto worker = [&](int tid, int stride) {
      ClosureWorkspace ws(g);
      VertexSet set(n), cl(n);
      for (int top = k - 1 + tid; top < n; top += stride) {
        if (timed_out || best_max.load() < top) return;
        scan_top(top, ws, set, cl);
      }
    };

    const int threads = std::max(1, std::min(opts.threads, n));
    if (threads == 1) {
      worker(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
      for (auto& t : pool) t.join();
    }

    if (best_max.load() < n) {
      out.status = SolveStatus::optimal;
      out.best_value = k;
      out.lower_bound = k;
      out.incumbent = hit_for_max[best_max.load()];
      break;
    }
    if (timed_out) {
      out.status = SolveStatus::timeout;
      break;
    }
    out.lower_bound = k + 1;
  }
  out.stats.add("sets_examined", examined.load());
  out.stats.wall_time_s = deadline.elapsed();
  return out;
}

}  // namespace

SolveOutcome brute_force_zf(const Graph& g, const BruteForceOptions& opts) { return brute_force(g, opts, false); }

SolveOutcome brute_force_czf(const Graph& g, const BruteForceOptions& opts) {
  if (!g.is_connected()) throw std::invalid_argument("brute_force_czf: graph is disconnected");
  return brute_force(g, opts, true);
}

// --- Wavefront --------------------------------------------------------------

namespace {

std::size_t default_memory_limit() {
  long pages = sysconf(_SC_PHYS_PAGES);
  long page = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page <= 0) return std::size_t{4} << 30;
  return static_cast<std::size_t>(pages) * static_cast<std::size_t>(page) / 2;
}

// Closure pairs stored flat: words of pair i live at [i*W, (i+1)*W).
class ClosurePool {
 public:
  explicit ClosurePool(std::size_t words_per_set) : w_(words_per_set) { table_.assign(1024, 0); }

  std::size_t size() const { return budget_.size(); }
  const std::uint64_t* set(std::size_t i) const { return words_.data() + i * w_; }
  int budget(std::size_t i) const { return budget_[i]; }
  std::uint32_t parent(std::size_t i) const { return parent_[i]; }
  Vertex via(std::size_t i) const { return via_[i]; }

  bool contains(const std::uint64_t* s) const {
    std::size_t mask = table_.size() - 1;
    for (std::size_t h = hash(s) & mask;; h = (h + 1) & mask) {
      std::uint32_t e = table_[h];
      if (e == 0) return false;
      if (std::equal(s, s + w_, set(e - 1))) return true;
    }
  }

  void add(const std::uint64_t* s, int budget, std::uint32_t parent, Vertex via) {
    words_.insert(words_.end(), s, s + w_);
    budget_.push_back(budget);
    parent_.push_back(parent);
    via_.push_back(via);
    if (2 * size() > table_.size()) {
      table_.assign(table_.size() * 2, 0);
      for (std::size_t i = 0; i < size(); ++i) place(i);
    } else {
      place(size() - 1);
    }
  }

  std::size_t bytes() const {
    return words_.capacity() * sizeof(std::uint64_t) + budget_.capacity() * sizeof(int) +
           parent_.capacity() * sizeof(std::uint32_t) + via_.capacity() * sizeof(Vertex) +
           table_.capacity() * sizeof(std::uint32_t);
  }

 private:
  std::size_t hash(const std::uint64_t* s) const {
    std::uint64_t h = 0x243f6a8885a308d3ull;
    for (std::size_t i = 0; i < w_; ++i) {
      h ^= s[i];
      h *= 0x9e3779b97f4a7c15ull;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
  void place(std::size_t i) {
    std::size_t mask = table_.size() - 1;
    std::size_t h = hash(set(i)) & mask;
    while (table_[h] != 0) h = (h + 1) & mask;
    table_[h] = static_cast<std::uint32_t>(i + 1);
  }

  std::size_t w_;
  std::vector<std::uint64_t> words_;
  std::vector<int> budget_;
  std::vector<std::uint32_t> parent_;
  std::vector<Vertex> via_;
  std::vector<std::uint32_t> table_;
};

// Rebuilds a set of size budget(i) whose closure is set(i), following the
// construction that shows every stored pair is a closure pair.
VertexSet witness(const Graph& g, const ClosurePool& pool, std::size_t i) {
  const int n = g.order();
  std::vector<std::size_t> path;
  for (std::size_t j = i; j != 0; j = pool.parent(j)) path.push_back(j);
  VertexSet a(n);
  VertexSet s(n);  // closure of the parent pair
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    std::size_t j = *it;
    Vertex v = pool.via(j);
    VertexSet parent_set(n);
    std::copy(pool.set(pool.parent(j)), pool.set(pool.parent(j)) + VertexSet::word_count(n), parent_set.words());
    Vertex skip = -1;
    for (Vertex x : g.neighbors(v))
      if (!parent_set.contains(x)) {
        skip = x;
        break;
      }
    VertexSet add = g.closed_neighborhood(v) - parent_set;
    if (skip >= 0) add.erase(skip);
    a |= add;
  }
  return a;
}

}  // namespace

SolveOutcome wavefront(const Graph& g, const WavefrontOptions& opts) {
  Deadline deadline(opts.time_limit_s);
  const int n = g.order();
  const std::size_t limit = opts.memory_limit_bytes ? opts.memory_limit_bytes : default_memory_limit();
  SolveOutcome out;
  out.lower_bound = n == 0 ? 0 : 1;
  if (n == 0) {
    out.status = SolveStatus::optimal;
    out.best_value = 0;
    out.incumbent = VertexSet(0);
    return out;
  }

  const std::size_t w = VertexSet::word_count(n);
  ClosurePool pool(w);
  VertexSet empty(n);
  pool.add(empty.words(), 0, 0, -1);

  std::vector<VertexSet> closed_nbhd;
  std::vector<int> degree;
  for (Vertex v = 0; v < n; ++v) {
    closed_nbhd.push_back(g.closed_neighborhood(v));
    degree.push_back(g.degree(v));
  }
  ClosureWorkspace ws(g);
  VertexSet s(n), grown(n), closure(n);
  std::int64_t examined = 0;

  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.stats.add("pool_size", static_cast<std::int64_t>(pool.size()) - 1);
    out.stats.add("pairs_examined", examined);
    out.stats.wall_time_s = deadline.elapsed();
    return out;
  };

  for (int stage = 1; stage <= n; ++stage) {
    const std::size_t old_size = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      std::copy(pool.set(i), pool.set(i) + w, s.words());
      const int r = pool.budget(i);
      const bool fresh = i >= old_size;
      for (Vertex v = 0; v < n; ++v) {
        if (closed_nbhd[v].is_subset_of(s)) continue;
        int outside = 0;
        for (Vertex y : g.neighbors(v)) outside += s.contains(y) ? 0 : 1;
        const int r2 = r + (s.contains(v) ? 0 : 1) + std::max(outside - 1, 0);
        // Pairs present at the start of the stage already tried every r2 < stage.
        if (r2 > stage || (!fresh && r2 < stage)) continue;
        if ((++examined & 255) == 0) {
          if (deadline.expired()) return finish(SolveStatus::timeout);
          if (pool.bytes() > limit) return finish(SolveStatus::out_of_memory);
        }
        grown = s;
        grown |= closed_nbhd[v];
        ws.closure(grown, closure);
        if (pool.contains(closure.words())) continue;
        pool.add(closure.words(), r2, static_cast<std::uint32_t>(i), v);
        if (closure.is_full()) {
          out.best_value = r2;
          out.lower_bound = r2;
          out.incumbent = witness(g, pool, pool.size() - 1);
          out.stats.add("pool_after_stage_" + std::to_string(stage), static_cast<std::int64_t>(pool.size()) - 1);
          return finish(SolveStatus::optimal);
        }
      }
    }
    out.stats.add("pool_after_stage_" + std::to_string(stage), static_cast<std::int64_t>(pool.size()) - 1);
    out.lower_bound = stage + 1;
  }
  throw std::logic_error("wavefront: no forcing closure reached after n stages");
}

// --- branch and bound ---------------------------------------------------------

namespace {

struct ConnectedSearch {
  const Graph& g;
  std::vector<VertexSet> closed_nbhd;
  ClosureWorkspace ws;
  VertexSet cl;
  Deadline deadline;
  bool prune;
  std::function<void(const VertexSet&)> visit;  // enumeration mode
  int best;
  VertexSet incumbent;
  std::int64_t nodes = 0;
  bool timed_out = false;

  ConnectedSearch(const Graph& graph, double limit, bool pruning)
      : g(graph), ws(graph), cl(graph.order()), deadline(limit), prune(pruning), best(graph.order()),
        incumbent(VertexSet::full(graph.order())) {
    for (Vertex v = 0; v < g.order(); ++v) closed_nbhd.push_back(g.closed_neighborhood(v));
  }

  // reach: union of closed neighborhoods of S
  void recurse(VertexSet& remaining, VertexSet& chosen, const VertexSet& reach, int chosen_size) {
    if (timed_out) return;
    if ((++nodes & 1023) == 0 && deadline.expired()) {
      timed_out = true;
      return;
    }
    VertexSet candidates = chosen_size == 0 ? remaining : (remaining & reach);
    Vertex v = candidates.first();
    if (v < 0) {
      if (chosen_size == 0) return;
      if (!prune) {
        visit(chosen);
        return;
      }
      ws.closure(chosen, cl);
      if (cl.is_full() && chosen_size < best) {
        best = chosen_size;
        incumbent = chosen;
      }
      return;
    }
    remaining.erase(v);
    recurse(remaining, chosen, reach, chosen_size);
    if (!prune || chosen_size < best - 1) {
      chosen.insert(v);
      VertexSet grown = reach | closed_nbhd[v];
      recurse(remaining, chosen, grown, chosen_size + 1);
      chosen.erase(v);
    }
    remaining.insert(v);
  }
};

}  // namespace

SolveOutcome bnb_connected(const Graph& g, double time_limit_s) {
  if (!g.is_connected()) throw std::invalid_argument("bnb_connected: graph is disconnected");
  ConnectedSearch search(g, time_limit_s, true);
  VertexSet remaining = g.vertices();
  VertexSet chosen(g.order());
  search.recurse(remaining, chosen, VertexSet(g.order()), 0);
  SolveOutcome out;
  out.best_value = search.best;
  out.incumbent = search.incumbent;
  out.status = search.timed_out ? SolveStatus::timeout : SolveStatus::optimal;
  out.lower_bound = search.timed_out ? std::min(1, g.order()) : search.best;
  out.stats.add("nodes", search.nodes);
  out.stats.wall_time_s = search.deadline.elapsed();
  return out;
}

void enumerate_connected_subgraphs(const Graph& g, const std::function<void(const VertexSet&)>& visit) {
  ConnectedSearch search(g, 0.0, false);
  search.visit = visit;
  VertexSet remaining = g.vertices();
  VertexSet chosen(g.order());
  search.recurse(remaining, chosen, VertexSet(g.order()), 0);
}

}  // namespace zf
