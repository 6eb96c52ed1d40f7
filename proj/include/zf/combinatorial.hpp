#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "zf/graph.hpp"
#include "zf/outcome.hpp"

namespace zf {

struct BruteForceOptions {
  double time_limit_s = 60.0;
  /// Worker threads for closure evaluation; subsets of one size are split by
  /// their largest element.
  int threads = 1;
};

/// Z(G) by closures of all subsets of size 1, 2, ... in colexicographic order.
SolveOutcome brute_force_zf(const Graph& g, const BruteForceOptions& opts = {});
/// Zc(G): like brute_force_zf but only connected subsets qualify. Throws
/// std::invalid_argument for a disconnected graph.
SolveOutcome brute_force_czf(const Graph& g, const BruteForceOptions& opts = {});

struct WavefrontOptions {
  double time_limit_s = 60.0;
  /// Byte cap on the closure-pair pool; 0 picks half of physical memory.
  std::size_t memory_limit_bytes = 0;
};

/// Z(G) by dynamic programming over closure pairs (closure set, budget).
///
/// Stage R extends every stored pair (S, r) by the closed neighborhood of
/// each vertex v, giving (cl(S u N[v]), r + [v not in S] + max(|N(v) \ S| - 1, 0)).
/// A new pair is stored when its budget is at most R and its closure is not
/// stored yet; the first stored pair with closure V ends the search.
///
/// stats.counters: "pool_size" (pairs stored, the initial (empty, 0) pair
/// excluded), "pairs_examined", and "pool_after_stage_<R>" for each finished
/// stage.
SolveOutcome wavefront(const Graph& g, const WavefrontOptions& opts = {});

/// Zc(G) by reverse-search branch and bound over connected induced
/// subgraphs. Branching is restricted to candidates R n N(S); a vertex is
/// only added while |S| < best - 1. Throws std::invalid_argument for a
/// disconnected graph. On timeout the incumbent is an upper bound only.
SolveOutcome bnb_connected(const Graph& g, double time_limit_s = 60.0);

/// Calls visit(S) once for every non-empty connected induced subgraph of g,
/// using the same reverse-search recursion as bnb_connected without pruning.
void enumerate_connected_subgraphs(const Graph& g, const std::function<void(const VertexSet&)>& visit);

}  // namespace zf
