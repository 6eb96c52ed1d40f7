#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "zf/graph.hpp"

namespace zf {

/// Reusable scratch buffers for repeated closure computations on one graph.
/// Hot loops (brute force, Wavefront, branch-and-bound) keep one per thread.
class ClosureWorkspace {
 public:
  explicit ClosureWorkspace(const Graph& g);

  /// Colors z and applies the color change rule to exhaustion using a stack
  /// of active vertices (colored, exactly one uncolored neighbor). Linear in
  /// n + m. The result is written into `out`, which must share g's universe.
  void closure(const VertexSet& z, VertexSet& out);

 private:
  const Graph* g_;
  std::vector<char> colored_;
  std::vector<int> count_;
  std::vector<Vertex> stack_;
};

VertexSet compute_closure(const Graph& g, const VertexSet& z);

/// Chronological forces under simultaneous rounds.
struct ForcingTrace {
  /// (forcer, forced), in the order applied; forces of one round are listed
  /// by ascending forced vertex.
  std::vector<std::pair<Vertex, Vertex>> forces;
  /// Round in which each vertex became colored: 0 for initially colored,
  /// -1 for vertices outside the closure.
  std::vector<int> rounds;
};

/// Closure plus a trace built round by round: every force legal at the start
/// of a round fires in that round. When several colored vertices could force
/// the same vertex in one round, the lowest-id forcer is recorded.
std::pair<VertexSet, ForcingTrace> compute_closure_traced(const Graph& g, const VertexSet& z);

/// Forcing chains of a trace: maximal forcer -> forced paths, each starting
/// at an initially colored vertex.
std::vector<std::vector<Vertex>> forcing_chains(const Graph& g, const VertexSet& z, const ForcingTrace& trace);

bool is_zero_forcing_set(const Graph& g, const VertexSet& z);
bool is_fort(const Graph& g, const VertexSet& f);

inline constexpr int kInfiniteTime = std::numeric_limits<int>::max();

/// Number of simultaneous rounds until the closure stops growing, or
/// kInfiniteTime when z is not a zero forcing set.
int propagation_time(const Graph& g, const VertexSet& z);

/// V \ cl(s) when s is not forcing. The result is a fort disjoint from s.
std::optional<VertexSet> closure_complement_fort(const Graph& g, const VertexSet& s);

/// Grows M = cl(s) into a maximal non-forcing set by scanning vertices in
/// ascending order and returns the inclusion-minimal fort V \ M.
std::optional<VertexSet> greedy_minimal_fort(const Graph& g, const VertexSet& s);

/// True when f is a fort containing no smaller fort. The largest fort inside
/// a set U is V \ cl(V \ U), so this takes |f| closures.
bool is_minimal_fort(const Graph& g, const VertexSet& f);

/// Every fort of g, in ascending bitmask order. Throws std::length_error
/// when g has more than `max_order` vertices.
std::vector<VertexSet> enumerate_forts(const Graph& g, int max_order = 16);

}  // namespace zf
