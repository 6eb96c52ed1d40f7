#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zf/vertex_set.hpp"

namespace zf {

/// Raised for malformed graph input: bad syntax, non-simple edges,
/// out-of-range ids. The message carries the offending line number when the
/// input came from a file.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Edge = std::pair<Vertex, Vertex>;

/// Immutable simple undirected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  /// Builds a graph on n vertices. Throws GraphError on self-loops,
  /// duplicate edges or ids outside [0, n).
  Graph(int n, std::span<const Edge> edges);

  int order() const { return n_; }
  int size() const { return m_; }
  int degree(Vertex v) const { return static_cast<int>(adj_[v].size()); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  bool adjacent(Vertex u, Vertex v) const;

  /// Edges as (u, v) with u < v, sorted.
  std::vector<Edge> edges() const;

  VertexSet closed_neighborhood(Vertex v) const;
  VertexSet open_neighborhood(Vertex v) const;
  /// N(S): vertices outside S with a neighbor in S.
  VertexSet neighborhood(const VertexSet& s) const;

  bool is_connected() const;
  /// Connectivity of the induced subgraph G[s]; the empty set counts as connected.
  bool induces_connected(const VertexSet& s) const;
  /// Connected components of G[s], each sorted, ordered by lowest member.
  std::vector<std::vector<Vertex>> components(const VertexSet& s) const;

  VertexSet vertices() const { return VertexSet::full(n_); }

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<Vertex>> adj_;
};

// --- deterministic randomness ---------------------------------------------

/// xoshiro256** seeded through splitmix64. Every draw is defined bit-for-bit
/// here, so instances generated from a seed are identical on every platform
/// (std:: distributions are implementation-defined and are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t s_[4];
};

// --- generators -----------------------------------------------------------

Graph gen_path(int n);
Graph gen_cycle(int n);
Graph gen_complete(int n);
/// Center 0, leaves 1..n-1.
Graph gen_star(int n);
/// Graph with n vertices and no edges.
Graph gen_empty(int n);
/// Connected 3-regular graph from the pairing model with rejection.
Graph gen_cubic(int n, std::uint64_t seed);
/// The ring lattice C(n, k): i ~ j iff their cyclic distance is at most k/2.
Graph gen_ring_lattice(int n, int k);
/// Connected Watts-Strogatz graph; retries up to 1000 times.
Graph gen_watts_strogatz(int n, int k, double beta, std::uint64_t seed);
/// Random spanning tree plus each remaining pair independently with
/// probability p. Always connected.
Graph gen_random_connected(int n, double p, std::uint64_t seed);

// --- I/O ------------------------------------------------------------------

enum class GraphFormat { edge_list, dimacs };

GraphFormat parse_graph_format(const std::string& name);
/// Infers dimacs for *.dimacs / *.col / *.graph-with-p-line files, edge list otherwise.
GraphFormat guess_graph_format(const std::filesystem::path& path);

Graph parse_graph(const std::string& text, GraphFormat format);
Graph load_graph(const std::filesystem::path& path, GraphFormat format = GraphFormat::edge_list);
std::string format_graph(const Graph& g, GraphFormat format);
void save_graph(const Graph& g, const std::filesystem::path& path, GraphFormat format = GraphFormat::edge_list);

}  // namespace zf
