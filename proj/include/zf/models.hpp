#pragma once

#include <optional>
#include <span>
#include <vector>

#include "zf/graph.hpp"
#include "zf/milp.hpp"
#include "zf/outcome.hpp"

namespace zf {

struct IpOptions {
  milp::Backend backend;
  double time_limit_s = 60.0;
};

// --- infection model -----------------------------------------------------------

struct InfectionModel {
  milp::MilpModel model;
  std::vector<int> s, x;
  /// y[k] is the variable of arcs[k] = (u, v): "u forces v".
  std::vector<int> y;
  std::vector<Edge> arcs;
  int t_max = 0;
};

/// Variables s_v, x_v in {0..t_max}, y_u_v on both orientations of each edge.
/// Rows: s_v + sum of y into v = 1; x_u - x_v + (t_max+1) y_uv <= t_max;
/// x_w - x_v + (t_max+1) y_uv <= t_max for w in N(u) \ {v}. Throws
/// std::invalid_argument unless 1 <= t_max <= n-1.
InfectionModel build_infection_model(const Graph& g, int t_max);

/// Z(G) from the infection model with t_max = n-1.
SolveOutcome solve_infection(const Graph& g, const IpOptions& opts = {});

/// Minimum size of a set with propagation time at most T (T >= 1). Values of
/// T >= n-1 give Z(G).
SolveOutcome solve_bounded_timestep(const Graph& g, int T, const IpOptions& opts = {});

// --- fort cover ----------------------------------------------------------------

struct FortCoverModel {
  milp::MilpModel model;
  std::vector<int> s;
};

/// Row sum_{v in fort} s_v >= 1.
milp::Constraint fort_row(const std::vector<int>& s, const VertexSet& fort, const std::string& name = "");

/// Binary s_v with objective sum s_v and one cover row per seed fort.
FortCoverModel build_fort_cover_master(const Graph& g, std::span<const VertexSet> seed_forts);

/// Minimum fort disjoint from `avoid` (x_v = 0 rows for avoid), or nullopt
/// when none exists. Throws milp::BackendError if the solve does not finish.
std::optional<VertexSet> find_min_fort_ip(const Graph& g, const VertexSet& avoid, const IpOptions& opts = {});

/// Vertex-disjoint minimum forts: repeats find_min_fort_ip avoiding every
/// vertex of the forts chosen so far.
std::vector<VertexSet> disjoint_min_forts(const Graph& g, const IpOptions& opts = {});

enum class FacetMode { off, simplified, full };
enum class FacetVerdict { facet, not_facet, unknown };

struct FacetCheck {
  FacetVerdict verdict = FacetVerdict::unknown;
  /// For not_facet: the vertex v outside the fort and witness forts A_i with
  /// v in A_i, A_i inside F u {v}, and no vertex of F in every A_i.
  Vertex v = -1;
  std::vector<VertexSet> witnesses;
};

struct FacetModel {
  milp::MilpModel model;
  std::vector<int> x;               // per vertex, -1 for fort members
  std::vector<std::vector<int>> z;  // z[i][w]
  std::vector<int> y;
};

/// The facet-check model with `copies` fort copies. With symmetry_breaking,
/// copy i may not contain the i-th member of the fort (needs copies == |F|).
FacetModel build_facet_model(const Graph& g, const VertexSet& fort, int copies, bool symmetry_breaking);

/// Full mode uses |F| copies: infeasible means facet (for a minimum fort).
/// Simplified mode uses 2 copies: infeasible means unknown. Feasible means
/// not_facet in both modes. mode == off returns unknown.
FacetCheck check_facet(const Graph& g, const VertexSet& fort, FacetMode mode, const IpOptions& opts = {});

/// A cover row sum_{v in support} s_v >= rhs, in vertex space.
struct CoverRow {
  VertexSet support;
  std::int64_t rhs = 1;
};

/// Chvatal-Gomory combination of the cover rows of `fort` and the witnesses:
/// sum the rows, divide by p and round up, giving sum_{F u {v}} s >= 2.
/// Throws std::invalid_argument when the witnesses do not certify the
/// violation (not forts, missing v, outside F u {v}, or a common vertex of F).
CoverRow cg_cut_from_witness(const Graph& g, const VertexSet& fort, Vertex v, const std::vector<VertexSet>& witnesses);

/// Brute-force evaluation of the two facet conditions over enumerate_forts
/// (small graphs only). Returns {condition 1, condition 2}.
std::pair<bool, bool> facet_conditions_oracle(const Graph& g, const std::vector<VertexSet>& all_forts,
                                              const VertexSet& fort);

// --- connectivity ----------------------------------------------------------------

struct AbSeparator {
  Vertex a = -1, b = -1;
  VertexSet separator;
};

/// True when every a-b path in g meets c (a, b not in c).
bool separates(const Graph& g, Vertex a, Vertex b, const VertexSet& c);

/// For a set z inducing a disconnected subgraph: a and b are the lowest-id
/// vertices of the two largest components of g[z] (ties to the lower id),
/// and the separator is obtained from V \ z by dropping vertices, in
/// ascending order, while it still separates a from b. Nullopt when g[z] is
/// connected or empty.
std::optional<AbSeparator> find_minimal_ab_separator(const Graph& g, const VertexSet& z);

/// One minimal separator per component C of g[z]: a is the lowest id of C,
/// b the lowest id of the largest other component, and the separator is
/// pruned from N(C) in ascending order. Empty when g[z] is connected.
std::vector<AbSeparator> component_separators(const Graph& g, const VertexSet& z);

struct MtzModel {
  milp::MilpModel model;
  std::vector<int> s;
};

/// Fort cover master plus MTZ arborescence rows over the selected vertices,
/// with artificial vertices alpha and beta. Requires a connected graph.
MtzModel build_mtz_master(const Graph& g, std::span<const VertexSet> seed_forts);

// --- extended fort cover ---------------------------------------------------------

struct ExtendedModel {
  milp::MilpModel model;
  std::vector<int> s, z;
  /// cl(N[v]) for every v.
  std::vector<VertexSet> neighborhood_closure;
};

/// Variables s_v and z_v (cost |N(v)|); cover rows for the seed forts, where
/// z_w covers a fort meeting cl(N[w]); sum z >= 1; s_w + z_v <= 1 for w in
/// cl(N[v]). Requires a graph without isolated vertices.
ExtendedModel build_extended_master(const Graph& g, std::span<const VertexSet> seed_forts);
milp::Constraint extended_fort_row(const ExtendedModel& m, const VertexSet& fort, const std::string& name = "");

/// The forcing set encoded by an extended solution: chosen s plus, for each
/// chosen z_w, N[w] without its largest-id neighbor.
VertexSet extended_forcing_set(const Graph& g, const ExtendedModel& m, const milp::Assignment& a);

/// Fort disjoint from `avoid` with the fewest members that have a neighbor
/// outside the fort; nullopt when none exists.
std::optional<VertexSet> find_min_border_fort(const Graph& g, const VertexSet& avoid, const IpOptions& opts = {});

/// Number of fort members with a neighbor outside the fort.
int border_size(const Graph& g, const VertexSet& fort);

// --- drivers -----------------------------------------------------------------------

enum class FortStrategy { min_fort_ip, closure_complement, greedy_minimal };
enum class Connectivity { none, mtz, ab_separator };

struct FortCoverOptions {
  FortStrategy strategy = FortStrategy::min_fort_ip;
  FacetMode facet = FacetMode::off;
  Connectivity connectivity = Connectivity::none;
  /// Seed the master with vertex-disjoint minimum forts.
  bool preseed = true;
  IpOptions ip;
};

/// Z(G) (connectivity none) or Zc(G) by fort cover with constraint generation.
/// stats: "forts_added", "cg_cuts", "separators_added", "iterations",
/// "seed_forts".
SolveOutcome solve_fort_cover(const Graph& g, const FortCoverOptions& opts = {});

/// Z(G) by the extended fort cover with minimum border fort separation.
SolveOutcome solve_extended_cover(const Graph& g, const IpOptions& opts = {});

}  // namespace zf
