#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zf/outcome.hpp"

namespace zf::milp {

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VarKind { binary, integer };
enum class Sense { le, eq, ge };

struct Variable {
  std::string name;
  VarKind kind = VarKind::binary;
  std::int64_t lo = 0;
  std::int64_t hi = 1;
  std::int64_t cost = 0;
  /// Branching class for the internal backend; lower classes are branched first.
  int priority = 0;
};

struct Term {
  int var;
  std::int64_t coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::ge;
  std::int64_t rhs = 0;
  std::string name;  // empty: the model assigns c<index>
};

/// Integer values indexed like MilpModel::variables().
using Assignment = std::vector<std::int64_t>;

/// Minimization over binary and bounded integer variables with integer
/// coefficients.
class MilpModel {
 public:
  int add_binary(const std::string& name, std::int64_t cost = 0, int priority = 0);
  int add_integer(const std::string& name, std::int64_t lo, std::int64_t hi, std::int64_t cost = 0, int priority = 0);
  /// Merges repeated variables and drops zero coefficients. Returns the row index.
  int add_constraint(Constraint c);
  int add_row(std::vector<Term> terms, Sense sense, std::int64_t rhs, const std::string& name = "");

  /// Tightens a variable's domain to a single value.
  void fix(int var, std::int64_t value);

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }
  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Constraint>& constraints() const { return rows_; }
  const Variable& variable(int i) const { return vars_.at(static_cast<std::size_t>(i)); }

  /// Index of the named variable, or -1.
  int find(const std::string& name) const;

  std::int64_t objective(const Assignment& a) const;
  std::int64_t activity(const Constraint& c, const Assignment& a) const;
  bool row_satisfied(const Constraint& c, const Assignment& a) const;
  /// Index of the first violated row or bound (rows first), -1 if feasible.
  int first_violation(const Assignment& a) const;
  bool feasible(const Assignment& a) const { return first_violation(a) < 0; }

 private:
  int add_variable(Variable v);
  void check_name(const std::string& name) const;

  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_set<std::string> row_names_;
};

struct MilpResult {
  SolveStatus status = SolveStatus::timeout;
  std::optional<Assignment> assignment;
  std::optional<std::int64_t> objective;
  std::int64_t lower_bound = 0;
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::optimal; }
};

struct ExternalSolverConfig {
  /// Shell command with placeholders {lp_path} {sol_path} {time_limit} {params}.
  std::string command;
  /// Opaque solver parameters substituted for {params}.
  std::string params;
  /// Directory for exchange files; empty uses the system temp directory.
  std::filesystem::path work_dir;
  bool keep_files = false;
};

struct Backend {
  enum class Kind { internal, external } kind = Kind::internal;
  ExternalSolverConfig external;

  static Backend internal_backend() { return {}; }
  static Backend external_backend(ExternalSolverConfig cfg) { return {Kind::external, std::move(cfg)}; }
};

/// Result of a lazy-constraint callback: rows to add to the search, and
/// optionally a fully feasible assignment found on the way.
struct LazyCuts {
  std::vector<Constraint> rows;
  std::optional<Assignment> incumbent;
};
using LazyCallback = std::function<LazyCuts(const Assignment&)>;

struct SolveOptions {
  double time_limit_s = 60.0;
  /// A proven lower bound on the optimum; the search stops as soon as an
  /// incumbent reaches it.
  std::optional<std::int64_t> known_lower_bound;
  /// Starting incumbent, used only if feasible.
  std::optional<Assignment> hint;
  /// Preferred values for branching; need not be feasible.
  std::optional<Assignment> guide;
  /// Internal backend only: called at every integer leaf before it becomes
  /// the incumbent. Returned rows must cut off the leaf; they are added to
  /// the running search, which stays exact because rows only shrink the
  /// feasible region.
  LazyCallback lazy;
};

/// Depth-first branch and bound in exact integer arithmetic: bound
/// propagation on every row, a bound from greedy dual ascent on covering
/// rows, reduced-cost fixing, branching on the covering row with fewest free
/// variables, and optional lazy rows.
MilpResult internal_backend_solve(const MilpModel& model, const SolveOptions& opts = {});

/// Writes the model as an LP file, runs the configured command, and reads
/// back the solution file. Throws BackendError when the command fails or its
/// output cannot be parsed.
MilpResult external_backend_solve(const MilpModel& model, const ExternalSolverConfig& cfg,
                                  const SolveOptions& opts = {});

MilpResult solve_milp(const MilpModel& model, const Backend& backend = {}, const SolveOptions& opts = {});

/// CPLEX LP text: Minimize / Subject To / Bounds / Generals / Binaries / End.
/// Output depends only on the model, so files are byte-stable.
std::string format_lp(const MilpModel& model);
void export_lp(const MilpModel& model, const std::filesystem::path& path);

/// Parses a solution file: "name value" lines plus optional "# status <s>",
/// "# objective <v>" and "# bound <v>" header lines. Values are rounded to the
/// nearest integer. Unknown names raise BackendError.
struct ParsedSolution {
  std::optional<std::string> status;
  std::optional<double> objective;
  std::optional<double> bound;
  std::optional<Assignment> assignment;
};
ParsedSolution parse_solution(const std::string& text, const MilpModel& model);

/// Returns rows violated by the assignment; empty means "accept".
using SeparationCallback = std::function<std::vector<Constraint>(const Assignment&)>;

struct SeparationOptions {
  double time_limit_s = 60.0;
  std::optional<std::int64_t> known_lower_bound;
  /// Turns a master solution into a fully feasible one. The best repaired
  /// solution seeds later master solves and is the upper bound reported on
  /// timeout. May return nullopt.
  std::function<std::optional<Assignment>(const Assignment&)> repair;
  /// With the internal backend, run the callbacks as lazy constraints inside
  /// one search instead of re-solving the master after every batch.
  bool lazy = true;
};

struct SeparationResult : MilpResult {
  int iterations = 0;
  int rows_added = 0;
  /// Master optimum after each re-solve.
  std::vector<std::int64_t> trajectory;
};

/// Outer loop: solve the master, ask the callbacks in order, add the first
/// non-empty batch of rows and re-solve; stop when every callback accepts.
/// In lazy mode the callbacks also run at each integer leaf of the master
/// search. Rows are appended to `model`.
SeparationResult solve_with_separation(MilpModel& model, const std::vector<SeparationCallback>& callbacks,
                                       const Backend& backend = {}, const SeparationOptions& opts = {});

}  // namespace zf::milp
