#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zf/milp.hpp"

namespace zf::milp {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string substitute(std::string s, const std::string& key, const std::string& value) {
  for (std::size_t pos = s.find(key); pos != std::string::npos; pos = s.find(key, pos + value.size()))
    s.replace(pos, key.size(), value);
  return s;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'')
      out += "'\\''";
    else
      out += ch;
  }
  return out + "'";
}

std::string tail(const std::string& s, std::size_t n) { return s.size() <= n ? s : "..." + s.substr(s.size() - n); }

std::int64_t trivial_bound(const MilpModel& m) {
  std::int64_t z = 0;
  for (const Variable& v : m.variables()) z += std::min(v.cost * v.lo, v.cost * v.hi);
  return z;
}

}  // namespace

MilpResult external_backend_solve(const MilpModel& model, const ExternalSolverConfig& cfg, const SolveOptions& opts) {
  if (cfg.command.empty()) throw BackendError("external backend: no command configured");
  Deadline deadline(opts.time_limit_s);
  static std::atomic<int> counter{0};
  std::filesystem::path dir = cfg.work_dir.empty() ? std::filesystem::temp_directory_path() : cfg.work_dir;
  std::filesystem::create_directories(dir);
  std::string stem = "zf_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  auto lp = dir / (stem + ".lp");
  auto sol = dir / (stem + ".sol");
  auto log = dir / (stem + ".log");
  std::filesystem::remove(sol);
  export_lp(model, lp);

  std::ostringstream limit;
  limit << (deadline.limited() ? opts.time_limit_s : 1e9);
  std::string cmd = substitute(cfg.command, "{lp_path}", shell_quote(lp.string()));
  cmd = substitute(cmd, "{sol_path}", shell_quote(sol.string()));
  cmd = substitute(cmd, "{time_limit}", limit.str());
  cmd = substitute(cmd, "{params}", cfg.params);
  int rc = std::system(("(" + cmd + ") > " + shell_quote(log.string()) + " 2>&1").c_str());
  std::string diagnostics = read_file(log);
  auto cleanup = [&] {
    if (cfg.keep_files) return;
    std::error_code ec;
    std::filesystem::remove(lp, ec);
    std::filesystem::remove(sol, ec);
    std::filesystem::remove(log, ec);
  };
  if (rc != 0 || !std::filesystem::exists(sol)) {
    cleanup();
    throw BackendError("external solver failed (exit status " + std::to_string(rc) + ") running: " + cmd +
                       "\n" + tail(diagnostics, 2000));
  }
  ParsedSolution parsed;
  try {
    parsed = parse_solution(read_file(sol), model);
  } catch (...) {
    cleanup();
    throw;
  }
  cleanup();

  MilpResult res;
  res.stats.wall_time_s = deadline.elapsed();
  std::string status = parsed.status.value_or(parsed.assignment ? "optimal" : "unknown");
  if (parsed.assignment) {
    if (!model.feasible(*parsed.assignment)) {
      if (status == "optimal")
        throw BackendError("external solver returned an infeasible assignment (violation at index " +
                           std::to_string(model.first_violation(*parsed.assignment)) + ")");
    } else {
      res.assignment = parsed.assignment;
      res.objective = model.objective(*parsed.assignment);
    }
  }
  if (status == "optimal") {
    if (!res.objective) throw BackendError("external solver reported optimal without a solution");
    res.status = SolveStatus::optimal;
    res.lower_bound = *res.objective;
  } else if (status == "infeasible") {
    res.status = SolveStatus::infeasible;
  } else if (status == "timeout" || status == "time_limit") {
    res.status = SolveStatus::timeout;
    std::int64_t lb = std::max(trivial_bound(model), opts.known_lower_bound.value_or(trivial_bound(model)));
    if (parsed.bound) lb = std::max(lb, static_cast<std::int64_t>(std::ceil(*parsed.bound - 1e-6)));
    if (res.objective) lb = std::min(lb, *res.objective);
    res.lower_bound = lb;
  } else {
    throw BackendError("external solver reported unknown status '" + status + "'\n" + tail(diagnostics, 2000));
  }
  return res;
}

MilpResult solve_milp(const MilpModel& model, const Backend& backend, const SolveOptions& opts) {
  if (backend.kind == Backend::Kind::external) return external_backend_solve(model, backend.external, opts);
  return internal_backend_solve(model, opts);
}

SeparationResult solve_with_separation(MilpModel& model, const std::vector<SeparationCallback>& callbacks,
                                       const Backend& backend, const SeparationOptions& opts) {
  Deadline deadline(opts.time_limit_s);
  SeparationResult res;
  std::optional<std::int64_t> known = opts.known_lower_bound;
  std::optional<Assignment> best_feasible;
  // the previous master optimum violates only the rows added since
  std::optional<Assignment> guide;
  auto consider_feasible = [&](const Assignment& a) {
    if (!best_feasible || model.objective(a) < model.objective(*best_feasible)) best_feasible = a;
  };
  std::int64_t lower = std::max(trivial_bound(model), known.value_or(trivial_bound(model)));
  while (true) {
    if (deadline.expired()) break;
    SolveOptions so;
    so.time_limit_s = deadline.limited() ? std::max(deadline.remaining(), 1e-3) : 0.0;
    // the master only gains rows, so its previous optimum stays a valid bound
    so.known_lower_bound = lower;
    // a repaired solution satisfies every row, including ones added later
    so.hint = best_feasible;
    so.guide = guide;
    if (opts.lazy && backend.kind == Backend::Kind::internal)
      so.lazy = [&](const Assignment& x) {
        LazyCuts out;
        for (const SeparationCallback& cb : callbacks) {
          out.rows = cb(x);
          if (!out.rows.empty()) break;
        }
        if (out.rows.empty()) return out;
        for (Constraint& c : out.rows) {
          if (model.row_satisfied(c, x))
            throw std::logic_error("separation callback returned a row that does not cut off the master solution");
          model.add_constraint(c);
          c = model.constraints().back();
          ++res.rows_added;
        }
        if (opts.repair)
          if (auto fixed = opts.repair(x); fixed && model.feasible(*fixed)) {
            consider_feasible(*fixed);
            out.incumbent = *fixed;
          }
        return out;
      };
    MilpResult master = solve_milp(model, backend, so);
    ++res.iterations;
    for (auto& [k, v] : master.stats.counters) res.stats.add("master_" + k, v);
    if (master.status == SolveStatus::infeasible) {
      res.status = SolveStatus::infeasible;
      res.stats.wall_time_s = deadline.elapsed();
      return res;
    }
    lower = std::max(lower, master.lower_bound);
    if (master.status != SolveStatus::optimal) break;
    res.trajectory.push_back(*master.objective);
    const Assignment& x = *master.assignment;
    guide = x;
    std::vector<Constraint> cuts;
    for (const SeparationCallback& cb : callbacks) {
      cuts = cb(x);
      if (!cuts.empty()) break;
    }
    if (cuts.empty()) {
      res.status = SolveStatus::optimal;
      res.assignment = x;
      res.objective = *master.objective;
      res.lower_bound = *master.objective;
      res.stats.add("rows_added", res.rows_added);
      res.stats.add("iterations", res.iterations);
      res.stats.wall_time_s = deadline.elapsed();
      return res;
    }
    if (opts.repair)
      if (auto fixed = opts.repair(x); fixed && model.feasible(*fixed)) consider_feasible(*fixed);
    for (Constraint& c : cuts) {
      if (model.row_satisfied(c, x))
        throw std::logic_error("separation callback returned a row that does not cut off the master solution");
      model.add_constraint(std::move(c));
      ++res.rows_added;
    }
  }
  res.status = SolveStatus::timeout;
  if (best_feasible) {
    res.assignment = best_feasible;
    res.objective = model.objective(*best_feasible);
    lower = std::min(lower, *res.objective);
  }
  res.lower_bound = lower;
  res.stats.add("rows_added", res.rows_added);
  res.stats.add("iterations", res.iterations);
  res.stats.wall_time_s = deadline.elapsed();
  return res;
}

}  // namespace zf::milp
