#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "zf/milp.hpp"

namespace zf::milp {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Row {
  int begin, end;
  std::int64_t lo, hi;  // lo <= activity <= hi, +-kInf when absent
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const SolveOptions& opts)
      : model_(model), opts_(opts), deadline_(opts.time_limit_s) {
    const int nv = model.num_variables();
    lo_.resize(nv);
    hi_.resize(nv);
    cost_.resize(nv);
    prio_.resize(nv);
    cols_.resize(nv);
    for (int j = 0; j < nv; ++j) {
      const Variable& v = model.variable(j);
      lo_[j] = v.lo;
      hi_[j] = v.hi;
      orig_lo_.push_back(v.lo);
      orig_hi_.push_back(v.hi);
      cost_[j] = v.cost;
      prio_[j] = v.priority;
    }
    for (const Constraint& c : model.constraints()) add_row(c);
    // objective cutoff row: sum cost*x <= best - 1
    cutoff_ = static_cast<int>(rows_.size());
    Row r{static_cast<int>(var_.size()), 0, -kInf, kInf};
    for (int j = 0; j < nv; ++j)
      if (cost_[j] != 0) {
        cols_[j].push_back(cutoff_);
        var_.push_back(j);
        coef_.push_back(cost_[j]);
      }
    r.end = static_cast<int>(var_.size());
    rows_.push_back(r);
    queued_.assign(rows_.size(), 0);
    rc_.resize(nv);
  }

  MilpResult run() {
    MilpResult res;
    if (opts_.hint && model_.feasible(*opts_.hint)) {
      best_ = model_.objective(*opts_.hint);
      best_x_ = *opts_.hint;
    }
    known_lb_ = opts_.known_lower_bound.value_or(-kInf);
    if (opts_.guide && opts_.guide->size() == lo_.size()) guide_ = &*opts_.guide;
    for (std::size_t i = 0; i < rows_.size(); ++i) enqueue(static_cast<int>(i));
    bool done = best_ < kInf && best_ <= known_lb_;
    if (!done) dfs();
    res.stats.add("nodes", nodes_);
    res.stats.add("incumbents", incumbents_);
    if (opts_.lazy) res.stats.add("lazy_rows", lazy_rows_);
    res.stats.wall_time_s = deadline_.elapsed();
    if (best_ < kInf) {
      res.assignment = best_x_;
      res.objective = best_;
    }
    if (!aborted_) {
      res.status = best_ < kInf ? SolveStatus::optimal : SolveStatus::infeasible;
      res.lower_bound = best_ < kInf ? best_ : 0;
    } else {
      res.status = SolveStatus::timeout;
      std::int64_t trivial = 0;
      for (std::size_t j = 0; j < lo_.size(); ++j) trivial += std::min(cost_[j] * lo_[j], cost_[j] * hi_[j]);
      std::int64_t lb = std::max({abort_bound_, known_lb_, trivial});
      if (best_ < kInf && lb > best_) lb = best_;
      res.lower_bound = lb;
    }
    return res;
  }

 private:
  struct Change {
    int var;
    std::int64_t lo, hi;
  };

  void add_row(const Constraint& c) {
    const int ri = static_cast<int>(rows_.size());
    Row r{static_cast<int>(var_.size()), 0, -kInf, kInf};
    for (const Term& t : c.terms) {
      cols_[t.var].push_back(ri);
      var_.push_back(t.var);
      coef_.push_back(t.coef);
    }
    r.end = static_cast<int>(var_.size());
    if (c.sense != Sense::le) r.lo = c.rhs;
    if (c.sense != Sense::ge) r.hi = c.rhs;
    rows_.push_back(r);
    queued_.push_back(0);
  }

  std::int64_t activity(const Row& r, const Assignment& x) const {
    std::int64_t act = 0;
    for (int k = r.begin; k < r.end; ++k) act += coef_[k] * x[var_[k]];
    return act;
  }

  // Every row except the cutoff, and the original bounds.
  bool satisfies(const Assignment& x) const {
    if (x.size() != lo_.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] < orig_lo_[j] || x[j] > orig_hi_[j]) return false;
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
      if (i == cutoff_) continue;
      std::int64_t act = activity(rows_[i], x);
      if (act < rows_[i].lo || act > rows_[i].hi) return false;
    }
    return true;
  }

  void enqueue(int r) {
    if (!queued_[r]) {
      queued_[r] = 1;
      queue_.push_back(r);
    }
  }
  void touch(int j) {
    for (int r : cols_[j]) enqueue(r);
  }
  bool set_lo(int j, std::int64_t v) {
    if (v <= lo_[j]) return true;
    if (v > hi_[j]) return false;
    trail_.push_back({j, lo_[j], hi_[j]});
    lo_[j] = v;
    touch(j);
    return true;
  }
  bool set_hi(int j, std::int64_t v) {
    if (v >= hi_[j]) return true;
    if (v < lo_[j]) return false;
    trail_.push_back({j, lo_[j], hi_[j]});
    hi_[j] = v;
    touch(j);
    return true;
  }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const Change& c = trail_.back();
      lo_[c.var] = c.lo;
      hi_[c.var] = c.hi;
      trail_.pop_back();
    }
  }
  void clear_queue() {
    for (int r : queue_) queued_[r] = 0;
    queue_.clear();
  }

  bool propagate() {
    std::size_t head = 0;
    while (head < queue_.size()) {
      int ri = queue_[head++];
      queued_[ri] = 0;
      if (head > 4096) {
        queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
        head = 0;
      }
      const Row& r = rows_[ri];
      std::int64_t mn = 0, mx = 0;
      for (int k = r.begin; k < r.end; ++k) {
        std::int64_t a = coef_[k];
        int j = var_[k];
        if (a > 0) {
          mn += a * lo_[j];
          mx += a * hi_[j];
        } else {
          mn += a * hi_[j];
          mx += a * lo_[j];
        }
      }
      if (mn > r.hi || mx < r.lo) {
        queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
        clear_queue();
        return false;
      }
      if (r.hi < kInf && mx > r.hi) {
        std::int64_t slack = r.hi - mn;
        for (int k = r.begin; k < r.end; ++k) {
          std::int64_t a = coef_[k];
          int j = var_[k];
          if (lo_[j] == hi_[j]) continue;
          bool ok = a > 0 ? set_hi(j, lo_[j] + slack / a) : set_lo(j, hi_[j] - slack / (-a));
          if (!ok) {
            queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
            clear_queue();
            return false;
          }
        }
      }
      if (r.lo > -kInf && mn < r.lo) {
        std::int64_t slack = mx - r.lo;
        for (int k = r.begin; k < r.end; ++k) {
          std::int64_t a = coef_[k];
          int j = var_[k];
          if (lo_[j] == hi_[j]) continue;
          bool ok = a > 0 ? set_lo(j, hi_[j] - slack / a) : set_hi(j, lo_[j] + slack / (-a));
          if (!ok) {
            queue_.erase(queue_.begin(), queue_.begin() + static_cast<std::ptrdiff_t>(head));
            clear_queue();
            return false;
          }
        }
      }
    }
    queue_.clear();
    return true;
  }

  // Greedy dual ascent over covering row sides: a side a'x >= L' (a ">=" row
  // as is, a "<=" row negated) whose free variables all have positive
  // coefficients. Fills rc_ and returns the Lagrangian bound; branch_row_
  // receives the unsatisfied covering side with fewest free variables.
  std::int64_t bound() {
    const int nv = static_cast<int>(lo_.size());
    std::int64_t fixed = 0;
    for (int j = 0; j < nv; ++j) {
      rc_[j] = cost_[j];
      if (lo_[j] == hi_[j]) fixed += cost_[j] * lo_[j];
    }
    order_.clear();
    branch_row_ = -1;
    int branch_free = std::numeric_limits<int>::max();
    for (int i = 0; i < static_cast<int>(rows_.size()); ++i) {
      if (i == cutoff_) continue;
      const Row& r = rows_[i];
      for (int sign : {1, -1}) {
        if (sign > 0 ? r.lo == -kInf : r.hi == kInf) continue;
        std::int64_t residual = sign > 0 ? r.lo : -r.hi;  // after fixed variables
        std::int64_t slack_at_lo = residual;              // after every variable at its lower bound
        int free_count = 0;
        bool covering = true;
        for (int k = r.begin; k < r.end; ++k) {
          int j = var_[k];
          std::int64_t a = sign * coef_[k];
          slack_at_lo -= a * lo_[j];
          if (lo_[j] == hi_[j]) {
            residual -= a * lo_[j];
          } else if (a < 0) {
            covering = false;
            break;
          } else {
            ++free_count;
          }
        }
        if (!covering || slack_at_lo <= 0 || free_count == 0) continue;
        order_.push_back({free_count, i, sign, residual});
        if (free_count < branch_free) {
          branch_free = free_count;
          branch_row_ = i;
          branch_sign_ = sign;
        }
      }
    }
    std::sort(order_.begin(), order_.end(), [](const Pending& a, const Pending& b) {
      if (a.free_count != b.free_count) return a.free_count < b.free_count;
      return a.row != b.row ? a.row < b.row : a.sign > b.sign;
    });
    std::int64_t dual = 0;
    for (const Pending& p : order_) {
      const Row& r = rows_[p.row];
      std::int64_t u = kInf;
      for (int k = r.begin; k < r.end; ++k) {
        int j = var_[k];
        if (lo_[j] == hi_[j]) continue;
        u = std::min(u, floor_div(rc_[j], p.sign * coef_[k]));
      }
      if (u <= 0) continue;
      dual += u * p.residual;
      for (int k = r.begin; k < r.end; ++k) {
        int j = var_[k];
        if (lo_[j] != hi_[j]) rc_[j] -= u * p.sign * coef_[k];
      }
    }
    std::int64_t free_part = 0;
    for (int j = 0; j < nv; ++j)
      if (lo_[j] != hi_[j]) free_part += std::min(rc_[j] * lo_[j], rc_[j] * hi_[j]);
    return fixed + dual + free_part;
  }

  // Picks the branching variable; returns -1 when every variable is fixed.
  int choose(bool& up_first) {
    if (branch_row_ >= 0) {
      const Row& r = rows_[branch_row_];
      int pick = -1;
      for (int k = r.begin; k < r.end; ++k) {
        int j = var_[k];
        if (lo_[j] == hi_[j]) continue;
        if (pick < 0 || better(j, pick)) pick = j;
      }
      if (pick >= 0) {
        // raising the variable moves the covering side towards satisfaction
        up_first = branch_sign_ * coef_of(r, pick) > 0;
        return pick;
      }
    }
    int pick = -1;
    for (int j = 0; j < static_cast<int>(lo_.size()); ++j) {
      if (lo_[j] == hi_[j]) continue;
      if (pick < 0 || prio_[j] < prio_[pick]) pick = j;
    }
    if (pick >= 0) up_first = guide_ ? (*guide_)[pick] > lo_[pick] : cost_[pick] < 0;
    return pick;
  }

  bool better(int j, int k) const {
    if (prio_[j] != prio_[k]) return prio_[j] < prio_[k];
    if (guide_) {
      bool gj = (*guide_)[j] > lo_[j], gk = (*guide_)[k] > lo_[k];
      if (gj != gk) return gj;
    }
    return rc_[j] < rc_[k];
  }

  std::int64_t coef_of(const Row& r, int j) const {
    for (int k = r.begin; k < r.end; ++k)
      if (var_[k] == j) return coef_[k];
    return 0;
  }

  void record_incumbent(const Assignment& x) {
    std::int64_t z = 0;
    for (std::size_t j = 0; j < x.size(); ++j) z += cost_[j] * x[j];
    if (z >= best_) return;
    best_ = z;
    best_x_ = x;
    ++incumbents_;
    rows_[cutoff_].hi = best_ - 1;
    if (best_ <= known_lb_) stop_ = true;
  }

  // All variables are fixed. Rows added lazily since the last propagation
  // may still be violated.
  void leaf() {
    if (!opts_.lazy) {
      record_incumbent(lo_);
      return;
    }
    for (int i = cutoff_ + 1; i < static_cast<int>(rows_.size()); ++i) {
      std::int64_t act = activity(rows_[i], lo_);
      if (act < rows_[i].lo || act > rows_[i].hi) return;
    }
    LazyCuts cuts = opts_.lazy(lo_);
    if (cuts.incumbent && satisfies(*cuts.incumbent)) record_incumbent(*cuts.incumbent);
    if (cuts.rows.empty()) {
      record_incumbent(lo_);
      return;
    }
    const int first = static_cast<int>(rows_.size());
    for (const Constraint& c : cuts.rows) add_row(c);
    bool cut = false;
    for (int i = first; i < static_cast<int>(rows_.size()); ++i) {
      std::int64_t act = activity(rows_[i], lo_);
      cut = cut || act < rows_[i].lo || act > rows_[i].hi;
    }
    if (!cut) throw std::logic_error("lazy rows do not cut off the leaf");
    lazy_rows_ += static_cast<std::int64_t>(cuts.rows.size());
  }

  // Lower bound over the unexplored part of the tree when the search aborts.
  void note_abort(std::int64_t current) {
    aborted_ = true;
    std::int64_t lb = current;
    for (const Frame& f : frames_)
      if (f.pending) lb = std::min(lb, f.bound);
    abort_bound_ = lb;
  }

  void dfs() {
    ++nodes_;
    std::int64_t parent = frames_.empty() ? -kInf : frames_.back().bound;
    if ((nodes_ & 127) == 0 && deadline_.expired()) {
      note_abort(parent);
      return;
    }
    enqueue(cutoff_);
    if (!propagate()) return;
    std::int64_t lb = 0;
    for (int round = 0;; ++round) {
      lb = bound();
      if (lb >= best_) return;
      if (best_ >= kInf || round >= 3) break;
      bool changed = false;
      for (std::size_t j = 0; j < lo_.size(); ++j) {
        if (lo_[j] == hi_[j] || rc_[j] <= 0) continue;
        std::int64_t room = (best_ - 1 - lb) / rc_[j];
        if (lo_[j] + room < hi_[j]) {
          set_hi(static_cast<int>(j), lo_[j] + room);
          changed = true;
        }
      }
      if (!changed) break;
      if (!propagate()) return;
    }
    lb = std::max(lb, parent);
    bool up_first = false;
    int j = choose(up_first);
    if (j < 0) {
      leaf();
      return;
    }
    frames_.push_back({lb, true});
    const std::size_t mark = trail_.size();
    const int rows_at_entry = static_cast<int>(rows_.size());
    const std::int64_t l = lo_[j];
    for (int side = 0; side < 2; ++side) {
      if (side == 1) {
        frames_.back().pending = false;
        if (lb >= best_) break;  // the incumbent improved while exploring the first side
      }
      // lazy rows from the first side have not been propagated here yet
      for (int i = rows_at_entry; i < static_cast<int>(rows_.size()); ++i) enqueue(i);
      bool up = (side == 0) == up_first;
      bool ok = up ? set_lo(j, l + 1) : set_hi(j, l);
      if (ok) dfs();
      clear_queue();
      undo(mark);
      if (aborted_ || stop_) break;
    }
    frames_.pop_back();
  }

  struct Pending {
    int free_count;
    int row;
    int sign;
    std::int64_t residual;
  };
  struct Frame {
    std::int64_t bound;
    bool pending;
  };

  const MilpModel& model_;
  SolveOptions opts_;
  Deadline deadline_;
  std::vector<std::int64_t> lo_, hi_, cost_, rc_, orig_lo_, orig_hi_;
  std::vector<int> prio_;
  std::vector<std::vector<int>> cols_;
  std::vector<int> var_;
  std::vector<std::int64_t> coef_;
  std::vector<Row> rows_;
  int cutoff_ = 0;
  std::vector<int> queue_;
  std::vector<char> queued_;
  std::vector<Change> trail_;
  std::vector<Pending> order_;
  std::vector<Frame> frames_;
  int branch_row_ = -1;
  int branch_sign_ = 1;
  std::int64_t best_ = kInf;
  Assignment best_x_;
  const Assignment* guide_ = nullptr;
  std::int64_t known_lb_ = -kInf;
  std::int64_t nodes_ = 0;
  std::int64_t incumbents_ = 0;
  std::int64_t lazy_rows_ = 0;
  bool aborted_ = false;
  bool stop_ = false;
  std::int64_t abort_bound_ = 0;
};

}  // namespace

MilpResult internal_backend_solve(const MilpModel& model, const SolveOptions& opts) {
  BranchAndBound bb(model, opts);
  return bb.run();
}

}  // namespace zf::milp
