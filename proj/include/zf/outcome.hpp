#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zf/vertex_set.hpp"

namespace zf {

enum class SolveStatus { optimal, timeout, infeasible, out_of_memory };

std::string to_string(SolveStatus s);

/// Counters reported by every solver. Keys are solver specific
/// ("sets_examined", "nodes", "forts_added", ...).
struct SolveStats {
  double wall_time_s = 0.0;
  std::map<std::string, std::int64_t> counters;

  std::int64_t get(const std::string& key) const {
    auto it = counters.find(key);
    return it == counters.end() ? 0 : it->second;
  }
  void add(const std::string& key, std::int64_t delta = 1) { counters[key] += delta; }
};

/// Result of a minimization over vertex sets. When status is optimal,
/// lower_bound == *best_value and incumbent is a witness of that size.
struct SolveOutcome {
  SolveStatus status = SolveStatus::timeout;
  std::optional<std::int64_t> best_value;
  std::optional<VertexSet> incumbent;
  std::int64_t lower_bound = 0;
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::optimal; }
  /// best_value when known, otherwise the trivial bound passed in.
  std::int64_t upper_bound_or(std::int64_t fallback) const { return best_value.value_or(fallback); }
};

/// Wall-clock budget shared by a solve and everything it calls.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  /// Non-positive or infinite seconds mean "no limit".
  explicit Deadline(double seconds = std::numeric_limits<double>::infinity())
      : start_(Clock::now()),
        limited_(seconds > 0 && seconds < 1e12),
        end_(limited_ ? start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds))
                      : Clock::time_point::max()) {}

  bool expired() const { return limited_ && Clock::now() >= end_; }
  double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
  /// Seconds left; +inf when unlimited.
  double remaining() const {
    if (!limited_) return std::numeric_limits<double>::infinity();
    return std::max(0.0, std::chrono::duration<double>(end_ - Clock::now()).count());
  }
  bool limited() const { return limited_; }

 private:
  Clock::time_point start_;
  bool limited_;
  Clock::time_point end_;
};

}  // namespace zf
