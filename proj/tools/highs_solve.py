#!/usr/bin/env python3
"""Solve an LP-format MILP with HiGHS and write a zf solution file.

usage: highs_solve.py LP_PATH SOL_PATH TIME_LIMIT [option=value ...]

The solution file holds "# status <s>", "# objective <z>", "# bound <b>"
headers followed by one "name value" line per column.
"""
import math
import sys

import highspy


def main(argv):
    if len(argv) < 4:
        print(__doc__, file=sys.stderr)
        return 2
    lp_path, sol_path, limit = argv[1], argv[2], float(argv[3])
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if math.isfinite(limit) and limit < 1e8:
        h.setOptionValue("time_limit", limit)
    for opt in argv[4:]:
        key, _, value = opt.partition("=")
        for cast in (int, float, str):
            try:
                h.setOptionValue(key, cast(value))
                break
            except (ValueError, TypeError):
                continue
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    ms = h.getModelStatus()
    S = highspy.HighsModelStatus
    if ms == S.kOptimal:
        status = "optimal"
    elif ms in (S.kInfeasible, S.kUnboundedOrInfeasible):
        status = "infeasible"
    elif ms in (S.kTimeLimit, S.kInterrupt, S.kIterationLimit, S.kSolutionLimit):
        status = "timeout"
    else:
        print(f"unexpected model status {h.modelStatusToString(ms)}", file=sys.stderr)
        return 1
    info = h.getInfo()
    lines = [f"# status {status}"]
    has_sol = status != "infeasible" and info.primal_solution_status == 2
    if has_sol:
        lines.append(f"# objective {info.objective_function_value:.12g}")
    if status != "infeasible" and math.isfinite(info.mip_dual_bound):
        lines.append(f"# bound {info.mip_dual_bound:.12g}")
    if has_sol:
        lp = h.getLp()
        values = h.getSolution().col_value
        for name, value in zip(lp.col_names_, values):
            lines.append(f"{name} {round(value)}")
    with open(sol_path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
