#!/usr/bin/env python3
"""Solve an LP-format model with HiGHS and write an mmr-stp solution file.

Usage: highs_milp.py MODEL.lp SOLUTION

The solution file holds a `status` line, an `objective` line when a solution
exists, and one `name value` line per column.
"""

import sys

import highspy


def main(argv):
    if len(argv) != 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    lp_path, sol_path = argv[1], argv[2]
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    if h.readModel(lp_path) != highspy.HighsStatus.kOk:
        print(f"cannot read {lp_path}", file=sys.stderr)
        return 1
    h.run()
    status = h.getModelStatus()
    with open(sol_path, "w") as out:
        if status == highspy.HighsModelStatus.kOptimal:
            out.write("status optimal\n")
            out.write(f"objective {h.getInfo().objective_function_value!r}\n")
            values = h.getSolution().col_value
            for i, v in enumerate(values):
                out.write(f"{h.getColName(i)[1]} {v!r}\n")
        elif status == highspy.HighsModelStatus.kInfeasible:
            out.write("status infeasible\n")
        else:
            out.write(f"status {h.modelStatusToString(status).replace(' ', '_')}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
