"""Reads models written by `pebble emit-ilp` with HiGHS' LP-format reader."""

import os
import subprocess
import sys
import tempfile

import highspy


def read(cli, graph, relax):
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "model.lp")
        cmd = [cli, "emit-ilp", "--graph", graph, "--out", path] + (["--relax"] if relax else [])
        subprocess.run(cmd, check=True, capture_output=True)
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        status = h.readModel(path)
        if status != highspy.HighsStatus.kOk:
            raise SystemExit(f"{graph}: reader returned {status}")
        return h.getLp()


def main():
    cli = sys.argv[1]
    # graph, vertices, directed edges
    cases = [("path:2", 2, 2), ("path:3", 3, 4), ("cycle:5", 5, 10), ("grid:3,3", 9, 24)]
    for graph, n, arcs in cases:
        for relax in (False, True):
            lp = read(cli, graph, relax)
            cols = n + n * arcs
            rows = n + n * n
            if lp.num_col_ != cols or lp.num_row_ != rows:
                raise SystemExit(f"{graph}: {lp.num_col_} columns, {lp.num_row_} rows; want {cols}, {rows}")
            names = set(lp.col_names_)
            for v in range(n):
                if f"P_{v}" not in names:
                    raise SystemExit(f"{graph}: missing P_{v}")
            kinds = {str(k) for k in lp.integrality_} if len(lp.integrality_) else {"continuous"}
            integral = all(k == highspy.HighsVarType.kInteger for k in lp.integrality_) and len(lp.integrality_) == cols
            if integral == relax:
                raise SystemExit(f"{graph}: integrality {kinds} with relax={relax}")
            print(f"{graph} relax={relax}: {lp.num_col_} columns, {lp.num_row_} rows")
    print("ok")


if __name__ == "__main__":
    main()
