#!/usr/bin/env python3
"""Reachable-set figures for the four reference parameter sets.

Writes <outdir>/reachable_w<omega0>_g<gamma1>_<gamma2>.svg plus the matching
_boundary.csv and _report.json for each set, through the same code path as
`su2mintime reachable`.
"""

import argparse
import os
import sys

from su2mintime.cli import run

# (name, omega0, gamma1, gamma2); physical times t = 0.6, 1.0, 1.4
PANELS = [(4, 1, 3), (4, 2, 3), (2, 1, 3), (2, 2, 3)]
TIMES = "0.6,1.0,1.4"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", nargs="?", default="figures")
    ap.add_argument("--resolution", type=int, default=2048)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for w0, g1, g2 in PANELS:
        name = f"reachable_w{w0}_g{g1}_{g2}"
        argv = ["reachable", "--omega0", str(w0), "--gamma1", str(g1), "--gamma2", str(g2),
                "--times", TIMES, "--resolution", str(args.resolution), "--out", os.path.join(args.outdir, name)]
        code = run(argv)
        if code:
            return code
        print(f"{name}: omega0={w0} gamma1={g1} gamma2={g2}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
