#!/usr/bin/env python3
"""Minimum times for diagonal targets exp(i lambda sigma_z) at the reference parameters.

Prints a CSV table: asymmetric-bound time, branch and frequency of the
optimal extremal, and the symmetric-bound time with gamma = hypot(gamma1, gamma2).
"""

import argparse
import math
import sys

from su2mintime import DegenerateError, ProblemParams, min_time_diagonal, symmetric_bound_time
from su2mintime.emit import csv_text

PARAMS = [(4, 1, 3), (4, 2, 3), (2, 1, 3), (2, 2, 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--angles", default="0.25,0.5,1,1.5707963267948966,2,2.5,3.141592653589793",
                    help="comma-separated lambda values (rad)")
    args = ap.parse_args()
    lams = [float(s) for s in args.angles.split(",") if s.strip()]
    rows = []
    for w0, g1, g2 in PARAMS:
        p = ProblemParams(w0, g1, g2)
        for lam in lams:
            r = min_time_diagonal(p, lam)
            try:
                t_sym = symmetric_bound_time(w0, math.hypot(g1, g2), lam)
            except DegenerateError:
                t_sym = math.nan
            rows.append((float(w0), float(g1), float(g2), lam, r.t_f, r.branch.value, r.omega, t_sym))
    sys.stdout.write(csv_text(["omega0", "gamma1", "gamma2", "lambda", "t_f", "branch", "omega", "t_f_sym"], rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
