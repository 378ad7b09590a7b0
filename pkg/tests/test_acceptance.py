"""Acceptance criteria, one test each.

Every test prints a single 'criterion N: PASS/FAIL - ...' line (also
collected in the terminal summary) before asserting.
"""

import json
import math
import time

import numpy as np
from scipy import optimize

from oracles import expm_extremal
from su2mintime import (
    Branch,
    ExtremalSpec,
    ProblemParams,
    boundary_frequency,
    critical_frequency,
    critical_time,
    diagonal,
    extremal_element,
    min_time_diagonal,
    min_time_swap,
    sample_frontline,
    spiral_cuts,
    swap,
)
from su2mintime.cli import run, sweep_row
from su2mintime.extremals import control_uz, disk_alpha, frontline_point
from su2mintime.synthesis import lagrange_consistency_check
from su2mintime.verify import brute_force_min_time, propagate_extremals

REFERENCE_PARAMS = [(4.0, 1.0, 3.0), (4.0, 2.0, 3.0), (2.0, 1.0, 3.0), (2.0, 2.0, 3.0)]


def _random_spec(rng, p):
    branch = rng.choice([Branch.PLUS, Branch.MINUS, Branch.ZERO])
    if branch is Branch.PLUS:
        omega = p.c_plus - rng.uniform(0.0, 10.0)
    elif branch is Branch.MINUS:
        omega = p.c_minus + rng.uniform(0.0, 10.0)
    else:
        omega = rng.uniform(p.c_minus, p.c_plus)
    return ExtremalSpec(branch, float(omega), float(rng.uniform(0, 2 * math.pi)))


def test_c1_closed_form_matches_ode(record):
    rng = np.random.default_rng(1)
    ps, specs, ts = [], [], []
    for _ in range(200):
        p = ProblemParams(rng.uniform(-5, 5), rng.uniform(1e-6, 4), rng.uniform(0, 4))
        ps.append(p)
        specs.append(_random_spec(rng, p))
        ts.append(float(rng.uniform(0, 10)))
    start = time.perf_counter()
    alpha, _ = propagate_extremals(ps, specs, ts)
    exact = np.array([extremal_element(p, s, t).alpha for p, s, t in zip(ps, specs, ts)])
    elapsed = time.perf_counter() - start
    err = float(np.max(np.abs(alpha - exact)))
    ok = err < 1e-8 and elapsed < 30
    record(1, ok, f"max equiv-distance {err:.2e} over 200 samples in {elapsed:.1f} s")
    assert ok


def test_c2_swap_time(record):
    start = time.perf_counter()
    worst, exact = 0.0, True
    for g1 in (0.5, 1.0, 2.0):
        p = ProblemParams(4.0, g1, 3.0)
        r = min_time_swap(p)
        exact &= r.t_f == math.pi / g1
        bf = brute_force_min_time(p, swap())
        worst = max(worst, abs(bf - r.t_f) / r.t_f)
    elapsed = time.perf_counter() - start
    ok = exact and worst < 1e-3 and elapsed < 60
    record(2, ok, f"t_f == pi/gamma1: {exact}, oracle rel diff {worst:.2e}, {elapsed:.1f} s")
    assert ok


def test_c3_diagonal_gates(record):
    start = time.perf_counter()
    worst = 0.0
    for params in [(4, 1, 3), (2, 2, 3), (4, 2, 3)]:
        p = ProblemParams(*params)
        for lam in (math.pi / 4, math.pi / 2, math.pi, 1.5 * math.pi):
            r = min_time_diagonal(p, lam)
            bf = brute_force_min_time(p, diagonal(lam))
            worst = max(worst, abs(bf - r.t_f) / r.t_f)
    t_pi = min_time_diagonal(ProblemParams(4, 1, 3), math.pi).t_f
    elapsed = time.perf_counter() - start
    ok = worst < 1e-3 and abs(t_pi - 0.88858) < 1e-4 and elapsed < 300
    record(3, ok, f"oracle rel diff {worst:.2e} on 12 cases, t_f(4,1,3,pi) = {t_pi:.7f}, {elapsed:.1f} s")
    assert ok


def test_c4_dominance(record):
    rng = np.random.default_rng(4)
    violations, skipped = 0, 0
    for _ in range(500):
        omega0 = rng.uniform(-5, 5)
        gamma = rng.uniform(0.05, 5)
        th = rng.uniform(0, math.pi / 2)
        lam = rng.uniform(1e-3, 2 * math.pi - 1e-3)
        try:
            _, _, ok = sweep_row(omega0, gamma * math.sin(th), gamma * math.cos(th), lam)
        except Exception:
            skipped += 1
            continue
        violations += not ok
    lag = [lagrange_consistency_check(w, g, lam) for w, g, lam in
           [(1.0, 2.0, math.pi / 2), (4.0, math.sqrt(10), math.pi), (0.5, 3.0, 1.0), (3.0, 1.0, 5.0)]]
    cells = all(r.within_one_cell for r in lag)
    ok = violations == 0 and skipped == 0 and cells
    record(4, ok, f"{violations} violations, {skipped} skipped of 500; Lagrange argmin within one cell: {cells}")
    assert ok


def _tangent(p, branch, w, tau, side):
    # second-order one-sided difference along omega
    h = side * 1e-4 / max(tau, 1.0)
    f = lambda x: complex(disk_alpha(p, branch, x, tau))
    d = (-3 * f(w) + 4 * f(w + h) - f(w + 2 * h)) / (2 * h)
    return d / abs(d)


def test_c5_geometry_invariants(record):
    rng = np.random.default_rng(5)
    arc = slope = rot = 0.0
    for _ in range(1000):
        p = ProblemParams(rng.uniform(-5, 5), rng.uniform(0.05, 4), rng.uniform(0, 4))
        tau = rng.uniform(0, math.pi / p.gamma1)
        w = rng.uniform(p.c_minus, p.c_plus) if p.gamma2 > 0 else p.omega0
        x0, y0 = frontline_point(p, Branch.ZERO, w, tau)
        arc = max(arc, abs(x0**2 + y0**2 - math.cos(p.gamma1 * tau) ** 2))

        wp = p.c_plus - rng.uniform(0, 8)
        lhs = complex(disk_alpha(p, Branch.MINUS, wp - 2 * p.gamma2, tau))
        rhs = np.exp(2j * p.gamma2 * tau) * complex(disk_alpha(p, Branch.PLUS, wp, tau))
        rot = max(rot, abs(lhs - rhs))

        # tangent directions at the junctions; the slope cot(omega tau) is the direction (sin, cos)
        q = ProblemParams(p.omega0, p.gamma1, max(p.gamma2, 0.05))
        ts = rng.uniform(0.05, 0.95) * math.pi / (2 * q.gamma1)
        for branch, side in ((Branch.PLUS, -1), (Branch.MINUS, 1)):
            wj = q.c_plus if branch is Branch.PLUS else q.c_minus
            t0 = _tangent(q, Branch.ZERO, wj, ts, side)
            t1 = _tangent(q, branch, wj, ts, side)
            ref = complex(math.sin(wj * ts), math.cos(wj * ts))
            slope = max(slope, abs((t0.conjugate() * t1).imag), abs((t0.conjugate() * ref).imag))
    ok = arc < 1e-12 and slope < 1e-6 and rot < 1e-12
    record(5, ok, f"arc law {arc:.1e}, junction slope {slope:.1e}, rotation relation {rot:.1e} (1000 samples each)")
    assert ok


# --- criterion 6: critical quantities against root finding on |alpha| = 1 ---


def _signed_transverse(p, branch, omega, tau):
    """(gamma1/a) sin(a tau) from the matrix-exponential oracle; it changes sign where |alpha| = 1."""
    alpha, beta = expm_extremal(p.omega0, p.gamma1, control_uz(p, branch, omega), omega, 2 * tau)
    return (1j * np.exp(-1j * omega * tau) * beta).real


def _first_root(f, lo, hi, n=400):
    xs = np.linspace(lo, hi, n + 1)
    vals = [f(x) for x in xs]
    for k in range(n):
        if vals[k] == 0:
            return xs[k]
        if vals[k] * vals[k + 1] < 0:
            return optimize.brentq(f, xs[k], xs[k + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return None


def _touch_tau(p, branch, omega):
    return _first_root(lambda s: _signed_transverse(p, branch, omega, s), 1e-6, 1.01 * math.pi / p.gamma1, n=64)


def _touch_alpha(p, branch, omega):
    tau = _touch_tau(p, branch, omega)
    return expm_extremal(p.omega0, p.gamma1, control_uz(p, branch, omega), omega, 2 * tau)[0]


def _touch_angle_rate(p, branch, omega, h=2e-5):
    return np.angle(_touch_alpha(p, branch, omega + h) / _touch_alpha(p, branch, omega - h)) / (2 * h)


def _stationary_frequency(p, branch, c):
    """Frequency where the border-touch angle is stationary (the spiral's turning point)."""
    lo, hi = (c + 1e-3, c + 40.0) if c > 0 else (c - 40.0, c - 1e-3)
    return _first_root(lambda w: _touch_angle_rate(p, branch, w), lo, hi, n=200)


def test_c6_critical_quantities(record):
    worst_w = worst_t = worst_b = 0.0
    detect_ok = True
    for params in REFERENCE_PARAMS:
        p = ProblemParams(*params)
        for branch in (Branch.PLUS, Branch.MINUS):
            c = p.omega0 + branch.sign * p.gamma2
            wc = _stationary_frequency(p, branch, c)
            worst_w = max(worst_w, abs(wc - critical_frequency(p, branch)))
            tc = _touch_tau(p, branch, wc)
            worst_t = max(worst_t, abs(tc - critical_time(p, branch)))
            in_range = wc < p.c_plus if branch is Branch.PLUS else wc > p.c_minus
            detect_ok &= in_range == spiral_cuts(p, branch)
            sign = -1 if branch is Branch.PLUS else 1
            for tau in (0.3, 0.8, 1.3):
                if p.gamma1 * tau >= math.pi:
                    continue
                root = _first_root(lambda w: _signed_transverse(p, branch, w, tau),
                                   c, c + sign * 40.0, n=2000)
                worst_b = max(worst_b, abs(root - boundary_frequency(p, branch, tau, sign)))
    tc_413 = critical_time(ProblemParams(4, 1, 3), Branch.MINUS)
    tc_ok = abs(tc_413 - math.pi / math.sqrt(2)) < 1e-12
    ok = max(worst_w, worst_t, worst_b) < 1e-8 and detect_ok and tc_ok
    record(6, ok, f"omega_c {worst_w:.1e}, t_c {worst_t:.1e}, boundary omega {worst_b:.1e}, "
                  f"spiral-loss detection {detect_ok}, t_c(4,1,3,minus) = pi/sqrt2 on the tau clock: {tc_ok}")
    assert ok


def test_c7_figure_reproduction(record, tmp_path):
    out = tmp_path / "ref"
    code = run(["reachable", "--omega0", "4", "--gamma1", "1", "--gamma2", "3",
                "--times", "0.6,1.0,1.4", "--out", str(out)])
    rep = json.loads((tmp_path / "ref_report.json").read_text())
    bs = rep["boundaries"]
    closed = code == 0 and len(bs) == 3 and all(b["closed"] for b in bs)
    nested = rep["nested"] == [True, True]
    rad = max(b["zero_arc"]["radius_error"] for b in bs)
    ang = max(b["zero_arc"]["angle_error"] for b in bs)
    expected = all(abs(b["zero_arc"]["expected_radius"] - math.cos(b["t"] / 2)) < 1e-15 for b in bs)
    alternate = rep.get("alternate", {}).get("interpretation") == "tau = t" and len(rep["alternate"]["boundaries"]) == 3
    svg = (tmp_path / "ref.svg").read_text()
    ok = closed and nested and rad < 1e-9 and ang < 1e-9 and expected and alternate and svg.count('id="boundary-') == 3
    record(7, ok, f"closed {closed}, nested {nested}, arc radius err {rad:.1e}, arc angle err {ang:.1e}, "
                  f"alternate tau = t emitted {alternate}")
    assert ok


def test_c8_gamma2_zero(record):
    rng = np.random.default_rng(8)
    point = pm = two = 0.0
    for _ in range(200):
        p = ProblemParams(rng.uniform(-5, 5), rng.uniform(0.05, 4), 0.0)
        tau = rng.uniform(0.01, 0.99) * math.pi / p.gamma1
        z = sample_frontline(p, Branch.ZERO, tau, 33)
        ref = math.cos(p.gamma1 * tau) * np.exp(-1j * p.omega0 * tau)
        point = max(point, max(abs(complex(q.x, q.y) - ref) for q in z))
        ws = p.omega0 + rng.uniform(-6, 6, 16)
        ap = disk_alpha(p, Branch.PLUS, ws, tau)
        am = disk_alpha(p, Branch.MINUS, ws, tau)
        pm = max(pm, float(np.max(np.abs(ap - am))))
        # the two-control front line from the matrix-exponential oracle (u_z = 0)
        for branch in (Branch.PLUS, Branch.MINUS):
            s = sample_frontline(p, branch, tau, 17)
            for q in s:
                a = expm_extremal(p.omega0, p.gamma1, 0.0, q.omega, 2 * tau)[0]
                two = max(two, abs(complex(q.x, q.y) - a))
    ok = point < 1e-12 and pm < 1e-12 and two < 1e-12
    record(8, ok, f"Zero branch spread {point:.1e}, |Plus - Minus| {pm:.1e}, two-control oracle {two:.1e}")
    assert ok
