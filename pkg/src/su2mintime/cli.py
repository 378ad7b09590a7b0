"""Command-line interface.

All frequencies are angular (rad per unit time) and all times are physical
times t; the rescaled clock tau = t / 2 used by the disk picture is internal
and appears only as an extra column or field.

Exit codes: 0 ok, 2 configuration error, 3 empty front line, 4 unreachable.
"""

import argparse
from dataclasses import dataclass, field
import itertools
import math
import os
import sys

import numpy as np
import shapely

from . import __version__
from .config import build_config, load_config
from .emit import SCHEMA_VERSION, csv_text, json_text, write_text
from .errors import (
    ConfigError,
    DegenerateError,
    EmptyLocus,
    NormalizationError,
    NotFound,
    RangeError,
    Unreachable,
)
from .extremals import (
    Branch,
    ExtremalSpec,
    branch_offset,
    critical_frequency,
    critical_time,
    disk_alpha,
    extremal_element,
)
from .frontlines import EDGE_BAND, classify, contains, reachable_boundary, sample_frontline, spiral_cuts
from .su2 import ProblemParams, diagonal, identity, make_element, swap
from .svg import render
from .synthesis import (
    _asym_time,
    min_time_diagonal,
    min_time_general,
    min_time_swap,
    symmetric_bound_time,
)
from .verify import IntegrationConfig, brute_force_min_time, costate_check, propagate_extremals

BRANCH_ORDER = (Branch.PLUS, Branch.MINUS, Branch.ZERO)
COSTATE_SAMPLES = 8  # costate integration is scalar RK4, so only the first few samples
ORACLE_REL_TOL = 1e-3


@dataclass
class Outcome:
    """Texts to write (path None means stdout) and summary lines."""

    outputs: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def _header(command, cfg, p=None):
    out = {"schema_version": SCHEMA_VERSION, "command": command, "version": __version__, "config": cfg.as_dict()}
    if p is not None:
        out["params"] = p.as_dict()
    return out


def _need_times(cfg):
    if not cfg.times:
        raise ConfigError("at least one time is required (--times)")
    return cfg.times


# --- frontline --------------------------------------------------------------


def cmd_frontline(cfg):
    """Sampled truncated front lines: one CSV row per (time, branch, omega)."""
    p = cfg.params()
    rows = []
    for t in _need_times(cfg):
        tau = 0.5 * t
        if tau == 0:
            # every trajectory still sits at the identity
            for b in BRANCH_ORDER:
                w = p.omega0 if b is Branch.ZERO else branch_offset(p, b)
                rows.append((b.value, w, 0.0, 1.0, 0.0))
            continue
        block = []
        for b in BRANCH_ORDER:
            try:
                samples = sample_frontline(p, b, tau, cfg.resolution)
            except EmptyLocus:
                continue
            block.extend((b.value, s.omega, s.tau, s.x, s.y) for s in samples)
        if not block:
            raise EmptyLocus(f"every front line is empty at t={t!r}")
        rows.extend(block)
    text = csv_text(["branch", "omega", "tau", "x", "y"], rows)
    return Outcome([(cfg.out, text)])


# --- reachable ----------------------------------------------------------------


def _zero_arc(p, rb):
    """Measured radius and angle of the Zero front-line arcs on a boundary."""
    segs = [s for s in rb.segments if s.kind == "front" and s.branch is Branch.ZERO]
    expect_r = math.cos(p.gamma1 * rb.tau)
    expect_a = 2 * p.gamma2 * rb.tau
    out = {
        "segments": len(segs),
        "expected_radius": expect_r,
        "expected_angle": expect_a if expect_a < 2 * math.pi else None,
    }
    if not segs:
        out.update(radius_error=None, angle=None, angle_error=None)
        return out
    pts = np.vstack([s.points for s in segs])
    rad = np.hypot(pts[:, 0], pts[:, 1])
    ang = sum(float(np.ptp(np.unwrap(np.arctan2(s.points[:, 1], s.points[:, 0])))) for s in segs)
    out["radius_error"] = float(np.max(np.abs(rad - abs(expect_r))))
    out["angle"] = ang
    out["angle_error"] = abs(ang - expect_a) if out["expected_angle"] is not None else None
    return out


def _boundary_summary(p, t, rb):
    verts = rb.vertices()
    counts = {}
    for s in rb.segments:
        key = f"{s.kind}:{s.branch.value if s.branch is not None else 'none'}"
        counts[key] = counts.get(key, 0) + 1
    # consecutive segments of each ring must share their end points
    gaps = []
    for k in range(len(rb.rings)):
        ring = [s for s in rb.segments if s.ring == k]
        gaps += [float(np.hypot(*(a.points[-1] - b.points[0]))) for a, b in zip(ring, ring[1:] + ring[:1])]
    return {
        "t": t,
        "tau": rb.tau,
        "closed": rb.closed,
        "rings": len(rb.rings),
        "area": rb.area,
        "segments": len(rb.segments),
        "segment_kinds": dict(sorted(counts.items())),
        "max_vertex_radius": float(np.max(np.hypot(verts[:, 0], verts[:, 1]))),
        "zero_suboptimal": rb.zero_suboptimal,
        "zero_arc": _zero_arc(p, rb),
        "max_ring_gap": max(gaps + [0.0]),
    }


def _nested(p, boundaries, max_checks=256):
    """Each region inside the next one.

    Vertices that poke out of the next polygon by more than the membership
    band (chord sag along the unit circle) are re-tested with the exact
    membership test, subsampled to max_checks points. Noding of sampled
    chords can leave a few vertices about 1e-8 outside the exact region;
    those fail membership at their own time and are counted as artifacts
    instead of being held against the nesting.
    """
    flags, excursions, artifacts = [], [], []
    for a, b in zip(boundaries, boundaries[1:]):
        v = a.vertices()
        d = shapely.distance(b.polygon(), shapely.points(v[:, 0], v[:, 1]))
        excursions.append(float(d.max()) if len(d) else 0.0)
        out = v[d > EDGE_BAND]
        if len(out) > max_checks:
            out = out[np.linspace(0, len(out) - 1, max_checks).round().astype(int)]
        ok, n_art = True, 0
        for x, y in out:
            if contains(p, b.tau, (float(x), float(y))):
                continue
            if contains(p, a.tau, (float(x), float(y))):
                ok = False
            else:
                n_art += 1
        flags.append(ok)
        artifacts.append(n_art)
    return flags, excursions, artifacts


def _traces(p, tau_max, n=512):
    """Endpoint trajectories of the Zero front line and the critical spirals."""
    q, flip = (p.mirrored(), True) if p.omega0 < 0 else (p, False)
    taus = np.linspace(0.0, tau_max, n)
    out = []
    for b in (Branch.PLUS, Branch.MINUS):
        z = disk_alpha(q, Branch.ZERO, branch_offset(q, b), taus)
        out.append(("endpoint", f"zero endpoint {b.value}", z))
    for b in (Branch.PLUS, Branch.MINUS):
        if spiral_cuts(q, b):
            t_c = min(critical_time(q, b), tau_max)
            z = disk_alpha(q, b, critical_frequency(q, b), np.linspace(0.0, t_c, n))
            out.append(("critical", f"critical {b.value}", z))
    if flip:
        out = [(k, lab, z.conj()) for k, lab, z in out]
    return [(k, lab, np.column_stack([z.real, z.imag])) for k, lab, z in out]


def _base_path(out, default="reachable"):
    base = out or default
    return base[:-4] if base.endswith(".svg") else base


def cmd_reachable(cfg):
    """SVG of the reachable sets plus a boundary CSV and a JSON report."""
    p = cfg.params()
    times = _need_times(cfg)
    if any(t <= 0 for t in times):
        raise ConfigError("reachable-set times must be positive")
    if p.gamma1 == 0:
        raise DegenerateError("reachable sets need gamma1 > 0")
    boundaries = [reachable_boundary(p, 0.5 * t, cfg.resolution) for t in times]
    labels = [f"t = {t:g} (tau = {0.5 * t:g})" for t in times]
    title = f"omega0 = {p.omega0:g}, gamma1 = {p.gamma1:g}, gamma2 = {p.gamma2:g}"
    traces = _traces(p, 0.5 * max(times)) if cfg.traces else ()
    svg_text = render(title, boundaries, labels, traces)

    rows = []
    for t, rb in zip(times, boundaries):
        for k, s in enumerate(rb.segments):
            b = s.branch.value if s.branch is not None else ""
            for x, y in s.points:
                rows.append((t, rb.tau, k, s.kind, b, s.omega_min, s.omega_max, float(x), float(y)))
    bcsv = csv_text(["t", "tau", "segment", "kind", "branch", "omega_min", "omega_max", "x", "y"], rows)

    report = _header("reachable", cfg, p)
    report["interpretation"] = "tau = t/2"
    report["boundaries"] = [_boundary_summary(p, t, rb) for t, rb in zip(times, boundaries)]
    nested, excursion, artifacts = _nested(p, boundaries)
    report["nested"] = nested
    report["nesting_polygon_excursion"] = excursion
    report["nesting_artifact_vertices"] = artifacts
    if cfg.alternate:
        # the alternate reading of figure times as the rescaled clock itself
        alt = []
        for t in times:
            try:
                rb = reachable_boundary(p, t, cfg.resolution)
            except EmptyLocus:
                alt.append({"t": t, "tau": t, "empty": True})
                continue
            alt.append(_boundary_summary(p, t, rb))
        report["alternate"] = {"interpretation": "tau = t", "boundaries": alt}
    base = _base_path(cfg.out)
    return Outcome(
        [
            (base + ".svg", svg_text),
            (base + "_boundary.csv", bcsv),
            (base + "_report.json", json_text(report)),
        ]
    )


# --- synth ----------------------------------------------------------------------


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"cannot parse complex number {text!r}") from None


def parse_target(cfg):
    """(kind, Su2Element, lambda) from the target spec and --lambda."""
    spec = cfg.target
    if spec is None:
        if cfg.lam is None:
            raise ConfigError("a target is required (--target identity|swap|diagonal|ALPHA[,BETA])")
        spec = "diagonal"
    key = spec.strip().lower()
    if key == "identity":
        return "identity", identity(), None
    if key == "swap":
        return "swap", swap(), None
    if key == "diagonal":
        if cfg.lam is None:
            raise ConfigError("diagonal targets need --lambda")
        return "diagonal", diagonal(cfg.lam), cfg.lam
    parts = [s for s in spec.split(",") if s.strip()]
    if not 1 <= len(parts) <= 2:
        raise ConfigError(f"cannot parse target {spec!r}")
    alpha = _complex(parts[0])
    if len(parts) == 2:
        beta = _complex(parts[1])
    else:
        beta = complex(math.sqrt(max(0.0, 1.0 - abs(alpha) ** 2)))
    try:
        return ("general_phase" if len(parts) == 2 else "general"), make_element(alpha, beta), None
    except NormalizationError as exc:
        raise ConfigError(str(exc)) from exc


def _synthesize(p, kind, target, lam, cfg):
    if kind == "swap":
        return min_time_swap(p)
    if kind == "diagonal" and p.gamma1 > 0:
        return min_time_diagonal(p, lam)
    return min_time_general(p, target, tol=cfg.tol, match_phase=(kind == "general_phase"))


def cmd_synth(cfg):
    """Minimum-time schedule for a target, verified by propagation and the oracle."""
    p = cfg.params()
    kind, target, lam = parse_target(cfg)
    res = _synthesize(p, kind, target, lam, cfg)
    report = _header("synth", cfg, p)
    report["target"] = {
        "kind": kind,
        "lambda": lam,
        "alpha": [target.alpha.real, target.alpha.imag],
        "beta": [target.beta.real, target.beta.imag],
    }
    d = res.as_dict()
    report["result"] = {k: d[k] for k in ("t_f", "branch", "omega", "phi", "u_z", "residual", "method", "flags")}
    report["result"]["achieved"] = d["achieved"]
    report["schedule"] = d["schedule"]
    oracle = None
    if cfg.oracle:
        tau_max = 0.55 * res.t_f + 1e-3
        try:
            t_o = brute_force_min_time(p, target, tau_max=tau_max)
            rel = abs(t_o - res.t_f) / max(res.t_f, 1e-12) if res.t_f > 0 else abs(t_o)
            oracle = {"t_f": t_o, "rel_diff": rel, "agrees": bool(rel <= ORACLE_REL_TOL), "tau_max": tau_max}
        except NotFound:
            oracle = {"t_f": None, "rel_diff": None, "agrees": False, "tau_max": tau_max}
    report["oracle"] = oracle
    return Outcome([(cfg.out, json_text(report))])


# --- classify -------------------------------------------------------------------


def cmd_classify(cfg):
    p = cfg.params()
    rc = classify(p)
    report = _header("classify", cfg, p)
    report.update(rc.as_dict())
    crit = {}
    q = p.mirrored() if p.omega0 < 0 else p
    for b in (Branch.PLUS, Branch.MINUS):
        name = (b.conjugate() if p.omega0 < 0 else b).value
        try:
            w = critical_frequency(q, b)
            t = critical_time(q, b)
            crit[name] = {
                "frequency": -w if p.omega0 < 0 else w,
                "tau": t,
                "t": 2 * t,
                "cuts_front": spiral_cuts(q, b),
            }
        except DegenerateError:
            crit[name] = None
    report["critical"] = crit
    return Outcome([(cfg.out, json_text(report))])


# --- sweep ----------------------------------------------------------------------


SWEEP_HEADER = ["gamma1", "gamma2", "lambda", "t_f_asym", "t_f_sym", "dominance_ok"]


def _sweep_points(cfg):
    if cfg.grid is not None:
        axes = []
        for key, pinned in (("gamma1", cfg.gamma1), ("gamma2", cfg.gamma2), ("lambda", cfg.lam)):
            if key in cfg.grid:
                axes.append(cfg.grid[key])
            elif pinned is not None:
                axes.append([pinned])
            else:
                raise ConfigError(f"grid sweep needs values for {key}")
        return list(itertools.product(*axes))
    rng = np.random.default_rng(cfg.seed)
    pts = []
    for _ in range(cfg.samples):
        g1, g2, lam = rng.uniform(0, cfg.gamma_max), rng.uniform(0, cfg.gamma_max), rng.uniform(0, 2 * math.pi)
        pts.append(
            (
                g1 if cfg.gamma1 is None else cfg.gamma1,
                g2 if cfg.gamma2 is None else cfg.gamma2,
                lam if cfg.lam is None else cfg.lam,
            )
        )
    return pts


def sweep_row(omega0, g1, g2, lam):
    """(t_asym, t_sym, ok); ok is None when the symmetric time is undefined."""
    if lam % (2 * math.pi) == 0:
        return 0.0, 0.0, True  # identity target on both sides
    if g1 > 0:
        t_asym = min_time_diagonal(ProblemParams(omega0, g1, g2), lam, verify=False).t_f
    else:
        t_asym = _asym_time(omega0, 0.0, g2, lam)
    try:
        t_sym = symmetric_bound_time(omega0, math.hypot(g1, g2), lam)
    except DegenerateError:
        return t_asym, math.nan, None
    return t_asym, t_sym, bool(t_sym <= t_asym * (1 + 1e-9) + 1e-12)


def cmd_sweep(cfg):
    """Asymmetric versus symmetric diagonal times on a random or explicit grid."""
    if cfg.omega0 is None:
        raise ConfigError("missing parameter(s): omega0")
    rows, violations, skipped = [], 0, 0
    for g1, g2, lam in _sweep_points(cfg):
        if g1 < 0 or g2 < 0:
            raise ConfigError("control bounds must be non-negative")
        t_a, t_s, ok = sweep_row(cfg.omega0, g1, g2, lam)
        violations += ok is False
        skipped += ok is None
        rows.append((g1, g2, lam, t_a, t_s, "" if ok is None else ok))
    text = csv_text(SWEEP_HEADER, rows)
    return Outcome([(cfg.out, text)], [f"sweep: rows={len(rows)} violations={violations} skipped={skipped}"])


# --- verify ---------------------------------------------------------------------


def _random_extremals(cfg, n):
    rng = np.random.default_rng(cfg.seed)
    out = []
    for _ in range(n):
        p = ProblemParams(
            rng.uniform(-5, 5) if cfg.omega0 is None else cfg.omega0,
            rng.uniform(0, 4) if cfg.gamma1 is None else cfg.gamma1,
            rng.uniform(0, 4) if cfg.gamma2 is None else cfg.gamma2,
        )
        b = BRANCH_ORDER[rng.integers(3)]
        if b is Branch.PLUS:
            w = p.c_plus - rng.uniform(1e-6, 10)
        elif b is Branch.MINUS:
            w = p.c_minus + rng.uniform(1e-6, 10)
        else:
            w = rng.uniform(p.c_minus, p.c_plus)
        out.append((p, ExtremalSpec(b, w, rng.uniform(0, 2 * math.pi)), rng.uniform(0, 10)))
    return out


def _given_extremal(cfg):
    e = cfg.extremal
    try:
        spec = ExtremalSpec(Branch.parse(e["branch"]), float(e["omega"]), float(e.get("phi", 0.0)))
        t = float(e["t"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"extremal needs branch, omega, t (and optionally phi): {exc}") from None
    return [(cfg.params(), spec, t)]


def cmd_verify(cfg):
    """Closed-form trajectories against RK4 propagation and costate integration."""
    cases = _given_extremal(cfg) if cfg.extremal else _random_extremals(cfg, cfg.samples)
    cfg_i = IntegrationConfig()
    report = _header("verify", cfg)
    samples = []
    if cases:
        a, b = propagate_extremals([c[0] for c in cases], [c[1] for c in cases], [c[2] for c in cases], cfg_i)
        for k, (p, spec, t) in enumerate(cases):
            ref = extremal_element(p, spec, t)
            entry = max(abs(a[k] - ref.alpha), abs(b[k] - ref.beta))
            samples.append(
                {
                    "params": p.as_dict(),
                    "branch": spec.branch.value,
                    "omega": spec.omega,
                    "phi": spec.phi,
                    "t": t,
                    "equiv_distance": float(abs(a[k] - ref.alpha)),
                    "entry_error": float(entry),
                }
            )
    costate = []
    for p, spec, t in cases[:COSTATE_SAMPLES]:
        if p.gamma1 == 0:
            continue
        r = costate_check(p, spec, t)
        costate.append(
            {
                "params": p.as_dict(),
                "branch": spec.branch.value,
                "omega": spec.omega,
                "t": t,
                "closed_form_residual": r.closed_form_residual,
                "invariant_drift": r.invariant_drift,
                "hamiltonian_drift": r.hamiltonian_drift,
            }
        )
    report["samples"] = samples
    report["costate"] = costate
    max_prop = max([s["entry_error"] for s in samples] + [0.0])
    max_cost = max([max(c["closed_form_residual"], c["invariant_drift"]) for c in costate] + [0.0])
    report["max_entry_error"] = max_prop
    report["max_costate_residual"] = max_cost
    report["ok"] = bool(max_prop < 1e-8 and max_cost < 1e-8)
    note = f"verify: samples={len(samples)} max_entry_error={max_prop:.3e} max_costate_residual={max_cost:.3e}"
    return Outcome([(cfg.out, json_text(report))], [note])


# --- entry point ----------------------------------------------------------------

COMMANDS = {
    "frontline": (cmd_frontline, "sample the truncated optimal front lines (CSV)"),
    "reachable": (cmd_reachable, "render reachable-set boundaries (SVG + boundary CSV + JSON report)"),
    "synth": (cmd_synth, "minimum-time synthesis for a target (JSON)"),
    "classify": (cmd_classify, "regime classification of the parameters (JSON)"),
    "sweep": (cmd_sweep, "asymmetric vs symmetric bound times (CSV)"),
    "verify": (cmd_verify, "closed forms against RK4 and costate integration (JSON)"),
}


def _add_common(sp):
    g = sp.add_argument_group("parameters (flags override --config values)")
    g.add_argument("--config", help="YAML file with any of the keys below")
    g.add_argument("--omega0", type=float, help="drift frequency (rad/time)")
    g.add_argument("--gamma1", type=float, help="transverse control bound (rad/time)")
    g.add_argument("--gamma2", type=float, help="longitudinal control bound (rad/time)")
    g.add_argument("--times", help="comma-separated physical times t (tau = t/2 is internal)")
    g.add_argument("--target", help="identity | swap | diagonal | ALPHA[,BETA] as complex numbers, e.g. 0.6+0.3j")
    g.add_argument("--lambda", dest="lam", type=float, help="diagonal target angle (rad), target exp(i lambda sigma_z)")
    g.add_argument("--resolution", type=int, help="samples per curve (default 2048)")
    g.add_argument("--tol", type=float, help="time tolerance of the general solver (default 1e-8)")
    g.add_argument("--out", help="output path (stdout when omitted; reachable uses it as a base name)")
    g.add_argument("--seed", type=int, help="seed for randomized sweeps and checks (default 0)")
    g.add_argument("--samples", type=int, help="number of random samples for sweep/verify (default 100)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="su2mintime",
        description="Time-optimal SU(2) synthesis with asymmetric control bounds. "
        "Times are physical t; frequencies are angular.",
        epilog="exit codes: 0 ok, 2 configuration error, 3 empty front line, 4 unreachable target",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        _add_common(sub.add_parser(name, help=help_text, description=help_text))
    return parser


_FLAGS = ("omega0", "gamma1", "gamma2", "times", "target", "lam", "resolution", "tol", "out", "seed", "samples")


def run(argv=None):
    """Parse, dispatch and write outputs; returns the exit code."""
    args = build_parser().parse_args(argv)
    try:
        file_values = load_config(args.config) if args.config else {}
        cfg = build_config(file_values, {k: getattr(args, k) for k in _FLAGS})
        outcome = COMMANDS[args.command][0](cfg)
        to_stdout = False
        for path, text in outcome.outputs:
            if path is None:
                sys.stdout.write(text)
                to_stdout = True
            else:
                parent = os.path.dirname(path)
                if parent and not os.path.isdir(parent):
                    raise ConfigError(f"output directory {parent!r} does not exist")
                write_text(path, text)
        stream = sys.stderr if to_stdout else sys.stdout
        for line in outcome.notes:
            print(line, file=stream)
        return 0
    except (ConfigError, DegenerateError, RangeError, NormalizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyLocus as exc:
        print(f"empty locus: {exc}", file=sys.stderr)
        return 3
    except Unreachable as exc:
        print(f"unreachable: {exc}", file=sys.stderr)
        return 4


def main():
    sys.exit(run())
