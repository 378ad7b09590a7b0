"""Minimum-time synthesis of SU(2) targets.

Diagonal targets exp(i lam sigma_z) sit on the disk border and are reached
by a Plus/Minus extremal exactly when it touches the border (a tau = pi),
which gives the closed form

    t_f = 2 min_{u_z = +/- gamma2} ((pi - lam) c + Omega) / (c^2 + gamma1^2),
    Omega = sqrt(pi^2 c^2 + lam (2 pi - lam) gamma1^2),  c = omega0 + u_z.

The border angle of the touching trajectory is known in closed form too,
so every diagonal answer is cross-checked by an exact sweep over the touch
times. SWAP is reached through the disk centre by the Zero branch. Other
targets go through bisection on reachable-set membership.
"""

from dataclasses import dataclass, field
import cmath
import math

import numpy as np
from scipy import optimize

from .errors import DegenerateError, Unreachable
from .extremals import (
    Branch,
    ExtremalSpec,
    _alpha_beta,
    arc_alpha,
    border_sign,
    boundary_frequency,
    branch_offset,
    derived,
    disk_alpha,
)
from .frontlines import contains
from .schedule import ControlSchedule
from .su2 import Su2Element, diagonal, equiv_distance, identity, swap
from .verify import IntegrationConfig, propagate

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SynthesisResult:
    t_f: float
    schedule: ControlSchedule
    branch: Branch
    omega: float
    phi: float
    achieved: Su2Element
    residual: float
    target: Su2Element = None
    method: str = ""
    flags: tuple = ()
    details: dict = field(default_factory=dict)

    @property
    def u_z(self):
        return self.schedule.pieces[0].u_z if self.schedule.pieces else 0.0

    def as_dict(self):
        return {
            "t_f": self.t_f,
            "branch": self.branch.value if self.branch is not None else None,
            "omega": self.omega,
            "phi": self.phi,
            "u_z": self.u_z,
            "residual": self.residual,
            "method": self.method,
            "flags": list(self.flags),
            "achieved": {"alpha": [self.achieved.alpha.real, self.achieved.alpha.imag],
                         "beta": [self.achieved.beta.real, self.achieved.beta.imag]},
            "schedule": self.schedule.to_dict(),
        }


def _finish(p, target, t_f, spec, method, verify, cfg, flags=(), details=None, match_phase=False):
    """Build the schedule, propagate it and measure the class residual."""
    phi = spec.phi
    if match_phase and spec.branch is not None and t_f > 0:
        phi = _phase_for(p, spec, t_f, target)
    spec = ExtremalSpec(spec.branch, spec.omega, phi)
    schedule = ControlSchedule.single(p, spec, t_f)
    if t_f <= 0:
        achieved = identity()
    elif verify:
        achieved = propagate(p, schedule, t_f, cfg)
    else:
        d = derived(p, spec)
        a, b = _alpha_beta(d.b, p.gamma1, spec.omega, spec.phi, 0.5 * t_f)
        achieved = Su2Element(complex(a), complex(b))
    residual = equiv_distance(achieved, target)
    if match_phase:
        residual = max(residual, abs(achieved.beta - target.beta))
    return SynthesisResult(
        t_f=float(t_f),
        schedule=schedule,
        branch=spec.branch,
        omega=float(spec.omega),
        phi=float(phi),
        achieved=achieved,
        residual=float(residual),
        target=target,
        method=method,
        flags=tuple(flags),
        details=dict(details or {}),
    )


def _phase_for(p, spec, t, target):
    """phi such that beta of the extremal matches the target's beta phase."""
    d = derived(p, ExtremalSpec(spec.branch, spec.omega, 0.0))
    _, b0 = _alpha_beta(d.b, p.gamma1, spec.omega, 0.0, 0.5 * t)
    if abs(b0) < 1e-14 or abs(target.beta) < 1e-14:
        return 0.0
    return float(np.angle(target.beta / complex(b0)))


# --- diagonal targets ----------------------------------------------------------


def diagonal_time(omega0, gamma1, gamma2, lam, sign):
    """Closed-form time of the u_z = sign * gamma2 candidate (physical time).

    gamma1 = 0 is allowed here (it is the symmetric-bound limit); returns inf
    when the candidate does not exist.
    """
    c = omega0 + sign * gamma2
    den = c * c + gamma1 * gamma1
    if den == 0:
        return math.inf
    big = math.sqrt(math.pi**2 * c * c + lam * (TWO_PI - lam) * gamma1 * gamma1)
    t = 2 * ((math.pi - lam) * c + big) / den
    return t if t > 0 else math.inf


def border_angle(p, branch, tau):
    """Disk angle at which the (branch, tau) border-touching trajectory meets the circle."""
    c = branch_offset(p, branch)
    q = np.sqrt(np.maximum(math.pi**2 - (p.gamma1 * np.asarray(tau)) ** 2, 0.0))
    return math.pi - c * np.asarray(tau) + branch.sign * q


def border_sweep(p, lam, n=4096):
    """Exact first time (tau) at which each family touches the border at angle lam.

    Returns a list of (tau, branch, omega) sorted by tau. The Zero branch
    reaches the whole arc between the two family endpoints at tau = pi/gamma1.
    """
    if p.gamma1 <= 0:
        raise DegenerateError("the border is only touched with transverse control")
    T = math.pi / p.gamma1
    ts = np.linspace(0.0, T, n + 1)[1:]
    hits = []
    for branch in (Branch.PLUS, Branch.MINUS):

        def g(t, branch=branch):
            return float(np.angle(np.exp(1j * (border_angle(p, branch, t) - lam))))

        vals = np.angle(np.exp(1j * (border_angle(p, branch, ts) - lam)))
        prev_t, prev_v = 0.0, float(np.angle(np.exp(-1j * lam)))
        for t, v in zip(ts, vals):
            if v == 0.0:
                hits.append((float(t), branch))
                break
            if prev_v * v < 0 and abs(v - prev_v) < math.pi:
                hits.append((optimize.brentq(g, prev_t, t, xtol=1e-15, rtol=4 * np.finfo(float).eps), branch))
                break
            prev_t, prev_v = t, v
    # Zero branch at tau = pi/gamma1 covers angles pi - omega T, omega in [c-, c+]
    if p.gamma2 > 0:
        lo, hi = p.c_minus, p.c_plus
        k = np.arange(math.floor((math.pi - hi * T - lam) / TWO_PI) - 1,
                      math.ceil((math.pi - lo * T - lam) / TWO_PI) + 2)
        w = (math.pi - lam - TWO_PI * k) / T
        ok = w[(w >= lo - 1e-12) & (w <= hi + 1e-12)]
        if len(ok):
            w0 = ok[np.argmin(np.abs(ok - p.omega0))]
            hits.append((T, Branch.ZERO, float(min(max(w0, lo), hi))))
    out = []
    for h in hits:
        if len(h) == 3:
            out.append(h)
        else:
            tau, branch = h
            out.append((tau, branch, boundary_frequency(p, branch, tau, border_sign(branch))))
    return sorted(out, key=lambda h: h[0])


def diagonal_candidates(p, lam):
    """Eq.-form candidates for both signs of u_z, each checked against the target.

    Returns {branch: (t, omega, ok)}.
    """
    out = {}
    z = cmath.exp(1j * lam)
    for branch in (Branch.PLUS, Branch.MINUS):
        t = diagonal_time(p.omega0, p.gamma1, p.gamma2, lam, branch.sign)
        ok, w = False, math.nan
        if math.isfinite(t) and p.gamma1 > 0 and p.gamma1 * t / 2 <= math.pi * (1 + 1e-12):
            w = boundary_frequency(p, branch, t / 2, border_sign(branch))
            ok = abs(complex(disk_alpha(p, branch, w, t / 2)) - z) < 1e-9
        out[branch] = (t, w, ok)
    return out


def min_time_diagonal(p, lam, verify=True, cfg=IntegrationConfig(), match_phase=False):
    """Minimum time for exp(i lam sigma_z); lam is taken modulo 2 pi."""
    if p.gamma1 <= 0:
        raise DegenerateError("gamma1 = 0: the border cannot be reached by these trajectories")
    lam = float(lam) % TWO_PI
    target = diagonal(lam)
    if lam == 0.0 or min(lam, TWO_PI - lam) < 1e-15:
        # the closed form at lambda = 0 is a full return loop; kept for reference only
        loop = min(diagonal_time(p.omega0, p.gamma1, p.gamma2, 0.0, s) for s in (1, -1))
        details = {"loop_time": loop if math.isfinite(loop) else None}
        return _finish(p, target, 0.0, ExtremalSpec(Branch.ZERO, p.omega0), "identity", verify, cfg, [], details)
    cands = diagonal_candidates(p, lam)
    valid = [(t, b, w) for b, (t, w, ok) in cands.items() if ok]
    flags = []
    details = {"candidates": {b.value: t for b, (t, _, _) in cands.items()}}
    if len(valid) < 2:
        flags.append("formula_candidate_invalid")
    sweep = border_sweep(p, lam)
    details["sweep_time"] = 2 * sweep[0][0] if sweep else math.inf
    best = min(valid, key=lambda v: v[0]) if valid else None
    if sweep:
        t_s = 2 * sweep[0][0]
        if best is None or t_s < best[0] * (1 - 1e-9):
            flags.append("formula_beaten")
            best = (t_s, sweep[0][1], sweep[0][2])
    if best is None:
        raise Unreachable(f"no extremal reaches exp(i {lam} sigma_z)", tau_max=math.pi / p.gamma1)
    t_f, branch, w = best
    details["formula_time"] = min((v[0] for v in valid), default=math.inf)
    return _finish(p, target, t_f, ExtremalSpec(branch, w), "diagonal", verify, cfg, flags, details, match_phase)


def min_time_swap(p, verify=True, cfg=IntegrationConfig()):
    """SWAP through the disk centre: Zero branch, omega = omega0, t_f = pi/gamma1."""
    if p.gamma1 <= 0:
        raise DegenerateError("gamma1 = 0: SWAP is unreachable")
    t_f = math.pi / p.gamma1
    return _finish(p, swap(), t_f, ExtremalSpec(Branch.ZERO, p.omega0), "swap", verify, cfg)


def symmetric_bound_time(omega0, gamma, lam):
    """Diagonal-target time with a single isotropic bound gamma on all controls."""
    if gamma <= 0:
        raise DegenerateError("gamma must be positive")
    if omega0 >= (math.pi - lam) / math.pi * gamma:
        return (4 * math.pi - 2 * lam) / (gamma + omega0)
    if gamma == omega0:
        raise DegenerateError("gamma = omega0 in the second regime")
    return 2 * lam / (gamma - omega0)


# --- constrained minimum over the bound split ------------------------------------


@dataclass(frozen=True)
class LagrangeReport:
    grid: int
    argmin_gamma1: float
    argmin_gamma2: float
    value: float
    symmetric_value: float
    rel_error: float
    within_one_cell: bool
    endpoint_exact: bool
    monotone_near_endpoint: bool
    flat: bool

    def as_dict(self):
        return dict(self.__dict__)


def _asym_time(omega0, g1, g2, lam):
    return min(diagonal_time(omega0, g1, g2, lam, s) for s in (1, -1))


def lagrange_consistency_check(omega0, gamma, lam, grid=256):
    """Minimize the asymmetric diagonal time on gamma1^2 + gamma2^2 = gamma^2.

    Ties (within relative 1e-12) are resolved towards the smallest gamma1;
    `flat` reports an objective that is constant over the whole circle.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    th = np.linspace(0.0, math.pi / 2, grid + 1)
    g1 = gamma * np.sin(th)
    g2 = gamma * np.cos(th)
    g1[0], g2[-1] = 0.0, 0.0
    f = np.array([_asym_time(omega0, a, b, lam) for a, b in zip(g1, g2)])
    fmin = float(np.min(f))
    tied = np.nonzero(f <= fmin * (1 + 1e-12))[0]
    k = int(tied[0])
    sym = symmetric_bound_time(omega0, gamma, lam)
    head = f[: max(3, grid // 16)]
    return LagrangeReport(
        grid=grid,
        argmin_gamma1=float(g1[k]),
        argmin_gamma2=float(g2[k]),
        value=float(f[k]),
        symmetric_value=sym,
        rel_error=abs(float(f[k]) - sym) / sym,
        within_one_cell=k <= 1,
        endpoint_exact=bool(abs(f[0] - sym) <= 1e-12 * sym),
        monotone_near_endpoint=bool(np.all(np.diff(head) >= -1e-12 * fmin)),
        flat=bool(np.ptp(f) <= 1e-12 * abs(fmin)),
    )


# --- general targets -------------------------------------------------------------


def default_horizon(p):
    """Physical-time horizon within which every reachable target is reached.

    With gamma1 > 0 the rotating-frame controls reach any element as an
    equatorial rotation (angle <= pi) followed by two pi pulses, each pi
    rotation taking t = pi / gamma1, and idling is admissible; the horizon
    doubles that 3 pi / gamma1 bound so the bisection starts well inside the
    reachable set. Without transverse control only diagonals are reachable,
    within one full phase turn at the fastest drift rate.
    """
    if p.gamma1 > 0:
        return 6 * math.pi / p.gamma1
    rate = max(abs(p.c_plus), abs(p.c_minus))
    if rate == 0:
        raise DegenerateError("no control authority")
    return 4 * math.pi / rate


def _drift_only_time(p, lam):
    """gamma1 = 0: alpha = exp(-i c tau) with c in [c-, c+]; first tau with -c tau = lam mod 2 pi."""
    best = (math.inf, None)
    for v in (-lam, TWO_PI - lam):
        if v > 0 and p.c_plus > 0:
            best = min(best, (v / p.c_plus, p.c_plus), key=lambda b: b[0])
        if v < 0 and p.c_minus < 0:
            best = min(best, (v / p.c_minus, p.c_minus), key=lambda b: b[0])
    return best


def _recover_zero(p, z, tau_hi):
    """Exact Zero-branch solutions: |cos(gamma1 tau)| = |z| and the phase."""
    out = []
    r = min(abs(z), 1.0)
    base = math.acos(r) / p.gamma1
    for tau in (base, math.pi / p.gamma1 - base):
        if tau <= 0 or tau > tau_hi:
            continue
        rad = math.cos(p.gamma1 * tau)
        if abs(rad) < 1e-15:
            ang_needed = 0.0
        else:
            ang_needed = cmath.phase(z / rad)
        # alpha = rad * exp(-i omega tau)
        k = np.arange(math.floor((-p.c_plus * tau - ang_needed) / TWO_PI) - 1,
                      math.ceil((-p.c_minus * tau - ang_needed) / TWO_PI) + 2)
        w = -(ang_needed + TWO_PI * k) / tau
        ok = w[(w >= p.c_minus - 1e-12) & (w <= p.c_plus + 1e-12)]
        if len(ok):
            w0 = float(ok[np.argmin(np.abs(ok - p.omega0))])
            w0 = min(max(w0, p.c_minus), p.c_plus)
            out.append((tau, Branch.ZERO, w0))
    return out


def _recover_arc(p, branch, z, tau_lo, tau0, tau_hi):
    """Plus/Minus solutions with tau' in [tau_lo, tau_hi] by least squares in (tau', q) from tau0."""
    c = branch_offset(p, branch)
    g1 = p.gamma1
    sigma = branch.sign
    out = []
    tau0 = min(tau0, math.pi / g1)
    s_grid = g1 * tau0 + (math.pi - g1 * tau0) * np.linspace(0, 1, 2049) ** 2
    d = np.abs(arc_alpha(c, g1, sigma, tau0, s_grid) - z)
    minima = np.nonzero((d <= np.r_[np.inf, d[:-1]]) & (d <= np.r_[d[1:], np.inf]))[0]
    # solve in (tau', q) with q = |b| tau' = sqrt(s^2 - (gamma1 tau')^2); alpha is
    # smooth in q at the Zero junction q = 0, while s - gamma1 tau' is quadratic there
    def resid(v):
        tau_, q = v
        s = math.hypot(q, g1 * tau_)
        ratio = q / s if s > 0 else 0.0
        w = cmath.exp(-1j * (c * tau_ - sigma * q)) * (math.cos(s) - 1j * sigma * ratio * math.sin(s)) - z
        return [w.real, w.imag]

    lo = [max(tau_lo, 1e-12), 0.0]
    hi = [min(tau_hi, math.pi / g1), math.pi]
    for i in sorted(minima, key=lambda i: d[i])[:4]:
        q0 = math.sqrt(max(s_grid[i] ** 2 - (g1 * tau0) ** 2, 0.0))
        x0 = np.clip([tau0, q0], lo, hi)
        sol = optimize.least_squares(resid, x0, bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        x, r = sol.x, math.hypot(*sol.fun)
        if r < 1e-6:
            # trf stalls near 1e-10; finish with an unconstrained hybrid Newton, then recheck bounds
            pol = optimize.root(resid, x, method="hybr", options={"xtol": 1e-15})
            if math.hypot(*pol.fun) < r:
                x, r = pol.x, math.hypot(*pol.fun)
        # q < 0 would be the other family's trajectory; that call finds it
        tau_s, q_s = x
        s_s = math.hypot(q_s, g1 * tau_s)
        inside = lo[0] - 1e-12 <= tau_s <= hi[0] + 1e-12 and s_s <= math.pi + 1e-12
        if inside and r < 1e-10 and q_s > 0:
            out.append((float(tau_s), branch, float(c - sigma * q_s / tau_s)))
    return out


def _recover(p, z, tau_lo, tau0, tau_hi):
    """Extremal (tau', branch, omega) landing on z with the smallest tau' in [tau_lo, tau_hi]."""
    found = _recover_zero(p, z, tau_hi)
    if abs(z) > 1 - 1e-9:
        lam = cmath.phase(z) % TWO_PI
        found += [h for h in border_sweep(p, lam) if h[0] <= tau_hi * (1 + 1e-9)]
    for branch in (Branch.PLUS, Branch.MINUS):
        found += _recover_arc(p, branch, z, tau_lo, tau0, tau_hi)
    found = [f for f in found if f[0] >= tau_lo * (1 - 1e-9) - 1e-12]
    return min(found, key=lambda f: f[0]) if found else None


def min_time_general(p, target, tol=1e-8, tau_max=None, verify=True, cfg=IntegrationConfig(), match_phase=False):
    """Minimum time by bisection on reachable-set membership.

    tol and tau_max are physical times. After the bisection the extremal
    through the target is recovered exactly on the bracket, so t_f is
    usually accurate well below tol.
    """
    if tol < 1e-9:
        raise ValueError("tol must be at least 1e-9")
    z = complex(target.alpha)
    if abs(z - 1) < 1e-12:
        return _finish(p, target, 0.0, ExtremalSpec(Branch.ZERO, p.omega0), "identity", verify, cfg)
    t_max = default_horizon(p) if tau_max is None else float(tau_max)
    if p.gamma1 == 0:
        if abs(target.beta) > 1e-9:
            raise Unreachable("without transverse control only diagonal targets are reachable", tau_max=t_max)
        tau, c = _drift_only_time(p, cmath.phase(z) % TWO_PI)
        if 2 * tau > t_max:
            raise Unreachable(f"target not reached by t_max={t_max}", tau_max=t_max)
        return _finish(p, target, 2 * tau, ExtremalSpec(Branch.ZERO, c), "drift", verify, cfg)
    xy = (z.real, z.imag)
    hi = 0.5 * t_max
    if not contains(p, hi, xy):
        raise Unreachable(f"target not reachable within t_max={t_max}", tau_max=t_max)
    lo = 0.0
    while hi - lo > 0.25 * tol:
        mid = 0.5 * (lo + hi)
        if contains(p, mid, xy):
            hi = mid
        else:
            lo = mid
    q, zz, mirrored = p, z, False
    if p.omega0 < 0:
        q, zz, mirrored = p.mirrored(), z.conjugate(), True
    # the membership band admits border points slightly early (the front is
    # tangent to the circle there), so look a little past the bracket
    hit = _recover(q, zz, max(0.0, lo - tol), hi, hi * (1 + 1e-3) + tol)
    flags = []
    if hit is None:
        # fall back to the bisection time and the closest front point
        flags.append("recovery_failed")
        raise Unreachable(f"could not recover an extremal through the target at t={2 * hi}", tau_max=t_max)
    tau, branch, w = hit
    if tau > hi + tol and abs(z) < 1 - 1e-9:
        flags.append("past_bracket")
    if mirrored:
        branch, w = branch.conjugate(), -w
    details = {"bisection_bracket": [2 * lo, 2 * hi]}
    return _finish(p, target, 2 * tau, ExtremalSpec(branch, w), "bisection", verify, cfg, flags, details,
                   match_phase)
