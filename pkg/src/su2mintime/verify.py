"""Independent numerical oracles.

Everything here checks the closed forms from the outside: fixed-step RK4
integration of the operator equation, RK4 integration of the costate
equations, and a grid search for the minimum time over extremal families.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize

from .errors import NotFound, StepError
from .extremals import Branch, arc_alpha, branch_offset, control_uz, derived
from .su2 import Su2Element, make_element

DRIFT_LIMIT = 1e-6


@dataclass(frozen=True)
class IntegrationConfig:
    step: float = None
    rel_step: float = 1e-4
    max_step: float = 1e-3
    project_every: int = 64

    def __post_init__(self):
        if self.step is not None and self.step <= 0:
            raise ValueError("step must be positive")
        if self.project_every < 1:
            raise ValueError("projection interval must be at least one step")

    def resolve(self, duration):
        if self.step is not None:
            return self.step
        if duration <= 0:
            return self.max_step
        return min(self.rel_step * duration, self.max_step)


def _operator_rhs(omega0, control_fn, t, psi):
    ux, uy, uz = control_fn(t)
    om = omega0 + uz
    a, b = psi[0], psi[1]
    return np.stack([-0.5j * (om * a + (ux - 1j * uy) * b), -0.5j * ((ux + 1j * uy) * a - om * b)])


def integrate_columns(omega0, control_fn, t_final, cfg=IntegrationConfig()):
    """RK4 for a batch of first columns (alpha, beta), all starting at the identity.

    omega0 and t_final broadcast over the batch; control_fn maps an array of
    times (one per batch member) to arrays (u_x, u_y, u_z). Every member takes
    the same number of steps, each with its own step length t_final / n.
    Returns an array of shape (2, N).
    """
    t_final = np.atleast_1d(np.asarray(t_final, dtype=float))
    omega0 = np.broadcast_to(np.asarray(omega0, dtype=float), t_final.shape)
    n = max(1, int(math.ceil(t_final.max() / cfg.resolve(t_final.max()) - 1e-9)))
    h = t_final / n
    psi = np.zeros((2,) + t_final.shape, dtype=complex)
    psi[0] = 1.0
    t = np.zeros_like(t_final)
    for k in range(n):
        k1 = _operator_rhs(omega0, control_fn, t, psi)
        k2 = _operator_rhs(omega0, control_fn, t + 0.5 * h, psi + 0.5 * h * k1)
        k3 = _operator_rhs(omega0, control_fn, t + 0.5 * h, psi + 0.5 * h * k2)
        k4 = _operator_rhs(omega0, control_fn, t + h, psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (k + 1) * h
        if (k + 1) % cfg.project_every == 0 or k == n - 1:
            norm = np.sqrt(np.sum(np.abs(psi) ** 2, axis=0))
            drift = np.max(np.abs(norm - 1.0))
            if drift > DRIFT_LIMIT:
                raise StepError(f"unitarity drift {drift:.3e} between projections; reduce the step")
            psi = psi / norm
    return psi


def propagate_controls(omega0, control_fn, t, cfg=IntegrationConfig()):
    psi = integrate_columns(omega0, control_fn, [t], cfg)
    return make_element(complex(psi[0, 0]), complex(psi[1, 0]))


def propagate(p, schedule, t=None, cfg=IntegrationConfig()):
    """Integrate dX/dt = (omega0 J_z + u . J) X from X(0) = I up to t."""
    if t is None:
        t = schedule.duration
    if t > schedule.duration + 1e-12:
        raise ValueError("t exceeds the schedule duration")
    if t <= 0:
        return Su2Element(1 + 0j, 0j)
    return propagate_controls(p.omega0, schedule.control_fn(), t, cfg)


def propagate_extremals(p_list, specs, t_list, cfg=IntegrationConfig()):
    """Batched propagation of single-piece extremal schedules.

    Returns (alpha, beta) arrays for each (params, spec, t) triple.
    """
    omega0 = np.array([p.omega0 for p in p_list])
    gamma1 = np.array([p.gamma1 for p in p_list])
    omega = np.array([s.omega for s in specs])
    phi = np.array([s.phi for s in specs])
    uz = np.array([control_uz(p, s.branch, s.omega) for p, s in zip(p_list, specs)])

    def fn(t):
        arg = omega * t + phi
        return gamma1 * np.cos(arg), gamma1 * np.sin(arg), uz

    psi = integrate_columns(omega0, fn, np.asarray(t_list, dtype=float), cfg)
    return psi[0], psi[1]


# --- costate -------------------------------------------------------------


@dataclass(frozen=True)
class CostateState:
    b_x: float
    b_y: float
    b_z: float

    @property
    def mu(self):
        return math.hypot(self.b_x, self.b_y)


@dataclass(frozen=True)
class CostateReport:
    closed_form_residual: float
    invariant_drift: float
    hamiltonian_drift: float
    steps: int

    def ok(self, tol=1e-8):
        return max(self.closed_form_residual, self.invariant_drift, self.hamiltonian_drift) < tol


def initial_costate(p, spec):
    """Costate normalized to mu^2 + b_z^2 = 1 that generates the given extremal."""
    if spec.branch is Branch.ZERO:
        mu, bz = 1.0, 0.0
    else:
        d = derived(p, spec)
        if d.a == 0:
            raise ValueError("costate undefined for a = 0")
        mu, bz = p.gamma1 / d.a, d.b / d.a
    return CostateState(mu * math.cos(spec.phi), mu * math.sin(spec.phi), bz)


def costate_rhs(p, u, b):
    ux, uy, uz = u
    bx, by, bz = b
    w = p.omega0 + uz
    return np.array([-w * by + uy * bz, w * bx - ux * bz, ux * by - uy * bx])


def pontryagin_hamiltonian(p, b, v):
    return p.omega0 * b[2] + v[0] * b[0] + v[1] * b[1] + v[2] * b[2]


def maximizing_controls(p, b):
    """Pointwise maximizer of the Pontryagin Hamiltonian for mu > 0 and b_z != 0."""
    mu = math.hypot(b[0], b[1])
    return p.gamma1 * b[0] / mu, p.gamma1 * b[1] / mu, p.gamma2 * math.copysign(1.0, b[2])


def costate_check(p, spec, t, cfg=IntegrationConfig()):
    """Integrate the costate equations under the extremal controls and compare.

    Checks b_x = mu cos(omega t + phi), b_y = mu sin(omega t + phi), constant b_z,
    constancy of mu^2 + b_z^2 and of the Hamiltonian along the path.
    """
    b0 = initial_costate(p, spec)
    uz = control_uz(p, spec.branch, spec.omega)
    mu = b0.mu

    def u(s):
        arg = spec.omega * s + spec.phi
        return p.gamma1 * math.cos(arg), p.gamma1 * math.sin(arg), uz

    y = np.array([b0.b_x, b0.b_y, b0.b_z])
    inv0 = y @ y
    h0 = pontryagin_hamiltonian(p, y, u(0.0))
    n = max(1, int(math.ceil(t / cfg.resolve(t) - 1e-9))) if t > 0 else 0
    h = t / n if n else 0.0
    res = inv_drift = ham_drift = 0.0
    s = 0.0
    for k in range(n):
        k1 = costate_rhs(p, u(s), y)
        k2 = costate_rhs(p, u(s + h / 2), y + h / 2 * k1)
        k3 = costate_rhs(p, u(s + h / 2), y + h / 2 * k2)
        k4 = costate_rhs(p, u(s + h), y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s = (k + 1) * h
        arg = spec.omega * s + spec.phi
        ref = np.array([mu * math.cos(arg), mu * math.sin(arg), b0.b_z])
        res = max(res, float(np.max(np.abs(y - ref))))
        inv_drift = max(inv_drift, abs(y @ y - inv0))
        ham_drift = max(ham_drift, abs(pontryagin_hamiltonian(p, y, u(s)) - h0))
    return CostateReport(res, inv_drift, ham_drift, n)


# --- brute-force minimum time ------------------------------------------------


def _families(p, s_max):
    """Extremal families as (label, param bounds, alpha(param, tau)) triples."""
    fams = []
    for branch in (Branch.PLUS, Branch.MINUS):
        c = branch_offset(p, branch)
        sigma = branch.sign

        def f(u, tau, c=c, sigma=sigma):
            s = p.gamma1 * tau + (s_max - p.gamma1 * tau) * u
            return arc_alpha(c, p.gamma1, sigma, tau, s)

        fams.append((branch, f))
    if p.gamma2 > 0:

        def f0(u, tau):
            omega = p.c_minus + 2 * p.gamma2 * u
            return np.cos(p.gamma1 * tau) * np.exp(-1j * omega * tau)

        fams.append((Branch.ZERO, f0))
    return fams


def _polish(g, a, x0, b, return_x=False):
    """Bounded scalar minimization of g on [a, b], written as an offset from x0.

    Brent's tolerance scales with |x|, so working with the offset keeps the
    attainable accuracy independent of where the bracket sits.
    """
    g0 = float(g(x0))
    best = (float(x0), g0)
    if b > a:
        r = optimize.minimize_scalar(lambda e: g(x0 + e), bounds=(a - x0, b - x0), method="bounded",
                                     options={"xatol": 1e-15})
        if r.fun < g0:
            best = (float(x0 + r.x), float(r.fun))
    return best if return_x else best[1]


def brute_force_min_time(
    p,
    target,
    omega_grid=512,
    tau_grid=512,
    tau_max=None,
    hit_tol=1e-4,
    refine_tol=1e-10,
    max_refinements=400,
):
    """Smallest physical time at which some extremal lands in the target class.

    Scans a (frequency, tau) grid of every extremal family, minimizes the
    distance between the target and the whole front line near each promising
    grid row, and then locates the first hitting time by bisection. Frequencies are
    scanned through a = sqrt(b^2 + gamma1^2) up to two border crossings, so
    the search also covers trajectories past their first cut point.
    """
    if omega_grid < 64 or tau_grid < 64:
        raise ValueError("grids must have at least 64 points")
    z = complex(target.alpha)
    if abs(z - 1.0) < 1e-12:
        return 0.0
    if tau_max is None:
        tau_max = 2 * math.pi / max(p.gamma1, 1e-3)
    s_max = 2 * math.pi
    taus = np.linspace(0.0, tau_max, tau_grid + 1)[1:]
    us = np.linspace(0.0, 1.0, omega_grid)
    dtau = taus[1] - taus[0]

    candidates = []
    for fam_id, (_, f) in enumerate(_families(p, s_max)):
        A = f(us[None, :], taus[:, None])
        dist = np.abs(A - z)
        # reach of each grid node towards its neighbours
        reach = np.zeros_like(dist)
        reach[:, :-1] = np.maximum(reach[:, :-1], np.abs(np.diff(A, axis=1)))
        reach[:, 1:] = np.maximum(reach[:, 1:], np.abs(np.diff(A, axis=1)))
        reach[:-1, :] = np.maximum(reach[:-1, :], np.abs(np.diff(A, axis=0)))
        reach[1:, :] = np.maximum(reach[1:, :], np.abs(np.diff(A, axis=0)))
        flagged = dist <= 1.5 * reach + hit_tol
        row_min = dist.min(axis=1)
        # rows where the front line passes closest to the target
        local = np.ones_like(row_min, dtype=bool)
        local[1:] &= row_min[1:] <= row_min[:-1]
        local[:-1] &= row_min[:-1] <= row_min[1:]
        rows = np.nonzero(flagged.any(axis=1) | (local & (row_min < 0.25)))[0]
        for k in rows:
            d = dist[k]
            minima = np.nonzero((d <= np.roll(d, 1)) & (d <= np.roll(d, -1)))[0]
            if len(minima) == 0:
                minima = [int(np.argmin(d))]
            for j in sorted(minima, key=lambda j: d[j])[:3]:
                candidates.append((taus[k], fam_id, k, j))
    candidates.sort()

    fams = _families(p, s_max)

    def row_dist(f, tau):
        # distance from the target to the whole front line at tau
        d = np.abs(f(us, tau) - z)
        minima = np.nonzero((d <= np.roll(d, 1)) & (d <= np.roll(d, -1)))[0]
        out = float(d.min())
        for i in sorted(minima, key=lambda i: d[i])[:3]:
            r = _polish(lambda u: abs(f(u, tau) - z), us[max(i - 1, 0)], us[i], us[min(i + 1, len(us) - 1)])
            out = min(out, r)
        return out

    best = math.inf
    seen = set()
    for count, (tau_k, fam_id, k, _) in enumerate(candidates):
        if count >= max_refinements or tau_k - 2 * dtau > best:
            break
        if (fam_id, k) in seen:
            continue
        seen.add((fam_id, k))
        _, f = fams[fam_id]
        lo_b = taus[k - 1] if k > 0 else 1e-12
        hi_b = taus[min(k + 1, len(taus) - 1)]
        # the row distance has kinks and narrow tangential dips, so scan the
        # bracket and polish every local minimum in time order
        ts = np.linspace(lo_b, hi_b, 33)
        ds = np.array([row_dist(f, t) for t in ts])
        dips = np.nonzero((ds <= np.r_[np.inf, ds[:-1]]) & (ds <= np.r_[ds[1:], np.inf]))[0]
        hit = None
        for i in dips:
            tau_hit, d_hit = _polish(lambda t: row_dist(f, t), ts[max(i - 1, 0)], ts[i], ts[min(i + 1, 32)],
                                     return_x=True)
            if d_hit <= refine_tol:
                hit = (ts[max(i - 1, 0)], tau_hit)
                break
        if hit is None:
            # a near miss, not a hit
            continue
        lo_t, hi_t = hit
        while lo_t > 1e-12 and row_dist(f, lo_t) <= refine_tol:
            lo_t = max(1e-12, lo_t - 2 * dtau)
        for _ in range(60):
            mid = 0.5 * (lo_t + hi_t)
            if row_dist(f, mid) <= refine_tol:
                hi_t = mid
            else:
                lo_t = mid
            if hi_t - lo_t < 1e-12:
                break
        best = min(best, hi_t)
    if not math.isfinite(best):
        raise NotFound(f"no extremal reaches the target class before tau_max={tau_max}")
    return 2.0 * best


def random_control_probe(p, target, t_bound, n_samples=64, n_pieces=8, seed=0):
    """Closest approach to the target class by random piecewise-constant controls.

    Coarse sanity check only: returns the smallest equivalence distance reached
    at time t_bound by admissible random controls. Full control-space search is
    out of reach; this merely guards against gross errors in the extremal
    analysis.
    """
    rng = np.random.default_rng(seed)
    r = p.gamma1 * np.sqrt(rng.uniform(size=(n_samples, n_pieces)))
    th = rng.uniform(0, 2 * np.pi, size=(n_samples, n_pieces))
    uz = rng.uniform(-p.gamma2, p.gamma2, size=(n_samples, n_pieces))
    # each piece has a constant generator -(i/2) n.sigma, so its exponential is exact
    nx, ny, nz = r * np.cos(th), r * np.sin(th), p.omega0 + uz
    nn = np.sqrt(nx**2 + ny**2 + nz**2)
    half = 0.5 * nn * (t_bound / n_pieces)
    c = np.cos(half)
    s_ = np.divide(np.sin(half), nn, out=np.full_like(nn, 0.5 * t_bound / n_pieces), where=nn > 0)
    a, b = np.ones(n_samples, dtype=complex), np.zeros(n_samples, dtype=complex)
    for k in range(n_pieces):
        u11 = c[:, k] - 1j * s_[:, k] * nz[:, k]
        u21 = -1j * s_[:, k] * (nx[:, k] + 1j * ny[:, k])
        a, b = u11 * a - np.conj(u21) * b, u21 * a + np.conj(u11) * b
    return float(np.min(np.abs(a - target.alpha)))
