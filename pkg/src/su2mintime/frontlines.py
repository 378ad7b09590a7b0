"""Optimal front lines, their intersections and the reachable set in the disk.

The front lines F+, F-, F0 at rescaled time tau are the endpoints of the
three extremal families, truncated to the frequencies that are still optimal
at tau. For omega0 >= 0 (negative drift goes through the mirror wrapper):

    Zero   [omega0 - gamma2, omega0 + gamma2], canonical within a 2 pi window
    Plus   [omega_b(tau), omega0 + gamma2]
    Minus  [omega0 - gamma2, omega_b(tau)], capped at omega_c when
           omega0 > gamma2 (the critical spiral cuts the family)

where omega_b is the frequency whose trajectory touches the disk border
exactly at tau.

The reachable set at tau is the image of the extremal parameter domains
{(branch, omega, tau') : tau' <= tau, a tau' <= pi}. Each family is split
into pieces on which the map to the disk has a Jacobian of constant sign,
so a point belongs to the image of a piece iff the image of the piece
boundary winds around it. Membership and the boundary both rest on this.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np
from scipy.spatial import cKDTree
import shapely
from shapely.geometry import LineString, Polygon
from shapely.geometry.polygon import orient
from shapely.ops import polygonize, unary_union

from .errors import DegenerateError, EmptyLocus, RangeError
from .extremals import (
    Branch,
    arc_alpha,
    arc_omega,
    branch_offset,
    critical_frequency,
    disk_alpha,
)

EDGE_BAND = 1e-9
SLIVER_AREA = 1e-10
TAG_TOL = 1e-6
EXACT_TOL = 1e-13
SUBOPTIMAL_TOL = 1e-5


@dataclass(frozen=True)
class FrontLineSample:
    branch: Branch
    omega: float
    x: float
    y: float
    tau: float


# --- truncated front lines -------------------------------------------------


def _border_offset(p, tau):
    """sqrt((pi/tau)^2 - gamma1^2), or None once every trajectory is past the border."""
    rad = (math.pi / tau) ** 2 - p.gamma1**2
    if rad < 0:
        if rad > -1e-12 * (math.pi / tau) ** 2:
            return 0.0
        return None
    return math.sqrt(rad)


def spiral_cuts(p, branch):
    """True when the critical frequency of a branch lies inside its range (omega0 >= 0)."""
    if p.gamma1 == 0 or branch is Branch.ZERO:
        return False
    c = branch_offset(p, branch)
    if c == 0:
        return False
    w_c = critical_frequency(p, branch)
    if not math.isfinite(w_c):
        # |c| so small that omega_c overflows: same as the c = 0 limit
        return False
    return w_c < c if branch is Branch.PLUS else w_c > c


def truncated_range(p, branch, tau):
    """Closed frequency interval of the optimal front line at tau.

    Requires omega0 >= 0; see sample_frontline for the general case.
    """
    branch = Branch.parse(branch)
    if tau <= 0:
        raise RangeError("tau must be positive")
    if p.omega0 < 0:
        raise RangeError("truncated_range expects omega0 >= 0; use the mirrored parameters")
    if p.gamma1 > 0 and p.gamma1 * tau > math.pi * (1 + 1e-12):
        raise EmptyLocus(f"every {branch.value} trajectory has left the optimal set by tau={tau!r}")
    if branch is Branch.ZERO:
        half = math.pi / tau
        return max(p.c_minus, p.omega0 - half), min(p.c_plus, p.omega0 + half)
    off = _border_offset(p, tau)
    c = branch_offset(p, branch)
    if branch is Branch.PLUS:
        lo, hi = c - off, c
        if spiral_cuts(p, branch):
            lo = max(lo, critical_frequency(p, branch))
    else:
        lo, hi = c, c + off
        if spiral_cuts(p, branch):
            hi = min(hi, critical_frequency(p, branch))
    return lo, hi


def _frontline_arrays(p, branch, tau, n):
    lo, hi = truncated_range(p, branch, tau)
    omega = np.linspace(lo, hi, n)
    z = disk_alpha(p, branch, omega, tau)
    return omega, z


def sample_frontline(p, branch, tau, n):
    """n samples of the truncated front line of one branch, ordered by omega.

    Negative drift is handled by symmetry: the problem with -omega0 has the
    complex-conjugate disk picture with Plus and Minus exchanged and
    omega -> -omega.
    """
    branch = Branch.parse(branch)
    if n < 2:
        raise ValueError("need at least two samples")
    if p.omega0 < 0:
        mirror = sample_frontline(p.mirrored(), branch.conjugate(), tau, n)
        out = [FrontLineSample(branch, -s.omega, s.x, -s.y, tau) for s in mirror]
        return sorted(out, key=lambda s: s.omega)
    omega, z = _frontline_arrays(p, branch, tau, n)
    return [
        FrontLineSample(branch, float(w), float(v.real), float(v.imag), float(tau))
        for w, v in zip(omega, z)
    ]


# --- intersections of F+ and F- ----------------------------------------------


@dataclass(frozen=True)
class Intersection:
    omega_plus: float
    omega_minus: float
    x: float
    y: float

    def __iter__(self):
        return iter((self.omega_plus, self.omega_minus, self.x, self.y))


def _segment_crossings(P, Q):
    """Index pairs (i, j) and parameters where segment P[i]P[i+1] crosses Q[j]Q[j+1]."""
    p0, d1 = P[:-1, None], np.diff(P)[:, None]
    q0, d2 = Q[None, :-1], np.diff(Q)[None, :]
    cross = (d1.conj() * d2).imag
    w = q0 - p0
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (w.conj() * d2).imag / cross
        t = (w.conj() * d1).imag / cross
    hit = (cross != 0) & (s >= 0) & (s <= 1) & (t >= 0) & (t <= 1)
    i, j = np.nonzero(hit)
    return i, j, s[i, j], t[i, j]


def _refine_pair(fp, fm, wp, wm, bounds_p, bounds_m, max_iter=50):
    """Newton on alpha_plus(wp) = alpha_minus(wm); None when it fails or leaves the ranges."""
    for _ in range(max_iter):
        r = fp(wp) - fm(wm)
        if abs(r) < 1e-13:
            break
        hp = 1e-6 * max(1.0, abs(wp))
        hm = 1e-6 * max(1.0, abs(wm))
        dp = (fp(wp + hp) - fp(wp - hp)) / (2 * hp)
        dm = -(fm(wm + hm) - fm(wm - hm)) / (2 * hm)
        J = np.array([[dp.real, dm.real], [dp.imag, dm.imag]])
        if np.linalg.cond(J) > 1e8:
            return None
        step = np.linalg.solve(J, [-r.real, -r.imag])
        wp, wm = wp + step[0], wm + step[1]
        if not (bounds_p[0] - 1e-12 <= wp <= bounds_p[1] + 1e-12):
            return None
        if not (bounds_m[0] - 1e-12 <= wm <= bounds_m[1] + 1e-12):
            return None
    if abs(fp(wp) - fm(wm)) >= 1e-10:
        return None
    return min(max(wp, bounds_p[0]), bounds_p[1]), min(max(wm, bounds_m[0]), bounds_m[1])


def _refine_by_subdivision(fp, fm, cell_p, cell_m, levels=60):
    """Bisection fallback: shrink the two crossing cells until they meet."""
    for _ in range(levels):
        up = np.linspace(*cell_p, 9)
        um = np.linspace(*cell_m, 9)
        i, j, _, _ = _segment_crossings(fp(up), fm(um))
        if len(i) == 0:
            return None
        cell_p = (up[i[0]], up[i[0] + 1])
        cell_m = (um[j[0]], um[j[0] + 1])
        if abs(fp(0.5 * sum(cell_p)) - fm(0.5 * sum(cell_m))) < 1e-12:
            break
    wp, wm = 0.5 * sum(cell_p), 0.5 * sum(cell_m)
    if abs(fp(wp) - fm(wm)) >= 1e-10:
        return None
    return wp, wm


def frontline_intersections(p, tau, grid=512):
    """All crossings of the truncated F+ and F- at tau, each listed once."""
    if tau <= 0:
        raise RangeError("tau must be positive")
    if p.omega0 < 0:
        found = frontline_intersections(p.mirrored(), tau, grid)
        return [Intersection(-m.omega_minus, -m.omega_plus, m.x, -m.y) for m in found]
    try:
        rp = truncated_range(p, Branch.PLUS, tau)
        rm = truncated_range(p, Branch.MINUS, tau)
    except EmptyLocus:
        return []

    def fp(w):
        return disk_alpha(p, Branch.PLUS, w, tau)

    def fm(w):
        return disk_alpha(p, Branch.MINUS, w, tau)

    wp = np.linspace(*rp, grid)
    wm = np.linspace(*rm, grid)
    pairs = []
    # endpoint coincidences first (junction overlap, border meeting)
    for ep in rp:
        for em in rm:
            if abs(fp(ep) - fm(em)) < 1e-10:
                pairs.append((ep, em))
    ii, jj, _, _ = _segment_crossings(fp(wp), fm(wm))
    for i, j in zip(ii, jj):
        cell_p, cell_m = (wp[i], wp[i + 1]), (wm[j], wm[j + 1])
        sol = _refine_pair(fp, fm, 0.5 * sum(cell_p), 0.5 * sum(cell_m), rp, rm)
        if sol is None:
            sol = _refine_by_subdivision(fp, fm, cell_p, cell_m)
        if sol is not None:
            pairs.append(sol)
    out = []
    for a, b in pairs:
        if any(abs(a - o.omega_plus) < 1e-8 and abs(b - o.omega_minus) < 1e-8 for o in out):
            continue
        z = complex(fp(a))
        out.append(Intersection(float(a), float(b), z.real, z.imag))
    return sorted(out, key=lambda o: (o.omega_plus, o.omega_minus))


# --- parameter pieces of the reachable set -----------------------------------


@dataclass(frozen=True)
class _Edge:
    """A curve u in [0, 1] -> (alpha, omega, kind) on the image of a piece boundary."""

    branch: Branch
    fn: object
    cluster: bool = False

    def __call__(self, u):
        return self.fn(np.asarray(u, dtype=float))


def _cap(x, hi):
    return np.minimum(x, hi)


def _arc_piece(p, branch, T, lower, upper):
    """Boundary edges of {0 <= tau' <= T, lower(tau') <= s <= upper(tau')}."""
    c = branch_offset(p, branch)
    g1 = p.gamma1
    sigma = branch.sign
    w_c = critical_frequency(p, branch) if spiral_cuts(p, branch) else None
    a_c = math.hypot(c - w_c, g1) if w_c is not None else None

    def kind_of(tau_, s, default):
        if default != "top":
            return np.full(np.shape(s), default, dtype=object)
        on_spiral = np.zeros(np.shape(s), dtype=bool)
        if a_c is not None:
            on_spiral = np.abs(s - a_c * tau_) < 1e-12 * max(1.0, math.pi)
            on_spiral &= s < math.pi * (1 - 1e-12)
        return np.where(on_spiral, "spiral", "border").astype(object)

    def make(tau_fn, s_fn, default):
        def fn(u):
            tau_, s = tau_fn(u), s_fn(u)
            z = arc_alpha(c, g1, sigma, tau_, s)
            w = arc_omega(c, g1, sigma, tau_, s)
            return z, np.broadcast_to(w, np.shape(z)), kind_of(tau_, np.broadcast_to(s, np.shape(z)), default)

        return fn

    bottom = make(lambda u: T * u, lambda u: lower(T * u), "junction")

    def s_front(u):
        lo, hi = lower(T), upper(T)
        return lo + (hi - lo) * u**2

    front = make(lambda u: np.full(np.shape(u), T), s_front, "front")
    top = make(lambda u: T * (1 - u), lambda u: upper(T * (1 - u)), "top")
    return [_Edge(branch, bottom), _Edge(branch, front, cluster=True), _Edge(branch, top)]


def _zero_piece(p, t0, t1, tau):
    lo, hi = p.c_minus, p.c_plus
    half = 0.5 * math.pi / p.gamma1 if p.gamma1 > 0 else math.inf

    def kind_at(t):
        if abs(t - half) < 1e-14 * max(1.0, half):
            return "origin"
        if t == 0:
            return "identity"
        if abs(t - tau) < 1e-14 * max(1.0, tau):
            return "front"
        return "border"

    def make(w_fn, t_fn, kind):
        def fn(u):
            w, t = w_fn(u), t_fn(u)
            z = disk_alpha(p, Branch.ZERO, w, t)
            shape = np.shape(z)
            return z, np.broadcast_to(w, shape), np.full(shape, kind, dtype=object)

        return fn

    return [
        _Edge(Branch.ZERO, make(lambda u: lo + (hi - lo) * u, lambda u: np.full(np.shape(u), t0), kind_at(t0))),
        _Edge(Branch.ZERO, make(lambda u: np.full(np.shape(u), hi), lambda u: t0 + (t1 - t0) * u, "junction")),
        _Edge(Branch.ZERO, make(lambda u: hi - (hi - lo) * u, lambda u: np.full(np.shape(u), t1), kind_at(t1))),
        _Edge(Branch.ZERO, make(lambda u: np.full(np.shape(u), lo), lambda u: t1 - (t1 - t0) * u, "junction")),
    ]


def reachable_pieces(p, tau):
    """Parameter pieces (as closed edge loops) whose images cover the reachable set."""
    if p.omega0 < 0:
        raise RangeError("reachable_pieces expects omega0 >= 0")
    if p.gamma1 <= 0:
        raise DegenerateError("without transverse control the reachable set has no interior")
    g1 = p.gamma1
    T = min(tau, math.pi / g1)
    pieces = []
    for branch in (Branch.PLUS, Branch.MINUS):

        def lower(t):
            return g1 * t

        def upper(t):
            return np.full(np.shape(t), math.pi)

        if spiral_cuts(p, branch):
            c = branch_offset(p, branch)
            a_c = math.hypot(c - critical_frequency(p, branch), g1)

            def split(t, a_c=a_c):
                return _cap(a_c * t, math.pi)

            pieces.append(_arc_piece(p, branch, T, lower, split))
            pieces.append(_arc_piece(p, branch, T, split, upper))
        else:
            pieces.append(_arc_piece(p, branch, T, lower, upper))
    if p.gamma2 > 0:
        half = 0.5 * math.pi / g1
        pieces.append(_zero_piece(p, 0.0, min(tau, half), tau))
        if tau > half:
            pieces.append(_zero_piece(p, half, T, tau))
    return pieces


def _winding(z, pts):
    d = np.diff(np.angle(pts - z))
    d = (d + np.pi) % (2 * np.pi) - np.pi
    return int(round(d.sum() / (2 * np.pi)))


def _adaptive_edge(edge, z, n=256, max_levels=48):
    """Sample an edge so that successive points subtend at most pi/4 at z."""
    u = np.linspace(0.0, 1.0, n)
    pts = edge(u)[0]
    for _ in range(max_levels):
        d = np.abs(np.angle((pts[1:] - z) / np.where(pts[:-1] == z, 1, pts[:-1] - z)))
        # endpoints inside the edge band are settled by the distance test, so
        # degenerate edges (zero-width pieces) do not refine without bound
        far = np.minimum(np.abs(pts[1:] - z), np.abs(pts[:-1] - z)) > EDGE_BAND
        bad = (d > np.pi / 4) & (np.diff(u) > 1e-15) & far
        if not bad.any():
            break
        mids = 0.5 * (u[:-1][bad] + u[1:][bad])
        u = np.sort(np.concatenate([u, mids]))
        pts = edge(u)[0]
    return pts


def _segment_distance(z, pts):
    a, b = pts[:-1], pts[1:]
    ab = b - a
    L2 = np.abs(ab) ** 2
    t = np.clip(np.divide(((z - a) * ab.conj()).real, L2, out=np.zeros_like(L2), where=L2 > 0), 0, 1)
    return float(np.min(np.abs(a + t * ab - z))) if len(a) else float(abs(pts[0] - z))


def _piece_hits(piece, z):
    ring = np.concatenate([_adaptive_edge(e, z) for e in piece])
    if _segment_distance(z, ring) <= EDGE_BAND:
        return True
    return _winding(z, ring) != 0


def _mirror_point(p, target):
    x, y = target
    if p.omega0 < 0:
        return p.mirrored(), complex(x, -y)
    return p, complex(x, y)


def contains(p, tau, target):
    """Whether the disk point target = (x, y) is reachable in rescaled time <= tau.

    Points within 1e-9 of the region boundary count as reachable.
    """
    q, z = _mirror_point(p, target)
    if abs(z) > 1 + 1e-9:
        raise RangeError("target lies outside the unit disk")
    if abs(z - 1) <= EDGE_BAND:
        return True
    if tau <= 0:
        return False
    if q.gamma1 == 0:
        # only the drift phases exp(-i (omega0 + u_z) tau') on the border
        if abs(abs(z) - 1) > EDGE_BAND:
            return False
        ang = -np.angle(z)
        lo, hi = sorted((q.c_minus * tau, q.c_plus * tau))
        ks = np.arange(math.floor((min(lo, 0) - ang) / (2 * np.pi)) - 1, math.ceil((max(hi, 0) - ang) / (2 * np.pi)) + 2)
        cand = ang + 2 * np.pi * ks
        # phase theta reachable iff theta = c tau' with c in [c-, c+], tau' in [0, tau]
        return bool(np.any((cand >= min(lo, 0) - 1e-9) & (cand <= max(hi, 0) + 1e-9)))
    return any(_piece_hits(piece, z) for piece in reachable_pieces(q, tau))


# --- reachable boundary ------------------------------------------------------


@dataclass(frozen=True)
class BoundarySegment:
    kind: str
    branch: Branch
    omega_min: float
    omega_max: float
    points: np.ndarray = field(repr=False)
    ring: int = 0


@dataclass(frozen=True)
class ReachableBoundary:
    tau: float
    segments: tuple
    closed: bool
    rings: tuple = field(repr=False, default=())
    zero_suboptimal: bool = False

    @property
    def area(self):
        return self.polygon().area

    def polygon(self):
        if not self.rings:
            return Polygon()
        return Polygon(self.rings[0], self.rings[1:])

    def vertices(self):
        return np.concatenate([s.points for s in self.segments]) if self.segments else np.zeros((0, 2))


def _sample_piece(piece, resolution):
    """Closed sample ring of a piece plus its runs of constant (kind, branch)."""
    zs, runs = [], []
    u = np.linspace(0.0, 1.0, resolution)
    for e in piece:
        z, w, k = e(u)
        w = np.asarray(w, dtype=float)
        zs.append(z)
        cut = np.nonzero(k[1:] != k[:-1])[0] + 1
        for lo, hi in zip(np.r_[0, cut], np.r_[cut, len(u)]):
            hi = min(hi + 1, len(u))  # runs share their end points
            runs.append((k[lo], e.branch, z[lo:hi], w[lo:hi]))
    return np.concatenate(zs), runs


def _piece_region(z):
    """Union of the faces of a closed curve around which it winds nonzero times."""
    keep = np.concatenate([[True], np.abs(np.diff(z)) > 1e-15])
    z = z[keep]
    if len(z) < 4:
        return Polygon()
    coords = np.column_stack([z.real, z.imag])
    if not np.allclose(coords[0], coords[-1]):
        coords = np.vstack([coords, coords[:1]])
    noded = unary_union(LineString(coords))
    faces = []
    for face in polygonize(noded):
        if face.area < SLIVER_AREA:
            continue
        q = face.representative_point()
        if _winding(complex(q.x, q.y), z) != 0:
            faces.append(face)
    return unary_union(faces) if faces else Polygon()


def _clean(geom):
    geom = geom.buffer(0)
    polys = [g for g in getattr(geom, "geoms", [geom]) if isinstance(g, Polygon) and g.area > SLIVER_AREA]
    out = []
    for g in polys:
        holes = [h for h in g.interiors if Polygon(h).area > SLIVER_AREA]
        out.append(Polygon(g.exterior, holes))
    return out


_KIND_PRIORITY = ("front", "border", "spiral", "origin", "junction", "identity")


def _tag_ring(coords, runs):
    """Split a closed boundary ring into segments by the source curve of each edge.

    Edges are tagged through their midpoints. An edge may belong to any run
    within TAG_TOL of its nearest one (overlapping border arcs, chord sag of
    sampled curves); the previous edge's run is kept when possible, otherwise
    the higher-priority kind. An edge lying exactly on a sampled front line
    always goes to that front line, which keeps smooth junctions sharp.
    """
    mids = 0.5 * (coords[:-1] + coords[1:])
    pts = shapely.points(mids[:, 0], mids[:, 1])
    order = sorted(range(len(runs)), key=lambda r: _KIND_PRIORITY.index(runs[r][0]))
    rank = np.empty(len(runs), dtype=int)
    rank[order] = np.arange(len(order))
    segs_geom, seg_rank = [], []
    for r in range(len(runs)):
        z = runs[r][2]
        if len(z) < 2:
            z = np.r_[z, z]
        xy = np.column_stack([z.real, z.imag])
        segs_geom.append(shapely.linestrings(np.stack([xy[:-1], xy[1:]], axis=1)))
        seg_rank.append(np.full(len(z) - 1, rank[r]))
    segs_geom = np.concatenate(segs_geom)
    seg_rank = np.concatenate(seg_rank)
    tree = shapely.STRtree(segs_geom)
    _, dmin = tree.query_nearest(pts, return_distance=True, all_matches=False)
    ok = np.zeros((len(order), len(mids)), dtype=bool)
    pi, si = tree.query(pts, predicate="dwithin", distance=dmin + TAG_TOL)
    ok[seg_rank[si], pi] = True
    exact = np.zeros_like(ok)
    pi, si = tree.query(pts, predicate="dwithin", distance=EXACT_TOL)
    exact[seg_rank[si], pi] = True
    n_front = sum(runs[r][0] == "front" for r in order)
    has_front = exact[:n_front].any(axis=0)
    first_front = np.argmax(exact[:n_front], axis=0)
    first = np.argmax(ok, axis=0)
    owner_row = np.empty(len(mids), dtype=int)
    prev = first_front[0] if has_front[0] else first[0]
    for i in range(len(mids)):
        if ok[prev, i] and (exact[prev, i] or not has_front[i]):
            pass  # stay on the current curve while it remains a candidate
        elif has_front[i]:
            prev = first_front[i]
        else:
            prev = first[i]
        owner_row[i] = prev
    owner = np.asarray(order)[owner_row]
    key = [(runs[o][0], runs[o][1]) for o in owner]
    n = len(mids)
    bounds = [0] + [i for i in range(1, n) if key[i] != key[i - 1]] + [n]
    trees = {}
    segs = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        o = owner[lo]
        kind, branch, z, w = runs[o]
        seg_pts = coords[lo : hi + 1]
        if o not in trees:
            trees[o] = cKDTree(np.column_stack([z.real, z.imag]))
        ww = _run_omega(seg_pts, z, w, trees[o])
        ww = ww[np.isfinite(ww)]
        segs.append(
            BoundarySegment(
                kind,
                branch,
                float(ww.min()) if len(ww) else math.nan,
                float(ww.max()) if len(ww) else math.nan,
                seg_pts,
            )
        )
    if len(segs) > 1 and (segs[0].kind, segs[0].branch) == (segs[-1].kind, segs[-1].branch):
        # the ring start fell inside a curve
        a, b = segs[-1], segs[0]
        merged = BoundarySegment(
            a.kind, a.branch,
            float(np.nanmin([a.omega_min, b.omega_min])), float(np.nanmax([a.omega_max, b.omega_max])),
            np.vstack([a.points, b.points[1:]]),
        )
        segs = [merged] + segs[1:-1]
    return segs


def _run_omega(pts, z, w, tree):
    """Frequencies of boundary points, interpolated along the nearest source chord."""
    _, j = tree.query(pts)
    zz = pts[:, 0] + 1j * pts[:, 1]
    best_d = np.full(len(pts), np.inf)
    out = w[j].astype(float)
    for lo in (j - 1, j):
        lo = np.clip(lo, 0, max(len(z) - 2, 0))
        hi = np.minimum(lo + 1, len(z) - 1)
        dz = z[hi] - z[lo]
        den = np.abs(dz) ** 2
        t = np.clip(np.divide(((zz - z[lo]) * dz.conj()).real, den, out=np.zeros(len(pts)), where=den > 0), 0, 1)
        d = np.abs(z[lo] + t * dz - zz)
        with np.errstate(invalid="ignore"):
            val = w[lo] + t * (w[hi] - w[lo])
        val = np.where(np.isfinite(val), val, w[j])
        better = d < best_d
        best_d = np.where(better, d, best_d)
        out = np.where(better, val, out)
    return out


def _mirror_boundary(rb, p):
    segs = []
    # reflection reverses orientation: walk each ring backwards
    for s in sorted(rb.segments[::-1], key=lambda sg: sg.ring):
        pts = s.points * [1, -1]
        segs.append(BoundarySegment(s.kind, s.branch.conjugate(), -s.omega_max, -s.omega_min, pts[::-1], s.ring))
    rings = tuple(np.asarray(r)[::-1] * [1, -1] for r in rb.rings)
    return ReachableBoundary(rb.tau, tuple(segs), rb.closed, rings, rb.zero_suboptimal)


def reachable_boundary(p, tau, resolution=2048):
    """Boundary of the set reachable in rescaled time <= tau.

    The region is the union of the images of the parameter pieces; its
    boundary is made of front lines, border arcs, critical-spiral traces and
    possibly the Zero-branch junction traces. The exterior ring runs
    counter-clockwise; a hole (unreachable inner disk) gives a second,
    clockwise ring. Segments are tagged by the curve they come from.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    if tau <= 0:
        raise RangeError("tau must be positive")
    if p.omega0 < 0:
        return _mirror_boundary(reachable_boundary(p.mirrored(), tau, resolution), p)
    pieces = reachable_pieces(p, tau)
    regions, runs = [], []
    for piece in pieces:
        z, piece_runs = _sample_piece(piece, resolution)
        regions.append(_piece_region(z))
        runs.extend(piece_runs)
    polys = _clean(unary_union(regions))
    if not polys:
        raise EmptyLocus(f"reachable region degenerate at tau={tau!r}")
    polys.sort(key=lambda g: -g.area)
    region = orient(polys[0], 1.0)

    rings = [np.asarray(region.exterior.coords)] + [np.asarray(r.coords) for r in region.interiors]
    # clip tiny excursions past the unit circle from polygon noding
    rings = [_clip_to_disk(r) for r in rings]
    segments = []
    for k, r in enumerate(rings):
        segments.extend(replace(sg, ring=k) for sg in _tag_ring(r, runs))

    zero_sub = False
    if p.gamma2 > 0 and tau <= math.pi / p.gamma1:
        _, f0 = _frontline_arrays(p, Branch.ZERO, tau, 257)
        bnd = region.boundary
        d = shapely.distance(bnd, shapely.points(f0.real[1:-1], f0.imag[1:-1]))
        # well above the chord sag of the sampled boundary
        zero_sub = bool(np.any(d > SUBOPTIMAL_TOL))
    return ReachableBoundary(float(tau), tuple(segments), True, tuple(rings), zero_sub)


def _clip_to_disk(r):
    rad = np.hypot(r[:, 0], r[:, 1])
    scale = np.where(rad > 1.0, 1.0 / np.where(rad > 0, rad, 1), 1.0)
    return r * scale[:, None]


def contains_many(boundary, xs, ys):
    """Vectorized membership against a precomputed boundary (tolerance band included)."""
    poly = boundary.polygon()
    pts = shapely.points(np.asarray(xs, float), np.asarray(ys, float))
    inside = shapely.contains(poly, pts) | (shapely.distance(poly.boundary, pts) <= EDGE_BAND)
    return np.asarray(inside)


# --- regime classification ---------------------------------------------------


@dataclass(frozen=True)
class RegimeClass:
    rotation: str
    depth: str
    excluded_radius: float = None
    boundary_case: tuple = ()
    mirrored: bool = False

    def as_dict(self):
        return {
            "rotation": self.rotation,
            "depth": self.depth,
            "excluded_radius": self.excluded_radius,
            "boundary_case": list(self.boundary_case),
            "mirrored": self.mirrored,
        }


def _tie(a, b):
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def classify(p):
    """Four-class regime table; ties are flagged instead of assigned a side."""
    mirrored = p.omega0 < 0
    w0 = abs(p.omega0)
    flags = []
    if _tie(p.gamma2, w0):
        rotation = None
        flags.append("rotation")
    else:
        rotation = "CounterRotating" if p.gamma2 > w0 else "CoRotating"
    radius = None
    if p.gamma1 == 0:
        depth = None
        flags.append("gamma1_zero")
    elif _tie(2 * p.gamma1, p.gamma2):
        depth = None
        flags.append("depth")
    elif 2 * p.gamma1 < p.gamma2:
        depth = "InnerDiskExcluded"
        radius = math.cos(math.pi * p.gamma1 / p.gamma2)
    else:
        depth = "FullDepth"
    return RegimeClass(rotation, depth, radius, tuple(flags), mirrored)
