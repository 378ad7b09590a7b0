import cmath
import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from su2mintime import (
    Branch,
    DegenerateError,
    ExtremalSpec,
    ProblemParams,
    Unreachable,
    diagonal,
    extremal_element,
    identity,
    lagrange_consistency_check,
    make_element,
    min_time_diagonal,
    min_time_general,
    min_time_swap,
    propagate,
    swap,
    symmetric_bound_time,
)
from su2mintime.synthesis import _asym_time, default_horizon, diagonal_candidates, diagonal_time
from su2mintime.verify import brute_force_min_time

REF = ProblemParams(4, 1, 3)


def test_diagonal_identity_short_circuit():
    r = min_time_diagonal(REF, 0.0)
    assert r.t_f == 0 and r.method == "identity"
    # the closed form's full return loop is only reported
    assert r.details["loop_time"] == pytest.approx(4 * math.pi * 7 / 50, rel=1e-15)
    assert min_time_diagonal(REF, 2 * math.pi).t_f == 0


def test_diagonal_reference_value():
    assert diagonal_time(4, 1, 3, math.pi, +1) == pytest.approx(2 * math.pi * math.sqrt(50) / 50, rel=1e-15)
    assert diagonal_time(4, 1, 3, math.pi, -1) == pytest.approx(math.pi * math.sqrt(2), rel=1e-15)
    r = min_time_diagonal(REF, math.pi)
    assert r.t_f == pytest.approx(0.88858, abs=1e-5)
    assert r.residual < 1e-8
    assert r.branch is Branch.PLUS
    # the propagated schedule lands on the target class
    assert abs(propagate(REF, r.schedule).alpha - cmath.exp(1j * math.pi)) < 1e-8


def test_diagonal_candidates_are_checked():
    cands = diagonal_candidates(REF, math.pi)
    t, w, ok = cands[Branch.PLUS]
    assert t == pytest.approx(0.8885766, abs=1e-7)
    # the u_z = -gamma2 formula time exceeds pi/gamma1 on the tau clock, so it is rejected
    assert not cands[Branch.MINUS][2]


def test_diagonal_angle_is_periodic():
    a = min_time_diagonal(REF, 1.0, verify=False).t_f
    b = min_time_diagonal(REF, 1.0 + 2 * math.pi, verify=False).t_f
    assert a == pytest.approx(b, rel=1e-12)


def test_diagonal_needs_transverse_control():
    with pytest.raises(DegenerateError):
        min_time_diagonal(ProblemParams(4, 0, 3), 1.0)


@pytest.mark.parametrize("g1,t", [(1.0, math.pi), (2.0, math.pi / 2)])
def test_swap(g1, t):
    r = min_time_swap(ProblemParams(4, g1, 3))
    assert r.t_f == t
    assert abs(r.achieved.alpha) < 1e-10
    assert r.branch is Branch.ZERO and r.omega == 4


def test_swap_degenerate():
    with pytest.raises(DegenerateError):
        min_time_swap(ProblemParams(4, 0, 3))


def test_symmetric_bound_examples():
    # both forms agree on the switching surface
    assert symmetric_bound_time(0, 1, math.pi) == pytest.approx(2 * math.pi, rel=1e-15)
    assert 2 * math.pi / (1 - 0) == pytest.approx(2 * math.pi)
    assert symmetric_bound_time(4, math.sqrt(10), math.pi) == pytest.approx(2 * math.pi / (math.sqrt(10) + 4))
    assert symmetric_bound_time(4, math.sqrt(10), math.pi) == pytest.approx(0.877261, abs=1e-6)
    assert symmetric_bound_time(0.5, 1.0, math.pi / 2) == pytest.approx(math.pi / 0.5)
    with pytest.raises(DegenerateError):
        symmetric_bound_time(1, 0, 1)


def test_lagrange_reference_case():
    r = lagrange_consistency_check(1, 2, math.pi / 2, grid=256)
    assert r.within_one_cell and r.argmin_gamma1 == 0
    assert r.rel_error < 0.01
    assert r.endpoint_exact


def test_general_identity_and_cross_checks():
    assert min_time_general(REF, identity()).t_f == 0
    g = min_time_general(REF, swap(), tol=1e-8)
    assert g.t_f == pytest.approx(min_time_swap(REF).t_f, abs=1e-7)
    d = min_time_general(REF, diagonal(math.pi), tol=1e-8)
    assert d.t_f == pytest.approx(min_time_diagonal(REF, math.pi).t_f, abs=1e-7)


@pytest.mark.slow
def test_general_interior_target_against_oracle():
    p = ProblemParams(2, 1, 3)
    e = extremal_element(p, ExtremalSpec(Branch.MINUS, 0.5, 0.2), 1.1)
    r = min_time_general(p, e)
    bf = brute_force_min_time(p, e, tau_max=0.55 * r.t_f + 1e-3)
    assert abs(bf - r.t_f) / r.t_f < 1e-3
    assert r.residual < 1e-8


def test_general_unreachable_within_horizon():
    with pytest.raises(Unreachable) as exc:
        min_time_general(REF, swap(), tau_max=1.0)
    assert exc.value.tau_max == 1.0


def test_general_without_transverse_control():
    p = ProblemParams(1, 0, 1)
    r = min_time_general(p, diagonal(-0.5))
    # alpha = exp(-i c t/2) with c = 2 gives the phase -0.5 at t = 0.5
    assert r.t_f == pytest.approx(0.5, rel=1e-12)
    with pytest.raises(Unreachable):
        min_time_general(p, swap())


def test_general_with_vanishing_longitudinal_bound():
    # a subnormal gamma2 must not blow up the horizon or the membership test
    p = ProblemParams(4.163798053162086, 1.9, 5e-324)
    t = 0.764 * math.pi / 1.9
    e = extremal_element(p, ExtremalSpec(Branch.ZERO, p.c_minus, 0.5), t)
    r = min_time_general(p, e, verify=False)
    assert r.t_f <= t + 1e-8 and r.residual < 1e-8


def test_default_horizon():
    assert default_horizon(ProblemParams(4, 2, 1e-300)) == pytest.approx(3 * math.pi)
    assert default_horizon(ProblemParams(1, 0, 1)) == pytest.approx(2 * math.pi)
    with pytest.raises(DegenerateError):
        default_horizon(ProblemParams(0, 0, 0))


def test_general_match_phase():
    target = make_element(0.3 + 0.2j, cmath.exp(0.7j) * math.sqrt(1 - 0.13))
    r = min_time_general(REF, target, match_phase=True)
    assert abs(r.achieved.beta - target.beta) < 1e-8


# --- properties ------------------------------------------------------------------


@given(st.floats(-5, 5), st.floats(0.01, 5), st.floats(0, math.pi / 2), st.floats(1e-3, 2 * math.pi - 1e-3))
def test_symmetric_bound_dominates(w0, gamma, th, lam):
    g1, g2 = gamma * math.sin(th), gamma * math.cos(th)
    try:
        sym = symmetric_bound_time(w0, gamma, lam)
    except DegenerateError:
        assume(False)
    asym = _asym_time(w0, g1, g2, lam)
    assert sym <= asym * (1 + 1e-9) + 1e-12


@given(st.floats(0, 5), st.floats(0.01, 5), st.floats(1e-3, 2 * math.pi - 1e-3))
def test_symmetric_bound_is_the_gamma1_zero_endpoint(w0, gamma, lam):
    try:
        sym = symmetric_bound_time(w0, gamma, lam)
    except DegenerateError:
        assume(False)
    assert _asym_time(w0, 0.0, gamma, lam) == pytest.approx(sym, rel=1e-9)


@given(st.floats(-5, 5), st.floats(0.3, 3), st.floats(0, 4), st.sampled_from(list(Branch)),
       st.floats(0, 1), st.floats(0.05, 0.95), st.floats(0, 2 * math.pi))
def test_general_never_slower_than_a_known_extremal(w0, g1, g2, branch, u, frac, phi):
    p = ProblemParams(w0, g1, g2)
    w = {Branch.PLUS: p.c_plus - 5 * u - 1e-6, Branch.MINUS: p.c_minus + 5 * u + 1e-6,
         Branch.ZERO: p.c_minus + 2 * g2 * u}[branch]
    t = frac * math.pi / g1
    e = extremal_element(p, ExtremalSpec(branch, w, phi), t)
    assume(abs(e.alpha - 1) > 1e-6)
    r = min_time_general(p, e, verify=False)
    assert r.t_f <= t + 1e-8
    assert r.residual < 1e-8


@given(st.floats(0, 5), st.floats(0.3, 3), st.floats(0.1, 4), st.floats(0.05, 2 * math.pi - 0.05))
def test_diagonal_lands_on_target(w0, g1, g2, lam):
    p = ProblemParams(w0, g1, g2)
    r = min_time_diagonal(p, lam, verify=False)
    assert r.residual < 1e-8
    # no faster border hit than what the general solver finds
    g = min_time_general(p, diagonal(lam), verify=False)
    assert abs(g.t_f - r.t_f) < 1e-6 * max(1.0, r.t_f)
