import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from su2mintime import (
    GENERATORS,
    NormalizationError,
    ProblemParams,
    commutator,
    diagonal,
    disk_coords,
    equiv_distance,
    identity,
    make_element,
    swap,
)
from su2mintime.su2 import from_matrix

angles = st.floats(0, 2 * math.pi)
unit = st.floats(0, 1)


@st.composite
def elements(draw):
    r = draw(unit)
    return make_element(r * cmath.exp(1j * draw(angles)), math.sqrt(1 - r * r) * cmath.exp(1j * draw(angles)))


def test_make_element_examples():
    e = make_element(1, 0)
    assert e == identity()
    s = make_element(0, 1j)
    assert s == swap()
    assert np.allclose(s.matrix, [[0, 1j], [1j, 0]])
    e = make_element(0.6, 0.8j)
    assert abs(abs(e.alpha) ** 2 + abs(e.beta) ** 2 - 1) < 1e-15


def test_make_element_rejects_unnormalized():
    with pytest.raises(NormalizationError):
        make_element(1, 1)
    # tiny deviations are renormalized
    e = make_element(1 + 1e-12, 0)
    assert e.alpha == 1


def test_disk_coords_examples():
    assert disk_coords(identity()) == (1.0, 0.0)
    assert disk_coords(swap()) == (0.0, 0.0)
    assert disk_coords(make_element(0.6 + 0.3j, math.sqrt(1 - 0.45))) == pytest.approx((0.6, 0.3), abs=1e-15)
    assert disk_coords(diagonal(1.0)) == pytest.approx((math.cos(1.0), math.sin(1.0)))


def test_equiv_distance_examples():
    b = math.sqrt(1 - 0.45)
    assert equiv_distance(identity(), swap()) == 1.0
    assert equiv_distance(make_element(0.6 + 0.3j, b), make_element(0.6 - 0.3j, b)) == pytest.approx(0.6, abs=1e-15)


def test_generator_algebra():
    jx, jy, jz = (GENERATORS[k].matrix for k in ("x", "y", "z"))
    assert np.allclose(commutator(jx, jy), jz)
    assert np.allclose(commutator(jy, jz), jx)
    assert np.allclose(commutator(jz, jx), jy)


def test_params_validation():
    with pytest.raises(ValueError):
        ProblemParams(1, -1, 1)
    with pytest.raises(ValueError):
        ProblemParams(float("nan"), 1, 1)
    p = ProblemParams(4, 1, 3)
    assert (p.c_plus, p.c_minus) == (7, 1)
    assert p.mirrored() == ProblemParams(-4, 1, 3)


@given(elements(), angles)
def test_equiv_distance_ignores_beta_phase(e, th):
    f = make_element(e.alpha, cmath.exp(1j * th) * e.beta)
    assert equiv_distance(e, f) < 1e-15


@given(elements(), elements(), elements())
def test_equiv_distance_is_pseudometric(a, b, c):
    assert equiv_distance(a, b) == equiv_distance(b, a)
    assert equiv_distance(a, c) <= equiv_distance(a, b) + equiv_distance(b, c) + 1e-15
    assert 0 <= equiv_distance(a, b) <= 2 + 1e-15


@given(elements(), elements())
def test_product_stays_in_group(a, b):
    m = (a @ b).matrix
    assert np.allclose(m, a.matrix @ b.matrix, atol=1e-14)
    assert abs(np.linalg.det(m) - 1) < 1e-13
    assert np.allclose(m.conj().T @ m, np.eye(2), atol=1e-14)


@given(elements())
def test_matrix_round_trip(e):
    f = from_matrix(e.matrix)
    assert abs(f.alpha - e.alpha) < 1e-15 and abs(f.beta - e.beta) < 1e-15
