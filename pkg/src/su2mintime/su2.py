"""SU(2) elements, problem parameters and the generator algebra.

An element is stored through its first column (alpha, beta); the matrix is

    [[alpha, -conj(beta)],
     [beta,   conj(alpha)]]

Generators follow J_k = -(i/2) sigma_k, so [J_x, J_y] = J_z and cyclic.
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .errors import NormalizationError

NORM_GATE = 1e-9

SIGMA = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class Generator:
    index: str
    matrix: np.ndarray


GENERATORS = {k: Generator(k, -0.5j * s) for k, s in SIGMA.items()}


def commutator(a, b):
    return a @ b - b @ a


@dataclass(frozen=True)
class ProblemParams:
    """Drift frequency and the two control bounds.

    gamma1 bounds the transverse controls (u_x^2 + u_y^2 <= gamma1^2),
    gamma2 the longitudinal one (|u_z| <= gamma2).
    """

    omega0: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        for name in ("omega0", "gamma1", "gamma2"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
        if self.gamma1 < 0 or self.gamma2 < 0:
            raise ValueError("control bounds must be non-negative")
        object.__setattr__(self, "omega0", float(self.omega0))
        object.__setattr__(self, "gamma1", float(self.gamma1))
        object.__setattr__(self, "gamma2", float(self.gamma2))

    @property
    def c_plus(self):
        """Effective z-frequency omega0 + gamma2 of the u_z = +gamma2 family."""
        return self.omega0 + self.gamma2

    @property
    def c_minus(self):
        return self.omega0 - self.gamma2

    def mirrored(self):
        """Parameters with the drift reversed (used for omega0 < 0)."""
        return ProblemParams(-self.omega0, self.gamma1, self.gamma2)

    def as_dict(self):
        return {"omega0": self.omega0, "gamma1": self.gamma1, "gamma2": self.gamma2}


@dataclass(frozen=True)
class Su2Element:
    alpha: complex
    beta: complex

    @property
    def matrix(self):
        a, b = self.alpha, self.beta
        return np.array([[a, -b.conjugate()], [b, a.conjugate()]], dtype=complex)

    def __matmul__(self, other):
        # first column of the product of the two matrices
        a1, b1, a2, b2 = self.alpha, self.beta, other.alpha, other.beta
        return make_element(a1 * a2 - b1.conjugate() * b2, b1 * a2 + a1.conjugate() * b2)


def make_element(alpha, beta):
    """Build an element, renormalizing small deviations from |a|^2 + |b|^2 = 1."""
    alpha, beta = complex(alpha), complex(beta)
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if not abs(norm2 - 1.0) <= NORM_GATE:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {norm2!r}, expected 1")
    n = math.sqrt(norm2)
    return Su2Element(alpha / n, beta / n)


def from_matrix(m):
    m = np.asarray(m, dtype=complex)
    return make_element(m[0, 0], m[1, 0])


def identity():
    return Su2Element(1 + 0j, 0j)


def swap():
    """The NOT/SWAP class (alpha = 0, beta = i); the matrix is i*sigma_x, i*sigma_y up to the phase of beta."""
    return Su2Element(0j, 1j)


def diagonal(lam):
    """exp(i lam sigma_z); its disk point is (cos lam, sin lam)."""
    return Su2Element(cmath.exp(1j * lam), 0j)


def disk_coords(e):
    return e.alpha.real, e.alpha.imag


def equiv_distance(a, b):
    """Distance between classes that differ only by the phase of beta."""
    return abs(a.alpha - b.alpha)
