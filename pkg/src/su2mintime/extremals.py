"""Closed-form extremal controls and trajectories.

Trajectories are indexed by a branch and a frequency omega. Physical time t
drives the controls; the group element is written on the rescaled clock
tau = t / 2, which is also the clock of every disk-picture quantity
(front lines, critical and boundary frequencies).

On the Plus/Minus branches u_z = +/-gamma2 and b = omega0 + u_z - omega;
on the Zero branch b = 0 and u_z = omega - omega0. In both cases
a = sqrt(b^2 + gamma1^2) and

    alpha = exp(-i omega tau) (cos a tau - i (b/a) sin a tau)
    beta  = -i (gamma1/a) exp(i (omega tau + phi)) sin a tau
"""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .errors import DegenerateError, RangeError
from .su2 import make_element


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    ZERO = "zero"

    @property
    def sign(self):
        return {"plus": 1, "minus": -1, "zero": 0}[self.value]

    def conjugate(self):
        """Branch swap induced by reversing the drift."""
        return {Branch.PLUS: Branch.MINUS, Branch.MINUS: Branch.PLUS}.get(self, self)

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"+": "plus", "-": "minus", "0": "zero", "p": "plus", "m": "minus", "z": "zero"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class ExtremalSpec:
    branch: Branch
    omega: float
    phi: float = 0.0


@dataclass(frozen=True)
class DerivedFrequencies:
    b: float
    a: float


def branch_offset(p, branch):
    """omega0 + u_z for the constant-u_z family of a Plus/Minus branch."""
    if branch is Branch.ZERO:
        raise ValueError("the Zero branch has no fixed u_z")
    return p.omega0 + branch.sign * p.gamma2


def check_range(p, branch, omega):
    if branch is Branch.PLUS:
        ok = omega < p.c_plus
    elif branch is Branch.MINUS:
        ok = omega > p.c_minus
    else:
        ok = p.c_minus <= omega <= p.c_plus
    if not ok:
        raise RangeError(
            f"omega={omega!r} outside the {branch.value} range for "
            f"omega0={p.omega0}, gamma2={p.gamma2}"
        )


def control_uz(p, branch, omega):
    if branch is Branch.ZERO:
        return omega - p.omega0
    return branch.sign * p.gamma2


def derived(p, spec):
    if spec.branch is Branch.ZERO:
        b = 0.0
    else:
        b = branch_offset(p, spec.branch) - spec.omega
    return DerivedFrequencies(b=b, a=math.hypot(b, p.gamma1))


def extremal_controls(p, spec, t):
    check_range(p, spec.branch, spec.omega)
    arg = spec.omega * t + spec.phi
    return (
        p.gamma1 * math.cos(arg),
        p.gamma1 * math.sin(arg),
        control_uz(p, spec.branch, spec.omega),
    )


def _alpha_beta(b, gamma1, omega, phi, tau):
    """Vectorized closed form; sin(a tau)/a is evaluated through sinc so a -> 0 is safe."""
    a = np.hypot(b, gamma1)
    sin_over_a = tau * np.sinc(a * tau / np.pi)
    rot = np.exp(-1j * omega * tau)
    alpha = rot * (np.cos(a * tau) - 1j * b * sin_over_a)
    beta = -1j * gamma1 * sin_over_a * np.exp(1j * (omega * tau + phi))
    return alpha, beta


def extremal_element(p, spec, t):
    check_range(p, spec.branch, spec.omega)
    d = derived(p, spec)
    alpha, beta = _alpha_beta(d.b, p.gamma1, spec.omega, spec.phi, 0.5 * t)
    return make_element(complex(alpha), complex(beta))


def disk_alpha(p, branch, omega, tau):
    """alpha on the disk for arrays of (omega, tau); no range checks."""
    omega = np.asarray(omega, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if branch is Branch.ZERO:
        return np.cos(p.gamma1 * tau) * np.exp(-1j * omega * tau)
    b = branch_offset(p, branch) - omega
    return _alpha_beta(b, p.gamma1, omega, 0.0, tau)[0]


def frontline_point(p, branch, omega, tau):
    """Disk point (x, y) reached at rescaled time tau by the (branch, omega) extremal."""
    branch = Branch.parse(branch)
    if np.ndim(omega) == 0:
        check_range(p, branch, float(omega))
    else:
        for w in np.asarray(omega).ravel():
            check_range(p, branch, float(w))
    z = disk_alpha(p, branch, omega, tau)
    if np.ndim(z) == 0:
        z = complex(z)
        return z.real, z.imag
    return z.real, z.imag


def critical_frequency(p, branch):
    """omega_c = (gamma1^2 + c^2) / c with c = omega0 +/- gamma2."""
    branch = Branch.parse(branch)
    c = branch_offset(p, branch)
    if c == 0:
        raise DegenerateError(
            f"omega0 = {'-' if branch is Branch.PLUS else ''}gamma2: the "
            f"{branch.value} branch has no critical trajectory"
        )
    return (p.gamma1**2 + c**2) / c


def critical_time(p, branch):
    """Time at which the critical spiral reaches the disk border.

    Returned on the rescaled clock tau (the value equals pi / a(omega_c));
    multiply by two for physical time.
    """
    branch = Branch.parse(branch)
    if p.gamma1 == 0:
        raise DegenerateError("critical time undefined for gamma1 = 0")
    c = branch_offset(p, branch)
    return math.pi * abs(c) / (p.gamma1 * math.sqrt(c**2 + p.gamma1**2))


def boundary_frequency(p, branch, tau, sign):
    """Frequency whose trajectory touches the disk border exactly at tau."""
    branch = Branch.parse(branch)
    if sign not in (1, -1, "+", "-"):
        raise ValueError("sign must be +1 or -1")
    sign = {"+": 1, "-": -1}.get(sign, sign)
    if tau <= 0:
        raise RangeError("tau must be positive")
    rad = (math.pi / tau) ** 2 - p.gamma1**2
    if rad < 0:
        if rad > -1e-12 * (math.pi / tau) ** 2:
            rad = 0.0
        else:
            raise RangeError(f"tau={tau!r} exceeds pi/gamma1; no border-touching trajectory")
    return branch_offset(p, branch) + sign * math.sqrt(rad)


def border_sign(branch):
    """Second sign of boundary_frequency that keeps omega inside the branch range."""
    return -1 if branch is Branch.PLUS else 1


def arc_alpha(c, gamma1, sigma, tau, s):
    """alpha of the constant-u_z family with offset c, written in (tau, s = a tau).

    sigma = +1 selects b >= 0 (Plus side), -1 selects b <= 0 (Minus side).
    The parameterization stays finite as tau -> 0 where omega diverges;
    tau = 0 maps to the identity for every s.
    """
    tau = np.asarray(tau, dtype=float)
    s = np.asarray(s, dtype=float)
    q = np.sqrt(np.maximum(s * s - (gamma1 * tau) ** 2, 0.0))
    ratio = np.divide(q, s, out=np.zeros(np.broadcast(q, s).shape), where=s > 0)
    return np.exp(-1j * (c * tau - sigma * q)) * (np.cos(s) - 1j * sigma * ratio * np.sin(s))


def arc_omega(c, gamma1, sigma, tau, s):
    """Frequency corresponding to the (tau, s) parameterization."""
    tau = np.asarray(tau, dtype=float)
    q = np.sqrt(np.maximum(np.asarray(s) ** 2 - (gamma1 * tau) ** 2, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(tau > 0, c - sigma * q / np.where(tau > 0, tau, 1.0), -sigma * np.inf)


def arc_parameter(p, branch, omega, tau):
    """Inverse of arc_omega for a Plus/Minus branch: s = a(omega) tau."""
    b = branch_offset(p, branch) - omega
    return np.hypot(b, p.gamma1) * tau
