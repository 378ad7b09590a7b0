"""Piecewise description of the three control fields over a duration."""

from dataclasses import dataclass, field, asdict
import math

import numpy as np

from .extremals import Branch, ExtremalSpec, control_uz


@dataclass(frozen=True)
class SchedulePiece:
    branch: Branch
    omega: float
    phi: float
    u_z: float
    t_start: float
    t_end: float

    def controls(self, gamma1, t):
        arg = self.omega * np.asarray(t) + self.phi
        return gamma1 * np.cos(arg), gamma1 * np.sin(arg), np.full(np.shape(arg), self.u_z)


@dataclass(frozen=True)
class ControlSchedule:
    duration: float
    gamma1: float
    pieces: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.pieces and self.duration > 0:
            raise ValueError("a schedule of positive duration needs at least one piece")
        t = 0.0
        for piece in self.pieces:
            if not math.isclose(piece.t_start, t, abs_tol=1e-12):
                raise ValueError("schedule pieces must tile [0, duration] without gaps")
            t = piece.t_end
        if self.pieces and not math.isclose(t, self.duration, abs_tol=1e-12):
            raise ValueError("schedule pieces must end at the duration")

    @classmethod
    def single(cls, p, spec, duration):
        piece = SchedulePiece(
            branch=spec.branch,
            omega=float(spec.omega),
            phi=float(spec.phi),
            u_z=float(control_uz(p, spec.branch, spec.omega)),
            t_start=0.0,
            t_end=float(duration),
        )
        return cls(duration=float(duration), gamma1=p.gamma1, pieces=(piece,) if duration > 0 else ())

    def piece_at(self, t):
        for piece in self.pieces:
            if t <= piece.t_end:
                return piece
        return self.pieces[-1]

    def controls(self, t):
        """(u_x, u_y, u_z) at physical time t."""
        if not self.pieces:
            return 0.0, 0.0, 0.0
        ux, uy, uz = self.piece_at(t).controls(self.gamma1, t)
        return float(ux), float(uy), float(uz)

    def control_fn(self):
        """Vectorized controls for the integrator."""
        if not self.pieces:
            return lambda t: (0.0 * t, 0.0 * t, 0.0 * t)
        if len(self.pieces) == 1:
            piece = self.pieces[0]
            return lambda t: piece.controls(self.gamma1, t)

        def fn(t):
            t = np.asarray(t, dtype=float)
            out = [np.zeros_like(t) for _ in range(3)]
            for piece in self.pieces:
                mask = (t >= piece.t_start) & (t <= piece.t_end)
                for o, v in zip(out, piece.controls(self.gamma1, t)):
                    o[mask] = np.broadcast_to(v, t.shape)[mask]
            return tuple(out)

        return fn

    def spec(self):
        piece = self.pieces[0]
        return ExtremalSpec(piece.branch, piece.omega, piece.phi)

    def to_dict(self):
        return {
            "duration": self.duration,
            "gamma1": self.gamma1,
            "pieces": [dict(asdict(pc), branch=pc.branch.value) for pc in self.pieces],
        }

    @classmethod
    def from_dict(cls, d):
        pieces = tuple(
            SchedulePiece(**dict(pc, branch=Branch.parse(pc["branch"]))) for pc in d["pieces"]
        )
        return cls(duration=float(d["duration"]), gamma1=float(d["gamma1"]), pieces=pieces)
