"""Bound-curve container shared by the quantum, classical and Wigner routes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LHS_START_TOL = 1e-12


def _readonly_float(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BoundCurve:
    """Sampled overlap curve against its cosine lower bound.

    ``lhs`` is the normalized overlap of the evolved state with the initial
    one, ``rhs = cos(dispersion * t)`` the speed-limit bound, and
    ``slack = lhs - rhs``.  The time grid starts at exactly 0 and ascends;
    lhs[0] = 1 within 1e-12 and rhs[0] = 1 exactly.
    """

    times: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    slack: np.ndarray
    dispersion: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        lhs = np.asarray(self.lhs, dtype=float)
        rhs = np.asarray(self.rhs, dtype=float)
        slack = np.asarray(self.slack, dtype=float)
        if not (t.shape == lhs.shape == rhs.shape == slack.shape) or t.ndim != 1:
            raise ValueError("times/lhs/rhs/slack must be 1-d of equal length")
        if t.size == 0:
            raise ValueError("empty time grid")
        if t[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("time grid must be strictly ascending")
        if abs(lhs[0] - 1.0) > LHS_START_TOL:
            raise ValueError(f"lhs[0] = {lhs[0]:.15g} is not 1 within 1e-12")
        if rhs[0] != 1.0:
            raise ValueError("rhs[0] must be exactly 1")
        if not np.isfinite(self.dispersion) or self.dispersion < 0.0:
            raise ValueError("dispersion must be a finite non-negative rate")
        for name, arr in (("times", t), ("lhs", lhs), ("rhs", rhs), ("slack", slack)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        object.__setattr__(self, "times", _readonly_float(t))
        object.__setattr__(self, "lhs", _readonly_float(lhs))
        object.__setattr__(self, "rhs", _readonly_float(rhs))
        object.__setattr__(self, "slack", _readonly_float(slack))

    @classmethod
    def from_sides(cls, times, lhs, rhs, dispersion: float) -> "BoundCurve":
        times = np.asarray(times, dtype=float)
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        return cls(times, lhs, rhs, lhs - rhs, float(dispersion))

    @property
    def min_slack(self) -> float:
        return float(self.slack.min())

    def holds(self, tol: float) -> bool:
        """True when the bound is violated by no more than ``tol``."""
        return self.min_slack >= -tol
