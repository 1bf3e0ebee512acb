"""Stability and convergence analysis of the third-order APSO position recurrence.

With constant gains the per-axis position obeys

    x(k+1) = -a1 x(k) - a2 x(k-1) - a3 x(k-2) + u(k)

    a1 = -1 - w1 - w2 + (r1 + r2) T
    a2 = w1 + w2 + w1 w2
    a3 = -w1 w2
    u  = T (r1 x_ib + r2 x_gb)

Because r1, r2 range over [0, c1] x [0, c2], a1 ranges over an interval and
stability is decided on its two end points. At the lower end point
(r1 = r2 = 0) the characteristic polynomial factors as (z - 1)(z - w1)(z - w2):
the root at z = 1 is the free drift of an agent with no attraction and is
always present, so the root check discards it and tests the other two.

Note on T: eliminating v and a from ``step_apso`` gives exactly this
recurrence with T replaced by T**2 in a1 and u. The two agree at T = 1,
the setting used everywhere in practice; :func:`effective_gain` maps the
update's T onto the recurrence's.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

BOUNDARY_BAND = 1e-9


class Condition(str, enum.Enum):
    C13 = "C13"
    C14 = "C14"
    C15 = "C15"
    C16 = "C16"
    ROOT_ORACLE = "RootOracle"


@dataclass(frozen=True)
class ThirdOrderCoeffs:
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.a1, self.a2, self.a3])):
            raise ValueError("coefficients must be finite")

    def polynomial(self) -> np.ndarray:
        """Coefficients of z^3 + a1 z^2 + a2 z + a3, highest power first."""
        return np.array([1.0, self.a1, self.a2, self.a3])


@dataclass(frozen=True)
class ConditionValue:
    lhs: float
    rhs: float
    holds: bool


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    failed_conditions: list
    extreme_roots: dict
    conditions: dict = field(default_factory=dict)
    closed_form_stable: bool = True
    oracle_stable: bool = True
    near_boundary: bool = False

    @property
    def disagreement(self) -> bool:
        return self.closed_form_stable != self.oracle_stable


def effective_gain(T: float) -> float:
    """Recurrence gain equivalent to the step rule's scaling factor ``T``."""
    return T * T


def coeffs_from_params(w1: float, w2: float, r1: float, r2: float, T: float) -> ThirdOrderCoeffs:
    if not T > 0:
        raise ValueError("T must be > 0")
    return ThirdOrderCoeffs(
        a1=-1.0 - w1 - w2 + r1 * T + r2 * T,
        a2=w1 + w2 + w1 * w2,
        a3=-w1 * w2,
    )


def companion(c: ThirdOrderCoeffs) -> np.ndarray:
    return np.array([
        [-c.a1, -c.a2, -c.a3],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ])


def roots(c: ThirdOrderCoeffs) -> np.ndarray:
    return np.linalg.eigvals(companion(c))


def root_magnitudes(c: ThirdOrderCoeffs) -> list[float]:
    """Moduli of the roots of z^3 + a1 z^2 + a2 z + a3, largest first."""
    return sorted((float(m) for m in np.abs(roots(c))), reverse=True)


def _drop_unit_root(z: np.ndarray) -> np.ndarray:
    i = int(np.argmin(np.abs(z - 1.0)))
    return np.delete(z, i)


def jury_conditions(w1: float, w2: float, c1: float, c2: float, T: float) -> dict:
    """The four closed-form inequalities, keyed by condition."""
    p = w1 * w2
    s = w1 + w2
    gain = T * (c1 + c2)
    c13 = ConditionValue(2.0 / T * (1.0 + s + p), c1 + c2, 2.0 / T * (1.0 + s + p) > c1 + c2)
    c14 = ConditionValue(abs(p), 1.0, abs(p) < 1.0)
    lhs15 = abs((1.0 - p) * s + p * gain)
    rhs15 = abs(1.0 - p * p)
    c15 = ConditionValue(lhs15, rhs15, lhs15 < rhs15)
    c16 = ConditionValue(abs(s), abs(1.0 + p), abs(s) < abs(1.0 + p))
    return {Condition.C13: c13, Condition.C14: c14, Condition.C15: c15, Condition.C16: c16}


def extreme_polynomials(w1: float, w2: float, c1: float, c2: float, T: float):
    lower = coeffs_from_params(w1, w2, 0.0, 0.0, T)
    upper = ThirdOrderCoeffs(lower.a1 + T * (c1 + c2), lower.a2, lower.a3)
    return lower, upper


def oracle_moduli(w1: float, w2: float, c1: float, c2: float, T: float) -> np.ndarray:
    """Root moduli the oracle judges: the upper polynomial's three roots and
    the lower polynomial's two roots besides its structural z = 1."""
    lower, upper = extreme_polynomials(w1, w2, c1, c2, T)
    return np.concatenate([np.abs(_drop_unit_root(roots(lower))), np.abs(roots(upper))])


def jury_check(w1: float, w2: float, c1: float, c2: float, T: float) -> StabilityVerdict:
    """Closed-form Jury verdict cross-checked against companion-matrix roots."""
    if not (c1 > 0 and c2 > 0 and T > 0):
        raise ValueError("c1, c2 and T must be > 0")
    conds = jury_conditions(w1, w2, c1, c2, T)
    failed = [k for k, v in conds.items() if not v.holds]
    closed_ok = not failed

    lower, upper = extreme_polynomials(w1, w2, c1, c2, T)
    moduli = oracle_moduli(w1, w2, c1, c2, T)
    oracle_ok = bool(np.all(moduli < 1.0))
    if not oracle_ok:
        failed.append(Condition.ROOT_ORACLE)
    return StabilityVerdict(
        stable=not failed,
        failed_conditions=failed,
        extreme_roots={"lower": root_magnitudes(lower), "upper": root_magnitudes(upper)},
        conditions=conds,
        closed_form_stable=closed_ok,
        oracle_stable=oracle_ok,
        near_boundary=bool(np.any(np.abs(moduli - 1.0) <= BOUNDARY_BAND)),
    )


def interior_stable(w1: float, w2: float, c1: float, c2: float, T: float, samples: int = 16) -> bool:
    """Root check at ``samples`` a1 values strictly inside the extreme interval."""
    lower, _ = extreme_polynomials(w1, w2, c1, c2, T)
    width = T * (c1 + c2)
    for f in (np.arange(samples) + 1.0) / (samples + 1.0):
        c = ThirdOrderCoeffs(lower.a1 + f * width, lower.a2, lower.a3)
        if root_magnitudes(c)[0] >= 1.0:
            return False
    return True


def steady_state(r1c: float, r2c: float, x_ib_ss: float, x_gb_ss: float) -> float:
    """Fixed point of the recurrence under constant gains: the gain-weighted mean of the bests."""
    total = r1c + r2c
    if total == 0:
        raise ZeroDivisionError("r1c + r2c must be nonzero")
    return (r1c * x_ib_ss + r2c * x_gb_ss) / total


CoeffStream = Union[ThirdOrderCoeffs, Sequence[ThirdOrderCoeffs], Callable[[int], ThirdOrderCoeffs]]
InputStream = Union[float, Sequence[float], Callable[[int], float]]


def _at(stream, k):
    if callable(stream):
        return stream(k)
    if isinstance(stream, (ThirdOrderCoeffs, int, float, np.floating)):
        return stream
    return stream[k]


def simulate_recurrence(coeffs: CoeffStream, inputs: InputStream,
                        x0: float, x1: float, x2: float, steps: int) -> np.ndarray:
    """Iterate x(k+1) = -a1 x(k) - a2 x(k-1) - a3 x(k-2) + u(k).

    ``x0, x1, x2`` are x(k-2), x(k-1), x(k) at the start. Coefficients and
    inputs may be constant, indexable per step, or callables of the step
    index. Returns the ``steps + 3`` values including the seeds.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    out = np.empty(steps + 3)
    out[:3] = (x0, x1, x2)
    for k in range(steps):
        c = _at(coeffs, k)
        u = _at(inputs, k)
        out[k + 3] = -c.a1 * out[k + 2] - c.a2 * out[k + 1] - c.a3 * out[k] + u
    return out


def apso_recurrence(w1: float, w2: float, T: float, r1, r2, x_ib, x_gb,
                    x0: float, x1: float, x2: float, steps: int) -> np.ndarray:
    """Recurrence driven directly by APSO parameters; gains and bests may vary per step."""
    def coeff(k):
        return coeffs_from_params(w1, w2, _at(r1, k), _at(r2, k), T)

    def inp(k):
        return T * (_at(r1, k) * _at(x_ib, k) + _at(r2, k) * _at(x_gb, k))

    return simulate_recurrence(coeff, inp, x0, x1, x2, steps)


def stability_grid(w1_values, w2_values, c1: float, c2: float, T: float):
    """Yield ``(w1, w2, stable, failed)`` over the lattice, for region plots."""
    for w1 in w1_values:
        for w2 in w2_values:
            v = jury_check(float(w1), float(w2), c1, c2, T)
            yield float(w1), float(w2), v.stable, [c.value for c in v.failed_conditions]
