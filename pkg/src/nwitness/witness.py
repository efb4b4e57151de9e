"""Closed-form witness mathematics: thresholds, bounds on c1 and verdicts.

``c1`` is the weight of the all-identical component in a convex
decomposition of the photon state.  A bunching probability above the
threshold ``p* = (2n-3)/(2n-2)`` certifies ``c1 > 0`` in every
decomposition.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .circuitry import CircuitConfig
from .errors import ParameterError


def _check_n(n):
    if int(n) != n or n < 2:
        raise ParameterError(f"photon number must be an integer >= 2, got {n!r}")
    return int(n)


def _check_probability(p, name):
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {p}")
    return p


def ideal_threshold(n: int) -> float:
    n = _check_n(n)
    return (2 * n - 3) / (2 * n - 2)


def extremal_bunching(n: int, m: int) -> float:
    """Bunching of an extremal state with ``m`` bottom photons unlike the reference."""
    n = _check_n(n)
    if int(m) != m or not 0 <= m <= n - 1:
        raise ParameterError(f"distinguishable count must be in 0..{n - 1}, got {m!r}")
    return 1.0 - m / (2 * (n - 1))


def no_collision_step(n: int) -> float:
    """No-collision probability contributed by one distinguishable bottom photon."""
    n = _check_n(n)
    return 1.0 / (2 * (n - 1))


def _clamp(x):
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class C1Interval:
    lower: float
    upper: float
    raw_lower: float
    raw_upper: float

    @property
    def lower_clamped(self) -> bool:
        return self.lower != self.raw_lower

    @property
    def upper_clamped(self) -> bool:
        return self.upper != self.raw_upper

    @property
    def certifies_genuine(self) -> bool:
        return self.lower > 0.0

    def __contains__(self, c1) -> bool:
        return self.lower <= c1 <= self.upper

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "raw_lower": self.raw_lower,
            "raw_upper": self.raw_upper,
            "lower_clamped": self.lower_clamped,
            "upper_clamped": self.upper_clamped,
        }


def c1_bounds(p_b: float, n: int) -> C1Interval:
    """Two-sided bound ``(p_b - p*)/(1 - p*) <= c1 <= 2 p_b - 1``, clamped to [0, 1].

    The lower end comes from the worst-case mixture of the all-identical
    state with a threshold-saturating one; the upper end from mixing it with
    the fully distinguishable state.
    """
    p_star = ideal_threshold(n)
    p_b = float(p_b)
    raw_lower = (p_b - p_star) / (1.0 - p_star)
    raw_upper = 2.0 * p_b - 1.0
    lower, upper = _clamp(raw_lower), _clamp(raw_upper)
    # only reachable for p_b outside [0, 1]; keep the interval well-formed
    lower = min(lower, upper)
    return C1Interval(lower, upper, raw_lower, raw_upper)


def tighter_c1_upper(per_bs_hom) -> float:
    """``min_k (2 p_b(BS_k) - 1)``: each term bounds ``c1`` plus non-negative weights."""
    values = [_check_probability(p, "per-beam-splitter bunching") for p in per_bs_hom]
    if not values:
        raise ParameterError("need at least one per-beam-splitter bunching probability")
    return _clamp(min(2.0 * p - 1.0 for p in values))


def bs_pair_bunching(R: float, identical: bool) -> float:
    """Bunching of one photon in each port of ``BS(R)``: 4R(1-R) or 2R(1-R)."""
    R = _check_probability(R, "reflectivity")
    return (4.0 if identical else 2.0) * R * (1.0 - R)


@dataclass(frozen=True)
class NonidealThreshold:
    """Threshold for a real circuit.

    ``per_scenario[j-1]`` is the bunching probability when only the photon at
    beam splitter ``j`` is distinguishable from the reference.  ``value`` is
    their average; ``worst_case`` the maximum.
    """

    value: float
    config: CircuitConfig
    per_scenario: tuple
    worst_case: float = field(default=None)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "worst_case": self.worst_case,
            "per_scenario": list(self.per_scenario),
        }


def nonideal_threshold(cfg: CircuitConfig) -> NonidealThreshold:
    if not isinstance(cfg, CircuitConfig):
        raise ParameterError("nonideal_threshold needs a CircuitConfig")
    Q = cfg.layer_a_unitary()
    weights = [abs(z) ** 2 for z in Q[:, 0]]
    ind = [bs_pair_bunching(R, True) for R in cfg.layer_b_reflectivities]
    dis = [bs_pair_bunching(R, False) for R in cfg.layer_b_reflectivities]
    scenarios = []
    for jp in range(cfg.d):
        terms = [weights[j] * (dis[j] if j == jp else ind[j]) for j in range(cfg.d)]
        scenarios.append(math.fsum(terms))
    value = math.fsum(scenarios) / len(scenarios)
    return NonidealThreshold(value, cfg, tuple(scenarios), max(scenarios))


class Status(str, enum.Enum):
    GENUINE = "GENUINE"
    NOT_WITNESSED = "NOT-WITNESSED"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    status: Status
    violation: float
    significance: float | None

    @property
    def genuine(self) -> bool:
        return self.status is Status.GENUINE

    def describe(self) -> str:
        if self.significance is None:
            return str(self.status)
        return f"{self.status} ({self.significance:+.1f} sigma)"

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "violation": self.violation,
            "significance": self.significance,
        }


def verdict(p_b: float, threshold: float, stderr: float = 0.0) -> Verdict:
    """GENUINE iff ``p_b`` strictly exceeds ``threshold``.

    Significance is ``(p_b - threshold)/stderr`` when a positive standard
    error is supplied, otherwise ``None``.
    """
    violation = float(p_b) - float(threshold)
    sig = violation / stderr if stderr and stderr > 0 else None
    status = Status.GENUINE if violation > 0 else Status.NOT_WITNESSED
    return Verdict(status, violation, sig)
