"""Set model of multi-photon indistinguishability.

Each photon is a set of unit measure; the measure of a pairwise
intersection plays the role of the two-photon overlap, and the measure of
the common intersection of all sets bounds like ``c1``.  Sets are finite
unions of half-open intervals ``[a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import ParameterError, ParseError, ValidationError

SNAP = 1e-15
UNIT_TOL = 1e-12


def _normalise(intervals):
    """Sort, drop empties, merge overlapping or touching pieces (within SNAP)."""
    pieces = sorted((float(a), float(b)) for a, b in intervals if b - a > SNAP)
    merged = []
    for a, b in pieces:
        if merged and a <= merged[-1][1] + SNAP:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return tuple(merged)


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple = ()
    universe: float | None = None

    def __post_init__(self):
        for a, b in self.intervals:
            if not (math.isfinite(a) and math.isfinite(b)) or b < a:
                raise ValidationError(f"bad interval [{a}, {b})")
            if self.universe is not None and (a < 0 or b > self.universe + SNAP):
                raise ValidationError(f"interval [{a}, {b}) leaves the universe [0, {self.universe})")
        object.__setattr__(self, "intervals", _normalise(self.intervals))

    @classmethod
    def interval(cls, a, b, universe=None):
        return cls(((a, b),), universe)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __contains__(self, x):
        return any(a <= x < b for a, b in self.intervals)

    def __and__(self, other):
        return intersect(self, other)

    def to_text(self) -> str:
        """One ``a b`` endpoint pair per line, ascending."""
        return "".join(f"{a!r} {b!r}\n" for a, b in self.intervals)

    @classmethod
    def from_text(cls, text: str, universe=None) -> "IntervalSet":
        pairs = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                a, b = (float(x) for x in raw.split())
            except ValueError:
                raise ParseError("expected two endpoints", line=lineno)
            pairs.append((a, b))
        return cls(tuple(pairs), universe)


def measure(S: IntervalSet) -> float:
    return math.fsum(b - a for a, b in S.intervals)


def _universe(A, B):
    if A.universe is None:
        return B.universe
    if B.universe is None:
        return A.universe
    return max(A.universe, B.universe)


def intersect(A: IntervalSet, B: IntervalSet) -> IntervalSet:
    """Two-pointer sweep over the sorted pieces of both sets."""
    out = []
    i = j = 0
    xs, ys = A.intervals, B.intervals
    while i < len(xs) and j < len(ys):
        lo = max(xs[i][0], ys[j][0])
        hi = min(xs[i][1], ys[j][1])
        if hi - lo > SNAP:
            out.append((lo, hi))
        if xs[i][1] < ys[j][1]:
            i += 1
        else:
            j += 1
    return IntervalSet(tuple(out), _universe(A, B))


def common_intersection(sets) -> IntervalSet:
    sets = list(sets)
    if not sets:
        raise ParameterError("common intersection of an empty family is undefined")
    return reduce(intersect, sets)


def _check_family(sets, r):
    sets = list(sets)
    n = len(sets)
    if n < 2:
        raise ParameterError("need at least two sets")
    if not 0 <= r < n:
        raise ParameterError(f"reference index must be in 0..{n - 1}, got {r}")
    for i, S in enumerate(sets):
        size = measure(S)
        if abs(size - 1.0) > UNIT_TOL:
            raise ValidationError(f"set {i} has measure {size!r}, expected 1")
    return sets, n


def reference_overlaps(sets, r) -> list[float]:
    sets, _ = _check_family(sets, r)
    return [measure(intersect(sets[r], S)) for j, S in enumerate(sets) if j != r]


def theorem_bounds(sets, r: int) -> tuple[float, float]:
    """``(2 - n + I_r, I_r/(n-1))`` with ``I_r`` the summed overlaps with set ``r``.

    The lower value is not clamped and may be negative.
    """
    overlaps = reference_overlaps(sets, r)
    n = len(overlaps) + 1
    I_r = math.fsum(overlaps)
    return 2.0 - n + I_r, I_r / (n - 1)


def min_pairwise_upper(sets, r: int) -> float:
    return min(reference_overlaps(sets, r))


def sets_from_reference_overlaps(overlaps, staggered: bool = False) -> list[IntervalSet]:
    """Unit sets whose overlaps with the reference ``[0, 1)`` are exactly ``overlaps``.

    The reference comes first.  By default the shared parts are nested
    prefixes ``[0, o_j)``, so the common intersection reaches the pairwise
    minimum.  With ``staggered=True`` the shared parts are laid end to end
    around ``[0, 1)`` (wrapping), which drives the common intersection down
    to ``max(0, 2 - n + sum(o))`` whenever ``sum(o) >= n - 2``.
    Non-shared tails live in disjoint slots to the right of 1.
    """
    overlaps = [float(o) for o in overlaps]
    for o in overlaps:
        if not 0.0 <= o <= 1.0:
            raise ParameterError(f"overlap must lie in [0, 1], got {o}")
    tail_total = math.fsum(1.0 - o for o in overlaps)
    W = 1.0 + tail_total
    sets = [IntervalSet(((0.0, 1.0),), W)]
    slot = 1.0
    offset = 0.0
    for o in overlaps:
        pieces = []
        if staggered:
            start = offset % 1.0
            end = start + o
            if end <= 1.0:
                pieces.append((start, end))
            else:
                pieces.extend([(start, 1.0), (0.0, end - 1.0)])
            offset = start + o
        else:
            pieces.append((0.0, o))
        tail = 1.0 - o
        if tail > 0:
            pieces.append((slot, slot + tail))
            slot += tail
        sets.append(IntervalSet(tuple(pieces), W))
    return sets


def random_unit_set(W: float, k: int, seed) -> IntervalSet:
    """``k`` disjoint pieces of total measure 1 placed in ``[0, W)``, seeded.

    Piece lengths and the gaps between them are Dirichlet draws; touching
    pieces (possible only when ``W`` is 1) merge, so fewer than ``k`` may
    remain.
    """
    W = float(W)
    if W < 1.0:
        raise ParameterError(f"a unit set does not fit in a universe of width {W}")
    if k < 1:
        raise ParameterError(f"need at least one piece, got {k}")
    rng = np.random.default_rng(seed)
    lengths = rng.dirichlet(np.ones(k))
    lengths = lengths / math.fsum(lengths)
    gaps = rng.dirichlet(np.ones(k + 1)) * (W - 1.0)
    pieces = []
    pos = 0.0
    for length, gap in zip(lengths, gaps):
        pos += gap
        pieces.append((pos, pos + length))
        pos += length
    # rounding can nudge the last end a hair past W
    if pieces[-1][1] > W:
        shift = pieces[-1][1] - W
        pieces = [(a - shift, b - shift) for a, b in pieces]
        if pieces[0][0] < 0:
            pieces[0] = (0.0, pieces[0][1])
    return IntervalSet(tuple(pieces), W)


def random_family(n: int, seed, max_width: float = 4.0, max_pieces: int = 8) -> list[IntervalSet]:
    """``n`` random unit sets sharing one universe; width and piece counts drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    W = float(rng.uniform(1.0, max_width))
    children = rng.integers(0, 2**63 - 1, size=n)
    pieces = rng.integers(1, max_pieces + 1, size=n)
    return [random_unit_set(W, int(k), int(s)) for k, s in zip(pieces, children)]


@dataclass(frozen=True)
class FamilyCheck:
    """Worst slack of every theorem inequality over all reference choices.

    Slacks are ``common - lower``, ``upper - common``, ``min_pair - common``
    and ``upper - min_pair``; a negative value is a violation.
    """

    common: float
    lower_slack: float
    upper_slack: float
    min_pair_slack: float
    min_vs_mean_slack: float

    @property
    def worst(self) -> float:
        return min(self.lower_slack, self.upper_slack, self.min_pair_slack, self.min_vs_mean_slack)


def check_family(sets) -> FamilyCheck:
    sets = list(sets)
    common = measure(common_intersection(sets))
    lo = up = mp = mm = math.inf
    for r in range(len(sets)):
        lower, upper = theorem_bounds(sets, r)
        pair = min_pairwise_upper(sets, r)
        lo = min(lo, common - lower)
        up = min(up, upper - common)
        mp = min(mp, pair - common)
        mm = min(mm, upper - pair)
    return FamilyCheck(common, lo, up, mp, mm)
