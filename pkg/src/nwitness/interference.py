"""Extremal distinguishability states and their output statistics.

A photon state is a convex mixture over *extremal labels*: strings such as
``"AAB"`` in which photons sharing a letter are identical and photons with
different letters are perfectly distinguishable.  Distinguishable groups do
not interfere, so the output distribution of an extremal state is the
convolution of the per-group Fock distributions.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .circuitry import bs_modes
from .errors import LabelError, ParameterError, SizeLimitError, ValidationError
from .permanent import all_occupations, output_probability

MAX_LABEL_PHOTONS = 10
_LETTERS = string.ascii_uppercase


def canonical_label(label: str) -> str:
    """Rename letters so first occurrences run A, B, C, ... (``"BAA" -> "ABB"``)."""
    if not label:
        raise LabelError("extremal label must be non-empty")
    mapping = {}
    out = []
    for ch in label:
        if ch not in mapping:
            if len(mapping) >= len(_LETTERS):
                raise LabelError("too many distinct groups in label")
            mapping[ch] = _LETTERS[len(mapping)]
        out.append(mapping[ch])
    return "".join(out)


def enumerate_extremal_labels(n: int) -> list[str]:
    """All canonical labels of ``n`` photons (one per set partition), sorted."""
    if not 1 <= n <= MAX_LABEL_PHOTONS:
        raise SizeLimitError(f"label enumeration supports 1 <= n <= {MAX_LABEL_PHOTONS}, got {n}")
    labels = []

    def grow(prefix, used):
        if len(prefix) == n:
            labels.append("".join(_LETTERS[i] for i in prefix))
            return
        for g in range(used + 1):
            grow(prefix + [g], max(used, g + 1))

    grow([0], 1)
    return labels


def all_identical_label(n: int) -> str:
    return "A" * n


@dataclass(frozen=True)
class PhotonMixture:
    """Convex weights over extremal labels.

    Labels are canonicalised on construction; weights given for two spellings
    of the same label are added.
    """

    weights: Mapping[str, float]

    def __post_init__(self):
        merged = {}
        n = None
        for label, w in self.weights.items():
            key = canonical_label(label)
            if n is None:
                n = len(key)
            elif len(key) != n:
                raise ValidationError("all labels in a mixture must have the same length")
            w = float(w)
            if not 0.0 <= w <= 1.0:
                raise ValidationError(f"weight for {label!r} must lie in [0, 1], got {w}")
            merged[key] = merged.get(key, 0.0) + w
        if not merged:
            raise ValidationError("mixture needs at least one label")
        total = math.fsum(merged.values())
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"mixture weights must sum to 1, got {total!r}")
        object.__setattr__(self, "weights", dict(sorted(merged.items())))

    @property
    def n(self) -> int:
        return len(next(iter(self.weights)))

    @property
    def c1(self) -> float:
        """Weight on the all-identical state."""
        return self.weights.get(all_identical_label(self.n), 0.0)


@dataclass
class OutputDistribution:
    """Probabilities over every occupation vector of ``photon_count`` in ``mode_count`` modes."""

    probabilities: dict
    photon_count: int
    mode_count: int
    label: str | None = field(default=None, compare=False)

    def total(self) -> float:
        return math.fsum(self.probabilities.values())

    def patterns(self) -> list[tuple[int, ...]]:
        return sorted(self.probabilities)

    def to_table(self) -> str:
        """Two-column text: comma-joined pattern, probability (lexicographic order)."""
        lines = []
        for pat in self.patterns():
            lines.append(f"{','.join(map(str, pat))}\t{self.probabilities[pat]!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_table(cls, text: str) -> "OutputDistribution":
        probs = {}
        for raw in text.splitlines():
            raw = raw.strip()
            if not raw:
                continue
            pat, p = raw.split("\t")
            probs[tuple(int(x) for x in pat.split(","))] = float(p)
        first = next(iter(probs))
        return cls(probs, sum(first), len(first))


def _sub_occupation(modes, m):
    occ = [0] * m
    for mode in modes:
        occ[mode] += 1
    return tuple(occ)


def _group_distribution(U, modes, m):
    """Fock distribution of a set of mutually identical photons."""
    occ_in = _sub_occupation(modes, m)
    return {out: output_probability(U, occ_in, out) for out in all_occupations(len(modes), m)}


def _convolve(a, b):
    out = {}
    for pa, wa in a.items():
        for pb, wb in b.items():
            key = tuple(x + y for x, y in zip(pa, pb))
            out[key] = out.get(key, 0.0) + wa * wb
    return out


def _check_input(U, input_modes):
    U = np.asarray(U, dtype=complex)
    m = U.shape[0]
    input_modes = tuple(int(x) for x in input_modes)
    if len(set(input_modes)) != len(input_modes):
        raise ValidationError("expected at most one photon per input mode")
    if any(not 0 <= x < m for x in input_modes):
        raise ValidationError(f"input modes must lie in 0..{m - 1}")
    return U, m, input_modes


def extremal_distribution(U, input_modes, label: str) -> OutputDistribution:
    """Output distribution of an extremal state.

    ``input_modes[i]`` is the port photon ``i`` enters; ``label[i]`` is its
    group letter.
    """
    U, m, input_modes = _check_input(U, input_modes)
    if len(label) != len(input_modes):
        raise LabelError(f"label {label!r} has {len(label)} letters for {len(input_modes)} photons")
    label = canonical_label(label)
    groups = {}
    for mode, letter in zip(input_modes, label):
        groups.setdefault(letter, []).append(mode)
    dist = {(0,) * m: 1.0}
    for letter in sorted(groups):
        dist = _convolve(dist, _group_distribution(U, groups[letter], m))
    k = len(input_modes)
    full = {pat: dist.get(pat, 0.0) for pat in all_occupations(k, m)}
    return OutputDistribution(full, k, m, label=label)


def mixture_distribution(U, input_modes, mix: PhotonMixture) -> OutputDistribution:
    if not isinstance(mix, PhotonMixture):
        mix = PhotonMixture(mix)
    parts = [(w, extremal_distribution(U, input_modes, lab)) for lab, w in mix.weights.items()]
    k, m = parts[0][1].photon_count, parts[0][1].mode_count
    probs = {
        pat: math.fsum(w * d.probabilities[pat] for w, d in parts)
        for pat in parts[0][1].probabilities
    }
    return OutputDistribution(probs, k, m)


def is_bunched(pattern) -> bool:
    """Any mode holds two or more photons."""
    return any(c >= 2 for c in pattern)


def bunching_probability(dist: OutputDistribution) -> float:
    return math.fsum(p for pat, p in dist.probabilities.items() if is_bunched(pat))


def bs_conditional_weights(weights: Mapping, mode_count: int, bs_index: int) -> tuple[float, float]:
    """``(bunched, total)`` weight over events with exactly two photons at BS_k.

    Works for probabilities and raw counts alike.
    """
    a, b = bs_modes(mode_count // 2, bs_index)
    bunched = []
    total = []
    for pat, w in weights.items():
        if pat[a] + pat[b] == 2:
            total.append(w)
            if pat[a] == 2 or pat[b] == 2:
                bunched.append(w)
    return math.fsum(bunched), math.fsum(total)


def conditional_bs_bunching(dist: OutputDistribution, bs_index: int) -> float | None:
    """Bunching probability at beam splitter ``bs_index`` (1-based).

    Conditioned on the pair of output modes receiving exactly two photons.
    Returns ``None`` when that conditioning event has probability < 1e-12.
    """
    bunched, total = bs_conditional_weights(dist.probabilities, dist.mode_count, bs_index)
    if total < 1e-12:
        return None
    return bunched / total


def hom_bunching_from_overlap(x: float) -> float:
    """Two-photon HOM bunching probability ``(1 + x)/2`` for overlap ``x``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"overlap must lie in [0, 1], got {x}")
    return (1.0 + x) / 2.0


def scenario_label(n: int, j: int) -> str:
    """Label where only bottom photon ``j`` (1-based) differs from the reference."""
    if not 1 <= j <= n - 1:
        raise ParameterError(f"bottom photon index must be in 1..{n - 1}, got {j}")
    return "".join("B" if i == j else "A" for i in range(n))


def distinguishable_count(label: str) -> int:
    """Number of photons that differ from photon 0 (the reference)."""
    return sum(1 for ch in label[1:] if ch != label[0])


def parse_mixture(text: str, source=None) -> PhotonMixture:
    """Mixture file: one ``LABEL = weight`` line per extremal label."""
    from . import _kvfile
    from .errors import ParseError

    weights = {}
    for lineno, key, raw in _kvfile.read_pairs(text, source=source):
        try:
            weights[key] = float(raw)
        except ValueError:
            raise ParseError(f"weight must be a number, got {raw!r}", line=lineno, key=key, source=source)
    try:
        return PhotonMixture(weights)
    except (ValidationError, LabelError) as exc:
        raise ParseError(str(exc), source=source)


def load_mixture(path) -> PhotonMixture:
    from pathlib import Path

    path = Path(path)
    return parse_mixture(path.read_text(), source=path)
