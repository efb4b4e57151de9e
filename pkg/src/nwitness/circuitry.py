"""Unitaries of the witness interferometer.

Mode layout (zero-based): modes ``0..d-1`` carry layer A (the QFT rail),
modes ``d..2d-1`` the bottom photons, with ``d = n - 1``.  Beam splitter
``k`` (numbered from 1, as on the bench) couples modes ``k-1`` and
``d+k-1``.  The reference photon enters mode 0 and bottom photon ``j``
enters mode ``d+j-1``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kvfile
from .errors import DimensionError, ParameterError, ParseError, ValidationError

UNITARY_TOL = 1e-12
IDEAL = "ideal"


def check_unitary(M, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max |M M^dagger - I| <= tol``."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"unitarity check needs a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        return False
    dev = M @ M.conj().T - np.eye(M.shape[0])
    return float(np.max(np.abs(dev))) <= tol


def build_qft(d: int) -> np.ndarray:
    """Discrete Fourier transform on ``d`` modes, ``exp(+2 pi i jk/d)/sqrt(d)``."""
    if int(d) != d or d < 1:
        raise DimensionError(f"QFT dimension must be a positive integer, got {d!r}")
    d = int(d)
    jk = np.outer(np.arange(d), np.arange(d)) % d
    return np.exp(2j * np.pi * jk / d) / math.sqrt(d)


def build_beam_splitter(R: float) -> np.ndarray:
    """Real beam splitter ``[[r, t], [t, -r]]`` with ``r = sqrt(R)``, ``t = sqrt(1-R)``."""
    R = float(R)
    if not 0.0 <= R <= 1.0:
        raise ParameterError(f"reflectivity must lie in [0, 1], got {R}")
    r = math.sqrt(R)
    t = math.sqrt(1.0 - R)
    return np.array([[r, t], [t, -r]], dtype=complex)


@dataclass(frozen=True)
class CircuitConfig:
    """Witness circuit description.

    ``layer_a`` is either the string ``"ideal"`` (QFT on ``n-1`` modes) or an
    explicit ``(n-1) x (n-1)`` unitary.
    """

    n: int
    layer_a: object = IDEAL
    layer_b_reflectivities: tuple = field(default=None)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"photon number n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        d = self.n - 1
        refl = self.layer_b_reflectivities
        refl = (0.5,) * d if refl is None else tuple(float(R) for R in refl)
        if len(refl) != d:
            raise ValidationError(
                f"need n-1 = {d} layer-B reflectivities, got {len(refl)}"
            )
        for R in refl:
            if not 0.0 <= R <= 1.0:
                raise ValidationError(f"reflectivity must lie in [0, 1], got {R}")
        object.__setattr__(self, "layer_b_reflectivities", refl)

        if isinstance(self.layer_a, str):
            if self.layer_a != IDEAL:
                raise ValidationError(f"layer_a must be 'ideal' or a matrix, got {self.layer_a!r}")
        else:
            Q = np.array(self.layer_a, dtype=complex)
            if Q.shape != (d, d):
                raise ValidationError(f"layer_a matrix must be {d}x{d}, got shape {Q.shape}")
            if not check_unitary(Q):
                raise ValidationError("layer_a matrix is not unitary within 1e-12")
            Q.setflags(write=False)
            object.__setattr__(self, "layer_a", Q)

    @property
    def d(self) -> int:
        return self.n - 1

    @property
    def mode_count(self) -> int:
        return 2 * self.d

    @property
    def is_ideal_qft(self) -> bool:
        return isinstance(self.layer_a, str)

    def layer_a_unitary(self) -> np.ndarray:
        """The ``(n-1)``-mode layer-A matrix (QFT or the explicit one)."""
        if self.is_ideal_qft:
            return build_qft(self.d)
        return np.array(self.layer_a)

    def __eq__(self, other):
        if not isinstance(other, CircuitConfig):
            return NotImplemented
        if self.n != other.n or self.layer_b_reflectivities != other.layer_b_reflectivities:
            return False
        if self.is_ideal_qft or other.is_ideal_qft:
            return self.is_ideal_qft and other.is_ideal_qft
        return bool(np.array_equal(self.layer_a, other.layer_a))

    def __hash__(self):
        return hash((self.n, self.layer_b_reflectivities, self.is_ideal_qft))


def layer_a_matrix(cfg: CircuitConfig) -> np.ndarray:
    """Layer A embedded in the full ``2(n-1)``-mode space."""
    d = cfg.d
    full = np.eye(2 * d, dtype=complex)
    full[:d, :d] = cfg.layer_a_unitary()
    return full


def layer_b_matrix(cfg: CircuitConfig) -> np.ndarray:
    """All layer-B beam splitters acting in parallel."""
    d = cfg.d
    full = np.zeros((2 * d, 2 * d), dtype=complex)
    for k, R in enumerate(cfg.layer_b_reflectivities):
        bs = build_beam_splitter(R)
        idx = [k, d + k]
        full[np.ix_(idx, idx)] = bs
    return full


def build_witness_circuit(cfg: CircuitConfig) -> np.ndarray:
    U = layer_b_matrix(cfg) @ layer_a_matrix(cfg)
    if not check_unitary(U):
        raise ValidationError("assembled witness circuit is not unitary within 1e-12")
    return U


def bs_modes(d: int, k: int) -> tuple[int, int]:
    """Zero-based output modes of beam splitter ``k`` (1-based) in a ``2d``-mode circuit."""
    if not 1 <= k <= d:
        raise ParameterError(f"beam splitter index must be in 1..{d}, got {k}")
    return k - 1, d + k - 1


def canonical_input(n: int) -> tuple[int, ...]:
    """Input mode of each photon: reference first, then bottom photons 1..n-1."""
    d = n - 1
    return (0,) + tuple(d + j for j in range(d))


def reference_input(n: int, r: int) -> tuple[int, ...]:
    """Input modes when photon ``r`` (zero-based) plays the reference.

    The hardware is unchanged; only the assignment of photons to ports moves.
    The remaining photons keep their relative order on the bottom ports.
    """
    if not 0 <= r < n:
        raise ParameterError(f"reference photon index must be in 0..{n - 1}, got {r}")
    d = n - 1
    modes = [0] * n
    modes[r] = 0
    bottom = [p for p in range(n) if p != r]
    for j, p in enumerate(bottom):
        modes[p] = d + j
    return tuple(modes)


def presentation_pattern(pattern, d: int) -> tuple[int, ...]:
    """Reorder an occupation vector so BS_k owns positions ``2k-2, 2k-1``."""
    out = []
    for k in range(1, d + 1):
        a, b = bs_modes(d, k)
        out.extend((pattern[a], pattern[b]))
    return tuple(out)


# ---------------------------------------------------------------------------
# config files

_BS_FORM = re.compile(r"^bs\(\s*([^)]+?)\s*\)$")


def _parse_matrix(raw, lineno, source):
    try:
        rows = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid matrix literal ({exc.msg})", line=lineno, key="layer_a", source=source)
    try:
        return np.array([[complex(float(re_), float(im)) for re_, im in row] for row in rows])
    except (TypeError, ValueError):
        raise ParseError(
            "matrix rows must be lists of [re, im] pairs", line=lineno, key="layer_a", source=source
        )


def parse_config(text: str, source=None) -> CircuitConfig:
    """Parse a circuit config.

    Recognised keys::

        n = 3
        layer_a = ideal                      # or bs(0.49) when n = 3
        layer_a = [[[0.7, 0], [0.71, 0]], [[0.71, 0], [-0.7, 0]]]
        layer_b_reflectivities = [0.45, 0.45]

    ``layer_b_reflectivities`` defaults to all 0.5.
    """
    values = {}
    lines = {}
    for lineno, key, raw in _kvfile.read_pairs(text, source=source):
        lines[key] = lineno
        if key == "n":
            try:
                values["n"] = int(raw)
            except ValueError:
                raise ParseError(f"expected an integer, got {raw!r}", line=lineno, key=key, source=source)
        elif key == "layer_a":
            m = _BS_FORM.match(raw)
            if raw == IDEAL:
                values["layer_a"] = IDEAL
            elif m:
                try:
                    values["layer_a"] = build_beam_splitter(float(m.group(1)))
                except (ValueError, ParameterError) as exc:
                    raise ParseError(str(exc), line=lineno, key=key, source=source)
            else:
                values["layer_a"] = _parse_matrix(raw, lineno, source)
        elif key == "layer_b_reflectivities":
            try:
                refl = json.loads(raw)
                values["layer_b_reflectivities"] = [float(x) for x in refl]
            except (json.JSONDecodeError, TypeError, ValueError):
                raise ParseError("expected a list of numbers", line=lineno, key=key, source=source)
        else:
            raise ParseError("unknown key", line=lineno, key=key, source=source)
    if "n" not in values:
        raise ParseError("missing required key", key="n", source=source)
    try:
        return CircuitConfig(**values)
    except ValidationError as exc:
        msg = str(exc)
        key = "layer_b_reflectivities" if "reflectivit" in msg else "layer_a" if "layer_a" in msg else "n"
        raise ParseError(msg, line=lines.get(key), key=key, source=source)


def load_config(path) -> CircuitConfig:
    path = Path(path)
    return parse_config(path.read_text(), source=path)


def format_config(cfg: CircuitConfig) -> str:
    if cfg.is_ideal_qft:
        layer_a = IDEAL
    else:
        layer_a = json.dumps([[[z.real, z.imag] for z in row] for row in cfg.layer_a.tolist()])
    refl = json.dumps(list(cfg.layer_b_reflectivities))
    return f"n = {cfg.n}\nlayer_a = {layer_a}\nlayer_b_reflectivities = {refl}\n"
