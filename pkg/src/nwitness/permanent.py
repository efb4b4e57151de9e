"""Matrix permanents and Fock-basis transition probabilities.

:func:`permanent_ryser` is Ryser's inclusion-exclusion formula visited in
Gray-code order, so each step adds or removes one column from the running
row sums (``O(2^k k)`` work).  Two interchangeable kernels exist:

* ``_ryser_numba`` - a sequential ``@njit`` loop with Kahan-compensated
  accumulation of the real and imaginary parts;
* ``_ryser_numpy`` - the same Gray-code walk processed in fixed-size
  chunks: each chunk starts from directly computed row sums and applies the
  single-column updates with a cumulative sum; chunk totals are combined
  with :func:`math.fsum`.

The active one is chosen at import time (see :mod:`nwitness._accel`).
Chunk boundaries are fixed, so results are bit-stable across runs.
"""

from __future__ import annotations

import itertools
import math
import os

import numpy as np

from ._accel import BACKEND, HAVE_NUMBA, njit
from .errors import DimensionError, EventError, SizeLimitError

MAX_RYSER_DIM = int(os.environ.get("NWITNESS_RYSER_MAX_DIM", "24"))
MAX_NAIVE_DIM = 9
NUMPY_CHUNK = 1 << 12


def _as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"permanent needs a square matrix, got shape {M.shape}")
    if M.shape[0] < 1:
        raise DimensionError("permanent needs at least a 1x1 matrix")
    return M


def _ryser_numpy(M: np.ndarray) -> complex:
    k = M.shape[0]
    total = 1 << k
    cols = M.T  # cols[j] is column j as a row vector
    re_parts = []
    im_parts = []
    bit_weights = 1 << np.arange(k, dtype=np.int64)
    for start in range(1, total, NUMPY_CHUNK):
        stop = min(start + NUMPY_CHUNK, total)
        idx = np.arange(start, stop, dtype=np.int64)
        gray = idx ^ (idx >> 1)
        bits = (gray[:, None] & bit_weights[None, :]) != 0
        # row sums at the first code of the chunk, computed directly
        base = cols[bits[0]].sum(axis=0)
        if stop - start > 1:
            step = idx[1:]
            flipped = np.log2(step & -step).astype(np.int64)
            added = bits[np.arange(1, stop - start), flipped]
            delta = np.where(added[:, None], cols[flipped], -cols[flipped])
            rowsums = np.vstack([base[None, :], base[None, :] + np.cumsum(delta, axis=0)])
        else:
            rowsums = base[None, :]
        terms = np.prod(rowsums, axis=1)
        parity = bits.sum(axis=1) & 1
        terms = np.where(parity == 1, -terms, terms)
        re_parts.append(math.fsum(terms.real))
        im_parts.append(math.fsum(terms.imag))
    sign = -1.0 if k % 2 else 1.0
    return sign * complex(math.fsum(re_parts), math.fsum(im_parts))


def _ryser_loop(M):
    k = M.shape[0]
    rowsums = np.zeros(k, dtype=np.complex128)
    gray = 0
    s_re = 0.0
    c_re = 0.0
    s_im = 0.0
    c_im = 0.0
    sign = 1.0
    for i in range(1, 1 << k):
        # lowest set bit of i is the gray-code bit that flips
        j = 0
        while not (i >> j) & 1:
            j += 1
        gray ^= 1 << j
        if (gray >> j) & 1:
            for row in range(k):
                rowsums[row] += M[row, j]
        else:
            for row in range(k):
                rowsums[row] -= M[row, j]
        sign = -sign
        prod = 1.0 + 0.0j
        for row in range(k):
            prod *= rowsums[row]
        term = sign * prod
        y = term.real - c_re
        t = s_re + y
        c_re = (t - s_re) - y
        s_re = t
        y = term.imag - c_im
        t = s_im + y
        c_im = (t - s_im) - y
        s_im = t
    # sign here tracks (-1)^|S|
    out = complex(s_re, s_im)
    if k % 2:
        out = -out
    return out


if HAVE_NUMBA:
    _ryser_numba = njit(cache=True, nogil=True)(_ryser_loop)
else:
    _ryser_numba = None


def permanent_ryser(M) -> complex:
    """Permanent by Ryser's formula; dimension capped at ``MAX_RYSER_DIM``."""
    M = _as_square(M)
    k = M.shape[0]
    if k > MAX_RYSER_DIM:
        raise SizeLimitError(f"Ryser permanent is capped at {MAX_RYSER_DIM}x{MAX_RYSER_DIM}, got {k}x{k}")
    if k == 1:
        return complex(M[0, 0])
    if HAVE_NUMBA:
        return complex(_ryser_numba(np.ascontiguousarray(M)))
    return _ryser_numpy(M)


def permanent_naive(M) -> complex:
    """Permanent as the plain sum over all permutations (reference oracle)."""
    M = _as_square(M)
    k = M.shape[0]
    if k > MAX_NAIVE_DIM:
        raise SizeLimitError(f"naive permanent is capped at {MAX_NAIVE_DIM}x{MAX_NAIVE_DIM}, got {k}x{k}")
    perms = np.array(list(itertools.permutations(range(k))), dtype=np.intp)
    products = np.prod(M[np.arange(k)[None, :], perms], axis=1)
    return complex(math.fsum(products.real), math.fsum(products.imag))


def all_occupations(photons: int, modes: int) -> list[tuple[int, ...]]:
    """Every occupation vector of ``photons`` in ``modes``, lexicographically ascending."""
    out = []
    for bars in itertools.combinations(range(photons + modes - 1), modes - 1):
        prev = -1
        occ = []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(photons + modes - 2 - prev)
        out.append(tuple(occ))
    out.sort()
    return out


def _expand(occ) -> list[int]:
    return [mode for mode, count in enumerate(occ) for _ in range(count)]


def output_probability(U, input_occ, output_occ) -> float:
    """``|Perm(U_ST)|^2 / (prod s_i! prod t_j!)`` for occupations ``s`` -> ``t``.

    Columns of ``U`` are input modes, rows are output modes.
    """
    U = np.asarray(U, dtype=complex)
    m = U.shape[0]
    if U.ndim != 2 or U.shape[1] != m:
        raise DimensionError(f"interferometer must be square, got shape {U.shape}")
    if len(input_occ) != m or len(output_occ) != m:
        raise EventError(f"occupation vectors must have {m} entries")
    if any(c < 0 for c in input_occ) or any(c < 0 for c in output_occ):
        raise EventError("occupations must be non-negative")
    k = sum(input_occ)
    if sum(output_occ) != k:
        raise EventError(f"photon number mismatch: {k} in, {sum(output_occ)} out")
    if k == 0:
        return 1.0
    sub = U[np.ix_(_expand(output_occ), _expand(input_occ))]
    norm = 1.0
    for c in itertools.chain(input_occ, output_occ):
        norm *= math.factorial(c)
    return abs(permanent_ryser(sub)) ** 2 / norm


__all__ = [
    "BACKEND",
    "MAX_RYSER_DIM",
    "all_occupations",
    "output_probability",
    "permanent_naive",
    "permanent_ryser",
]
