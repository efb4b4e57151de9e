"""Reference computations that stay independent of the package internals.

``fock_oracle`` never touches a permanent: it expands the product of
creation operators literally, keeping each photon's group as an internal
degree of freedom, and only then traces that label out.
"""

import itertools
import math
from collections import defaultdict

import numpy as np


def fock_oracle(U, input_modes, label):
    """Mode-occupation distribution by explicit creation-operator expansion.

    Photon ``p`` enters ``input_modes[p]`` carrying internal state
    ``label[p]``.  Photons in different internal states never interfere
    because they populate different ``(mode, state)`` operators.
    """
    U = np.asarray(U, dtype=complex)
    m = U.shape[0]
    state = {(): 1.0 + 0j}
    for mode_in, tag in zip(input_modes, label):
        nxt = defaultdict(complex)
        for key, amp in state.items():
            for out in range(m):
                c = U[out, mode_in]
                if c == 0:
                    continue
                nxt[tuple(sorted(key + ((out, tag),)))] += amp * c
        state = nxt
    dist = defaultdict(float)
    for key, amp in state.items():
        norm = 1
        for _, group in itertools.groupby(key):
            norm *= math.factorial(len(list(group)))
        occ = [0] * m
        for out, _ in key:
            occ[out] += 1
        dist[tuple(occ)] += abs(amp) ** 2 * norm
    return dict(dist)


def total_variation(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def naive_bell(n):
    """Bell number by counting set partitions through itertools (no recurrence)."""
    count = 0
    for assignment in itertools.product(range(n), repeat=n):
        # canonical: first occurrences appear in increasing order
        seen = []
        ok = True
        for g in assignment:
            if g not in seen:
                if g != len(seen):
                    ok = False
                    break
                seen.append(g)
        count += ok
    return count


def ideal_three_photon_circuit():
    """The n = 3 witness circuit multiplied out by hand (modes 0,1 top; 2,3 bottom)."""
    h = 1 / math.sqrt(2)
    A = np.array([[h, h, 0, 0], [h, -h, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=complex)
    B = np.array([[h, 0, h, 0], [0, h, 0, h], [h, 0, -h, 0], [0, h, 0, -h]], dtype=complex)
    return B @ A


def sweep_measure_of_common(sets, grid=200_000, width=None):
    """Common-intersection measure estimated on a midpoint grid (coarse oracle)."""
    width = width or max(b for S in sets for _, b in S.intervals)
    xs = (np.arange(grid) + 0.5) * (width / grid)
    inside = np.ones(grid, dtype=bool)
    for S in sets:
        member = np.zeros(grid, dtype=bool)
        for a, b in S.intervals:
            member |= (xs >= a) & (xs < b)
        inside &= member
    return inside.sum() * width / grid
