"""Closed-form bounds on the optimal codebook size and the geometries that attain them.

All arithmetic is exact integer arithmetic; sizes of interest overflow
64 bits already for a few dozen Tx sensors.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .codebook import ParameterTuple, admissible, min_selection_size
from .geometry import ArrayGeometry, uniform


class BoundsError(ValueError):
    pass


def binomial(n: int, k: int) -> int:
    """``C(n, k)``, zero outside ``0 <= k <= n``."""
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def upper_bound(t: ParameterTuple) -> int:
    """``C(N_tx - 2, Q - 2)``: both edge Tx sensors are forced into every codeword."""
    if t.Q == 1 and t.N_tx > 1:
        warnings.warn("Q=1 cannot hold both edge sensors of a multi-sensor Tx array; bound is 0",
                      stacklevel=2)
        return 0
    if not admissible(t):
        raise BoundsError(f"inadmissible tuple {t}")
    if t.Q == 1:
        # N_tx == 1: the only codeword is the whole Tx array
        return 1
    return binomial(t.N_tx - 2, t.Q - 2)


def nested_L(t: ParameterTuple) -> Optional[int]:
    """``N_sigma / N_rx`` when it is an integer, else ``None``."""
    L, rem = divmod(t.N_sigma, t.N_rx)
    return L if rem == 0 else None


def lower_bound_nested(t: ParameterTuple) -> int:
    """``C(N_tx - L, Q - L)`` from the nested construction, for integer ``L``."""
    if not admissible(t):
        raise BoundsError(f"inadmissible tuple {t}")
    L = nested_L(t)
    if L is None:
        raise BoundsError("nested lower bound requires integer L = N_sigma / N_rx")
    return binomial(t.N_tx - L, t.Q - L)


def ula_conditions(t: ParameterTuple) -> bool:
    return t.N_sigma == t.N_tx + t.N_rx - 1 and t.N_tx <= t.N_rx + 1 and 2 <= t.Q <= t.N_tx


def exact_size_ula(t: ParameterTuple) -> int:
    if not ula_conditions(t):
        raise BoundsError("ULA exactness conditions not met "
                          "(need N_sigma = N_tx + N_rx - 1, N_tx <= N_rx + 1, 2 <= Q <= N_tx)")
    return binomial(t.N_tx - 2, t.Q - 2)


def exact_size_nonredundant(t: ParameterTuple) -> int:
    if t.N_sigma != t.N_tx * t.N_rx:
        raise BoundsError("not a nonredundant tuple (need N_sigma = N_tx * N_rx)")
    if t.Q != t.N_tx:
        raise BoundsError("nonredundant arrays admit only full selection (Q = N_tx)")
    return 1


def exact_size(t: ParameterTuple) -> Optional[int]:
    """The exact optimum when a closed form is known, else ``None``."""
    if not admissible(t):
        return None
    if t.N_sigma == t.N_tx * t.N_rx:
        return exact_size_nonredundant(t)
    if ula_conditions(t):
        return exact_size_ula(t)
    return None


@dataclass(frozen=True)
class BoundsReport:
    tuple: ParameterTuple
    admissible: bool
    L: int
    upper: Optional[int]
    lower: Optional[int]
    exact: Optional[int]

    def to_dict(self) -> dict:
        def big(v):
            return None if v is None else str(v)

        return {
            **self.tuple.as_dict(),
            "admissible": self.admissible,
            "L": self.L,
            "upper": big(self.upper),
            "lower": big(self.lower) if self.lower is not None else "not-applicable",
            "exact": big(self.exact) if self.exact is not None else "unknown",
        }


def bounds_report(t: ParameterTuple) -> BoundsReport:
    ok = admissible(t)
    L = min_selection_size(t.N_sigma, t.N_rx)
    if not ok:
        return BoundsReport(t, False, L, None, None, None)
    lower = lower_bound_nested(t) if nested_L(t) is not None else None
    return BoundsReport(t, True, L, upper_bound(t), lower, exact_size(t))


def build_ula_pair(N_tx: int, N_rx: int) -> tuple[ArrayGeometry, ArrayGeometry]:
    return uniform(N_tx), uniform(N_rx)


def build_nonredundant_pair(N_tx: int, N_rx: int) -> tuple[ArrayGeometry, ArrayGeometry]:
    """Tx at ``N_rx * {0..N_tx-1}``, Rx a ULA; all ``N_tx * N_rx`` sums distinct."""
    return uniform(N_tx, spacing=N_rx), uniform(N_rx)


def build_nested_pair(N_tx: int, N_rx: int, N_sigma: int, rng=None
                      ) -> tuple[ArrayGeometry, ArrayGeometry, ArrayGeometry]:
    """Tx/Rx pair whose codewords only need to contain a dilated-ULA core.

    Returns ``(tx, rx, core)`` where ``core = N_rx * {0..L-1}``. The filler
    sensors are the lexicographically smallest ``N_tx - L`` free positions in
    ``[0, N_rx (L-1)]``; pass ``rng`` (a seed or ``numpy.random.Generator``)
    to draw them at random instead.
    """
    L, rem = divmod(N_sigma, N_rx)
    if rem:
        raise BoundsError("nested construction requires integer L = N_sigma / N_rx, "
                          f"got {N_sigma}/{N_rx}")
    if L > N_tx:
        raise BoundsError(f"L = {L} exceeds N_tx = {N_tx}")
    if N_sigma < N_tx + N_rx - 1:
        raise BoundsError(f"N_sigma = {N_sigma} is below N_tx + N_rx - 1 = {N_tx + N_rx - 1}")
    core = uniform(L, spacing=N_rx)
    free = [p for p in range(N_rx * (L - 1) + 1) if p not in core]
    n_fill = N_tx - L
    if rng is None:
        fill = free[:n_fill]
    else:
        rng = np.random.default_rng(rng)
        fill = sorted(int(p) for p in rng.choice(free, size=n_fill, replace=False))
    tx = ArrayGeometry(tuple(sorted(set(core.positions) | set(fill))))
    return tx, uniform(N_rx), core
