"""Exhaustive search for the largest sum-set-constrained codebook.

Every Tx/Rx pair is enumerated in canonical position (both arrays start at
0, apertures add up to ``N_sigma - 1``), so translations never repeat.
Mirror images are skipped unless reflection dedup is turned off.
"""
from __future__ import annotations

import enum
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .bounds import BoundsReport, bounds_report, lower_bound_nested, nested_L, upper_bound
from .codebook import Codebook, ParameterTuple, admissible, covering_subsets, enumerate_constrained
from .geometry import ArrayGeometry

log = logging.getLogger(__name__)

DEFAULT_CAP = 24
DEFAULT_WITNESSES = 16


class SearchError(ValueError):
    pass


class BoundCheck(str, enum.Enum):
    WITHIN = "within-bounds"
    UPPER_VIOLATED = "upper-violated"
    LOWER_VIOLATED = "lower-violated"


@dataclass(frozen=True)
class SearchOptions:
    cap: int = DEFAULT_CAP
    witnesses: int = DEFAULT_WITNESSES
    reflect_dedup: bool = True
    threads: int = 1


@dataclass(frozen=True)
class Witness:
    tx: ArrayGeometry
    rx: ArrayGeometry
    codebook: Codebook

    def to_dict(self) -> dict:
        return {
            "tx": list(self.tx.positions),
            "rx": list(self.rx.positions),
            "codewords": [list(w.positions) for w in self.codebook],
        }


@dataclass
class SearchResult:
    tuple: ParameterTuple
    optimum: int
    witnesses: list[Witness]
    witness_count: int
    explored: int
    bound_check: Optional[BoundCheck] = None
    counterexample: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            **self.tuple.as_dict(),
            "optimum": str(self.optimum),
            "explored": self.explored,
            "witness_count": self.witness_count,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "bound_check": self.bound_check.value if self.bound_check else None,
            "counterexample": self.counterexample,
        }


def _edge_pinned(n: int, aperture: int):
    """Masks of all n-sensor arrays spanning exactly ``[0, aperture]``."""
    if n == 1:
        if aperture == 0:
            yield 1
        return
    if aperture < n - 1:
        return
    base = 1 | (1 << aperture)
    for inner in combinations(range(1, aperture), n - 2):
        m = base
        for p in inner:
            m |= 1 << p
        yield m


def _positions(mask: int) -> tuple[int, ...]:
    return ArrayGeometry.from_mask(mask).positions


def _reflect(mask: int, aperture: int) -> int:
    out = 0
    for p in _positions(mask):
        out |= 1 << (aperture - p)
    return out


def _search_split(t: ParameterTuple, a_tx: int, reflect_dedup: bool, max_witnesses: int):
    """Best codebook size over all pairs with Tx aperture ``a_tx``.

    Returns ``(explored, best, witness_pairs, witness_count)``; witness pairs
    are position tuples, sorted, at most ``max_witnesses`` of them.
    """
    a_rx = t.N_sigma - 1 - a_tx
    full = (1 << t.N_sigma) - 1
    rx_masks = list(_edge_pinned(t.N_rx, a_rx))
    rx_pos = [_positions(m) for m in rx_masks]
    explored = 0
    best = -1
    found: list[tuple] = []
    count = 0
    for txm in _edge_pinned(t.N_tx, a_tx):
        tx_pos = _positions(txm)
        tx_refl = _reflect(txm, a_tx) if reflect_dedup else None
        for rxm, rp in zip(rx_masks, rx_pos):
            if reflect_dedup:
                rx_refl = _reflect(rxm, a_rx)
                # keep the lexicographically smaller member of each mirror pair
                if (_positions(tx_refl), _positions(rx_refl)) < (tx_pos, rp):
                    continue
            explored += 1
            acc = 0
            for r in rp:
                acc |= txm << r
            if acc != full:
                continue
            size = sum(1 for _ in covering_subsets(t.Q, tx_pos, rxm, full))
            if size > best:
                best, found, count = size, [], 0
            if size == best:
                count += 1
                if len(found) < max_witnesses:
                    found.append((tx_pos, rp))
    return explored, best, found, count


def _splits(t: ParameterTuple) -> list[int]:
    """Tx apertures compatible with both array sizes."""
    def fits(n, aperture):
        return aperture == 0 if n == 1 else aperture >= n - 1

    return [a for a in range(t.N_sigma) if fits(t.N_tx, a) and fits(t.N_rx, t.N_sigma - 1 - a)]


def _threads(requested: Optional[int]) -> int:
    if requested:
        return max(1, requested)
    return max(1, int(os.environ.get("COARRAY_CODEBOOK_THREADS", "1")))


def optimal_codebook_search(t: ParameterTuple, options: SearchOptions = SearchOptions()) -> SearchResult:
    """Exact maximum of ``|C^c(Q, tx, rx)|`` over all pairs with ``tx + rx = {0..N_sigma-1}``."""
    if not admissible(t):
        raise SearchError(f"inadmissible tuple {t}")
    if t.N_sigma > options.cap:
        raise SearchError(f"search space too large: N_sigma = {t.N_sigma} exceeds cap {options.cap}")
    splits = _splits(t)
    args = [(t, a, options.reflect_dedup, options.witnesses) for a in splits]
    workers = _threads(options.threads)
    if workers > 1 and len(splits) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(splits))) as pool:
            parts = list(pool.map(_search_split, *zip(*args)))
    else:
        parts = [_search_split(*a) for a in args]

    explored = sum(p[0] for p in parts)
    optimum = max((p[1] for p in parts), default=-1)
    if optimum < 0:
        # no pair reaches a contiguous sum co-array
        optimum, pairs, count = 0, [], 0
    else:
        pairs = sorted(pair for p in parts if p[1] == optimum for pair in p[2])
        count = sum(p[3] for p in parts if p[1] == optimum)
    witnesses = []
    for tx_pos, rx_pos in pairs[: options.witnesses]:
        tx, rx = ArrayGeometry(tx_pos), ArrayGeometry(rx_pos)
        witnesses.append(Witness(tx, rx, enumerate_constrained(t.Q, tx, rx)))
    result = SearchResult(t, optimum, witnesses, count, explored)
    result.bound_check = verify_bounds(t, result)
    if result.bound_check is not BoundCheck.WITHIN:
        result.counterexample = counterexample(t, result)
    return result


def verify_bounds(t: ParameterTuple, r: SearchResult) -> BoundCheck:
    upper = upper_bound(t)
    if r.optimum > upper:
        log.warning("upper bound violated: %s", counterexample(t, r))
        return BoundCheck.UPPER_VIOLATED
    if nested_L(t) is not None and r.optimum < lower_bound_nested(t):
        log.warning("lower bound violated: %s", counterexample(t, r))
        return BoundCheck.LOWER_VIOLATED
    return BoundCheck.WITHIN


def counterexample(t: ParameterTuple, r: SearchResult) -> dict:
    """The tuple, the bounds, and the first witness, for violation reports."""
    rep = bounds_report(t)
    doc = {"tuple": t.as_dict(), "optimum": str(r.optimum), "bounds": rep.to_dict()}
    if r.witnesses:
        doc["witness"] = r.witnesses[0].to_dict()
    return doc


@dataclass
class SweepEntry:
    tuple: ParameterTuple
    report: Optional[BoundsReport] = None
    result: Optional[SearchResult] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        doc = {"tuple": self.tuple.as_dict()}
        if self.error is not None:
            doc["error"] = self.error
        else:
            doc["bounds"] = self.report.to_dict()
            doc["search"] = self.result.to_dict()
        return doc


def sweep(tuples, options: SearchOptions = SearchOptions()) -> list[SweepEntry]:
    """Search each tuple in order; failures are recorded per entry."""
    out = []
    for t in tuples:
        try:
            out.append(SweepEntry(t, bounds_report(t), optimal_codebook_search(t, options)))
        except (SearchError, ValueError) as exc:
            out.append(SweepEntry(t, error=str(exc)))
    return out
