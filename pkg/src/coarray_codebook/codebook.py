"""Unconstrained and sum-set-constrained codebooks of Tx subarrays."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .geometry import ArrayGeometry, GeometryError, sum_mask


class CodebookError(ValueError):
    pass


@dataclass(frozen=True)
class ParameterTuple:
    """A problem instance ``(Q, N_tx, N_rx, N_sigma)``."""

    Q: int
    N_tx: int
    N_rx: int
    N_sigma: int

    def __post_init__(self):
        for name in ("Q", "N_tx", "N_rx", "N_sigma"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    @property
    def L(self) -> int:
        return min_selection_size(self.N_sigma, self.N_rx)

    @property
    def admissible(self) -> bool:
        return admissible(self)

    def as_dict(self) -> dict:
        return {"Q": self.Q, "N_tx": self.N_tx, "N_rx": self.N_rx, "N_sigma": self.N_sigma}


def min_selection_size(N_sigma: int, N_rx: int) -> int:
    """Smallest Q able to cover ``N_sigma`` sums with ``N_rx`` receivers."""
    return -(-N_sigma // N_rx)


def admissible(t: ParameterTuple) -> bool:
    L = min_selection_size(t.N_sigma, t.N_rx)
    return (t.N_tx + t.N_rx - 1 <= t.N_sigma <= t.Q * t.N_rx) and (L <= t.Q <= t.N_tx)


class CodebookKind(str, enum.Enum):
    UNCONSTRAINED = "unconstrained"
    CONSTRAINED = "constrained"


@dataclass(frozen=True)
class Codebook:
    """An ordered set of Q-sensor Tx subarrays.

    Codewords stay in ``tx_array`` coordinates and are sorted
    lexicographically; a codeword's position in ``codewords`` is its
    modulation index.
    """

    tx_array: ArrayGeometry
    rx_array: Optional[ArrayGeometry]
    Q: int
    codewords: tuple[ArrayGeometry, ...]
    kind: CodebookKind

    def __post_init__(self):
        words = tuple(self.codewords)
        object.__setattr__(self, "codewords", words)
        if any(len(w) != self.Q for w in words):
            raise CodebookError("every codeword must hold exactly Q sensors")
        if any(b <= a for a, b in zip(words, words[1:])):
            raise CodebookError("codewords must be distinct and sorted lexicographically")
        if any(not w.issubset(self.tx_array) for w in words):
            raise CodebookError("codeword is not a subset of the Tx array")
        if self.kind is CodebookKind.CONSTRAINED:
            if self.rx_array is None:
                raise CodebookError("a constrained codebook needs an Rx array")
            full = sum_mask(self.tx_array.mask, self.rx_array)
            if any(sum_mask(w.mask, self.rx_array) != full for w in words):
                raise CodebookError("codeword sum set differs from the sum co-array")

    def __len__(self) -> int:
        return len(self.codewords)

    def __iter__(self):
        return iter(self.codewords)

    def __getitem__(self, i: int) -> ArrayGeometry:
        return self.codewords[i]

    def index(self, word: ArrayGeometry) -> int:
        return self.codewords.index(word)

    def to_dict(self) -> dict:
        return {
            "tx": list(self.tx_array.positions),
            "rx": list(self.rx_array.positions) if self.rx_array is not None else None,
            "Q": self.Q,
            "kind": self.kind.value,
            "codewords": [list(w.positions) for w in self.codewords],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "Codebook":
        rx = doc.get("rx")
        return cls(
            tx_array=ArrayGeometry(tuple(doc["tx"])),
            rx_array=ArrayGeometry(tuple(rx)) if rx is not None else None,
            Q=int(doc["Q"]),
            codewords=tuple(ArrayGeometry(tuple(w)) for w in doc["codewords"]),
            kind=CodebookKind(doc["kind"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "Codebook":
        return cls.from_dict(json.loads(text))


def _check_q(Q: int, tx: ArrayGeometry) -> None:
    if Q < 1:
        raise CodebookError("Q must be positive")
    if Q > len(tx):
        raise CodebookError("Q exceeds array size")


def enumerate_unconstrained(Q: int, tx: ArrayGeometry, rx: Optional[ArrayGeometry] = None) -> Codebook:
    """All ``C(|tx|, Q)`` subarrays, in lexicographic order."""
    _check_q(Q, tx)
    words = tuple(ArrayGeometry(c) for c in combinations(tx.positions, Q))
    return Codebook(tx, rx, Q, words, CodebookKind.UNCONSTRAINED)


def covering_subsets(Q: int, positions: tuple[int, ...], rx_mask: int, full: int):
    """Yield Q-subsets of ``positions`` whose shifted copies of ``rx_mask`` cover ``full``.

    Depth-first over the lexicographic combination order. A branch is cut as
    soon as the chosen sensors plus every later candidate cannot reach
    ``full``. Skipping an edge sensor loses an extremal sum, so subsets
    missing either edge are never expanded; the same test drops any other
    sensor that is the only source of some sum.
    """
    n = len(positions)
    if not 1 <= Q <= n:
        return
    cover = [rx_mask << p for p in positions]
    reach = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        reach[i] = reach[i + 1] | cover[i]
    per_sensor = bin(rx_mask).count("1")
    chosen: list[int] = []

    def extend(start: int, covered: int):
        left = Q - len(chosen)
        if left == 0:
            if covered == full:
                yield tuple(positions[i] for i in chosen)
            return
        if bin(full & ~covered).count("1") > left * per_sensor:
            return
        for j in range(start, n - left + 1):
            if covered | reach[j] != full:
                break
            chosen.append(j)
            yield from extend(j + 1, covered | cover[j])
            chosen.pop()

    yield from extend(0, 0)


def constrained_subsets(Q: int, tx: ArrayGeometry, rx: ArrayGeometry):
    """Position tuples of the valid codewords, in lexicographic order."""
    yield from covering_subsets(Q, tx.positions, rx.mask, sum_mask(tx.mask, rx))


def count_constrained(Q: int, tx: ArrayGeometry, rx: ArrayGeometry) -> int:
    return sum(1 for _ in constrained_subsets(Q, tx, rx))


def enumerate_constrained(Q: int, tx: ArrayGeometry, rx: ArrayGeometry) -> Codebook:
    """Q-subsets of ``tx`` whose sum set with ``rx`` equals that of ``tx``."""
    _check_q(Q, tx)
    words = tuple(ArrayGeometry(w) for w in constrained_subsets(Q, tx, rx))
    return Codebook(tx, rx, Q, words, CodebookKind.CONSTRAINED)


def bits_per_codeword(c: Codebook | int) -> int:
    """``floor(log2 |c|)``; accepts a codebook or its size."""
    size = c if isinstance(c, int) else len(c)
    if size < 1:
        raise CodebookError("empty codebook")
    return size.bit_length() - 1


__all__ = [
    "Codebook",
    "CodebookError",
    "CodebookKind",
    "GeometryError",
    "ParameterTuple",
    "admissible",
    "bits_per_codeword",
    "constrained_subsets",
    "covering_subsets",
    "count_constrained",
    "enumerate_constrained",
    "enumerate_unconstrained",
    "min_selection_size",
]
