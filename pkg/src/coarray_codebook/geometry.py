"""Integer-set algebra for linear array geometries.

Sensor positions are nonnegative integers in units of half carrier
wavelengths. Every geometry carries a bitset mirror (a Python ``int`` with
bit ``p`` set for each position ``p``) so that sum sets reduce to OR-ing
shifted copies of one operand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

MAX_APERTURE = 2 ** 16


class GeometryError(ValueError):
    """Raised for malformed or out-of-range geometries."""


def _mask_of(positions: Iterable[int]) -> int:
    mask = 0
    for p in positions:
        mask |= 1 << p
    return mask


def _positions_of(mask: int) -> tuple[int, ...]:
    bits = bin(mask)[:1:-1]
    return tuple(i for i, c in enumerate(bits) if c == "1")


@dataclass(frozen=True, order=True)
class ArrayGeometry:
    """A finite set of sensor positions, stored sorted ascending.

    Instances compare lexicographically by their position tuple. The
    constructor validates but does not translate; use :func:`canonicalize`
    to pin the minimum at zero.
    """

    positions: tuple[int, ...]
    mask: int = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        if not pos:
            raise GeometryError("empty geometry")
        if any(b <= a for a, b in zip(pos, pos[1:])):
            raise GeometryError(f"positions must be strictly increasing: {pos}")
        if pos[0] < 0:
            raise GeometryError(f"positions must be nonnegative: {pos}")
        if pos[-1] >= MAX_APERTURE:
            raise GeometryError(f"position {pos[-1]} exceeds the supported aperture {MAX_APERTURE}")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "mask", _mask_of(pos))

    @classmethod
    def from_mask(cls, mask: int) -> "ArrayGeometry":
        return cls(_positions_of(mask))

    @classmethod
    def parse(cls, text: str) -> "ArrayGeometry":
        """Parse the comma-separated text form, e.g. ``"0,1,4,6,8"``."""
        items = [t.strip() for t in text.split(",") if t.strip()]
        try:
            return cls(tuple(int(t) for t in items))
        except ValueError as exc:
            if isinstance(exc, GeometryError):
                raise
            raise GeometryError(f"cannot parse geometry {text!r}") from exc

    def __len__(self) -> int:
        return len(self.positions)

    def __iter__(self) -> Iterator[int]:
        return iter(self.positions)

    def __contains__(self, p) -> bool:
        return isinstance(p, int) and p >= 0 and bool(self.mask >> p & 1)

    def __str__(self) -> str:
        return ",".join(map(str, self.positions))

    @property
    def min(self) -> int:
        return self.positions[0]

    @property
    def max(self) -> int:
        return self.positions[-1]

    @property
    def aperture(self) -> int:
        return self.positions[-1] - self.positions[0]

    @property
    def is_canonical(self) -> bool:
        return self.positions[0] == 0

    def issubset(self, other: "ArrayGeometry") -> bool:
        return self.mask & ~other.mask == 0

    def reflect(self) -> "ArrayGeometry":
        """Mirror image ``max - x`` for each position ``x``."""
        top = self.max
        return ArrayGeometry(tuple(top - p for p in reversed(self.positions)))

    def shift(self, offset: int) -> "ArrayGeometry":
        return ArrayGeometry(tuple(p + offset for p in self.positions))


def canonicalize(raw: Iterable[int]) -> ArrayGeometry:
    """Sort, deduplicate, and translate ``raw`` so that its minimum is 0."""
    values = sorted(set(int(v) for v in raw))
    if not values:
        raise GeometryError("empty geometry")
    if values[0] < 0:
        raise GeometryError(f"positions must be nonnegative: {values}")
    lo = values[0]
    return ArrayGeometry(tuple(v - lo for v in values))


def uniform(n: int, spacing: int = 1) -> ArrayGeometry:
    """The dilated ULA ``spacing * {0, ..., n-1}``."""
    if n < 1:
        raise GeometryError("empty geometry")
    return ArrayGeometry(tuple(spacing * i for i in range(n)))


def sum_mask(a_mask: int, b: ArrayGeometry) -> int:
    """Bitset of ``A + b`` where ``A`` is given by its bitset."""
    out = 0
    for p in b.positions:
        out |= a_mask << p
    return out


def sum_set(a: ArrayGeometry, b: ArrayGeometry) -> ArrayGeometry:
    """All pairwise sums ``x + y``; the result keeps absolute coordinates."""
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    return ArrayGeometry.from_mask(sum_mask(large.mask, small))


def is_contiguous(a: ArrayGeometry) -> bool:
    """True iff ``a`` is exactly ``{0, ..., len(a) - 1}``."""
    if not a.is_canonical:
        raise GeometryError("geometry not canonical")
    return a.max == len(a) - 1


def contains_edges(s: ArrayGeometry, d: ArrayGeometry) -> bool:
    """True iff subarray ``s`` of ``d`` holds both extremal sensors of ``d``."""
    if not s.issubset(d):
        raise GeometryError("not a subset")
    return d.min in s and d.max in s
