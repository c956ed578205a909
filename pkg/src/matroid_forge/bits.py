"""Subsets of non-negative integer elements encoded as Python ints.

Bit ``e`` of a mask is set iff element ``e`` is in the subset.  Every
algorithm in the package works on these masks; the helpers below convert
from and to ordinary iterables.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Union

SubsetLike = Union[int, Iterable[int]]


def bits(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if not isinstance(e, int) or isinstance(e, bool) or e < 0:
            raise ValueError(f"element identifiers must be non-negative ints, got {e!r}")
        mask |= 1 << e
    return mask


def as_mask(subset: SubsetLike) -> int:
    """Accept either a mask or an iterable of elements."""
    if isinstance(subset, bool):
        raise TypeError("a subset cannot be a bool")
    if isinstance(subset, int):
        if subset < 0:
            raise ValueError("subset masks are non-negative")
        return subset
    return bits(subset)


def members(mask: int) -> list[int]:
    """Elements of ``mask`` in ascending order."""
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return out


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the single-bit masks of ``mask``, lowest first."""
    while mask:
        low = mask & -mask
        yield low
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    elems = list(iter_bits(mask))
    for code in range(1 << len(elems)):
        sub = 0
        for j, b in enumerate(elems):
            if code >> j & 1:
                sub |= b
        yield sub


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key comparing subsets as ascending element tuples."""
    return tuple(members(mask))


def fmt(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"
