"""Concrete matroid families and the uniform-matroid procedures."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .bits import SubsetLike, as_mask, bits, fmt, iter_bits, members, popcount, submasks
from .config import DEFAULTS
from .core import Matroid
from .errors import ArgumentError, CapacityError


class UniformMatroid(Matroid):
    """``U_{E,n}``: a set is independent iff it has at most ``rank_cap`` elements."""

    def __init__(self, ground: SubsetLike, rank_cap: int):
        super().__init__(ground)
        if not 0 <= rank_cap <= len(self):
            raise ArgumentError(f"rank cap {rank_cap} outside [0, {len(self)}]")
        self.rank_cap = rank_cap

    def _independent(self, mask: int) -> bool:
        return mask.bit_count() <= self.rank_cap

    def _rank(self, mask: int) -> int:
        return min(mask.bit_count(), self.rank_cap)

    def descriptor(self) -> dict:
        return {"type": "uniform", "rank": self.rank_cap}

    def __repr__(self) -> str:
        return f"UniformMatroid({fmt(self.ground_mask)}, {self.rank_cap})"


def free_matroid(ground: SubsetLike) -> UniformMatroid:
    g = as_mask(ground)
    return UniformMatroid(g, popcount(g))


class PartitionMatroid(Matroid):
    """Direct sum of uniform matroids ``U_{E_i, n_i}`` on disjoint parts.

    Parts keep their given order; algorithms that walk "every part in order"
    use it.  Parts must be nonempty.
    """

    def __init__(self, parts: Iterable[tuple[SubsetLike, int]]):
        masks: list[int] = []
        caps: list[int] = []
        ground = 0
        for i, (elements, cap) in enumerate(parts):
            m = as_mask(elements)
            if not m:
                raise ArgumentError(f"part {i} is empty")
            if m & ground:
                raise ArgumentError(f"part {i} overlaps earlier parts in {fmt(m & ground)}")
            if not 0 <= cap <= popcount(m):
                raise ArgumentError(f"part {i}: cap {cap} outside [0, {popcount(m)}]")
            ground |= m
            masks.append(m)
            caps.append(cap)
        super().__init__(ground)
        self.part_masks = tuple(masks)
        self.caps = tuple(caps)

    @property
    def n_parts(self) -> int:
        return len(self.part_masks)

    @property
    def parts(self) -> list[tuple[int, int]]:
        return list(zip(self.part_masks, self.caps))

    def _independent(self, mask: int) -> bool:
        for m, c in zip(self.part_masks, self.caps):
            if (mask & m).bit_count() > c:
                return False
        return True

    def _rank(self, mask: int) -> int:
        r = 0
        for m, c in zip(self.part_masks, self.caps):
            k = (mask & m).bit_count()
            r += k if k < c else c
        return r

    def _span(self, mask: int) -> int:
        out = mask
        for m, c in zip(self.part_masks, self.caps):
            if (mask & m).bit_count() >= c:
                out |= m
        return out

    def uniform_parts(self) -> list[UniformMatroid]:
        return [UniformMatroid(m, c) for m, c in zip(self.part_masks, self.caps)]

    def union_of(self, indices: Iterable[int]) -> int:
        w = 0
        for i in indices:
            w |= self.part_masks[i]
        return w

    def select_parts(self, indices: Sequence[int]) -> "PartitionMatroid":
        """The restriction to the listed parts, in the listed order."""
        return PartitionMatroid((self.part_masks[i], self.caps[i]) for i in indices)

    def delete_parts(self, indices: Iterable[int]) -> "PartitionMatroid":
        drop = set(indices)
        return self.select_parts([i for i in range(self.n_parts) if i not in drop])

    def part_of(self, element: int) -> int:
        b = 1 << element
        for i, m in enumerate(self.part_masks):
            if m & b:
                return i
        raise ArgumentError(f"element {element} is in no part")

    def descriptor(self) -> dict:
        return {"parts": [{"elements": members(m), "cap": c} for m, c in self.parts]}

    def __repr__(self) -> str:
        body = ", ".join(f"{fmt(m)}:{c}" for m, c in self.parts)
        return f"PartitionMatroid([{body}])"


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; loops and parallel edges allowed."""

    def __init__(self, edges: Iterable[tuple[int, Hashable, Hashable]]):
        edges = list(edges)
        ids = [e for e, _, _ in edges]
        if len(set(ids)) != len(ids):
            raise ArgumentError("duplicate edge ids")
        super().__init__(bits(ids))
        vertex_index: dict[Hashable, int] = {}
        self.edges = tuple((e, u, v) for e, u, v in edges)
        self._ends: dict[int, tuple[int, int]] = {}
        for e, u, v in edges:
            a = vertex_index.setdefault(u, len(vertex_index))
            b = vertex_index.setdefault(v, len(vertex_index))
            self._ends[1 << e] = (a, b)
        self.n_vertices = len(vertex_index)

    def _forest_size(self, mask: int, stop_on_cycle: bool) -> int:
        # rebuilt per query: oracle calls arrive in arbitrary order
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        size = 0
        for b in iter_bits(mask):
            u, v = self._ends[b]
            ru, rv = find(u), find(v)
            if ru == rv:
                if stop_on_cycle:
                    return -1
                continue
            parent[ru] = rv
            size += 1
        return size

    def _independent(self, mask: int) -> bool:
        return self._forest_size(mask, True) >= 0

    def _compute_rank(self, mask: int) -> int:
        return self._forest_size(mask, False)

    def descriptor(self) -> dict:
        return {"type": "graphic", "edges": [[e, u, v] for e, u, v in sorted(self.edges)]}


def _xor_basis_insert(basis: dict[int, int], vec: int) -> bool:
    """Reduce ``vec`` against a pivot-indexed basis; insert it if nonzero."""
    while vec:
        top = vec.bit_length() - 1
        if top not in basis:
            basis[top] = vec
            return True
        vec ^= basis[top]
    return False


class LinearMatroidGF2(Matroid):
    """Column matroid of a 0/1 matrix over the two-element field."""

    def __init__(self, dim: int, columns: Iterable[tuple[int, Sequence[int]]]):
        columns = list(columns)
        ids = [e for e, _ in columns]
        if len(set(ids)) != len(ids):
            raise ArgumentError("duplicate column ids")
        super().__init__(bits(ids))
        self.dim = dim
        self.columns = tuple((e, tuple(int(x) for x in vec)) for e, vec in columns)
        self._vectors: dict[int, int] = {}
        for e, vec in self.columns:
            if len(vec) != dim or any(x not in (0, 1) for x in vec):
                raise ArgumentError(f"column {e} must be a 0/1 vector of length {dim}")
            self._vectors[1 << e] = sum(x << i for i, x in enumerate(vec))

    def _independent(self, mask: int) -> bool:
        basis: dict[int, int] = {}
        return all(_xor_basis_insert(basis, self._vectors[b]) for b in iter_bits(mask))

    def _compute_rank(self, mask: int) -> int:
        basis: dict[int, int] = {}
        for b in iter_bits(mask):
            _xor_basis_insert(basis, self._vectors[b])
        return len(basis)

    def descriptor(self) -> dict:
        return {"type": "linear_gf2", "dim": self.dim, "columns": [[e, list(v)] for e, v in sorted(self.columns)]}


# -- uniform-matroid procedures -------------------------------------------


@dataclass(frozen=True)
class UniformClass:
    """Result of :func:`classify_uniform`.

    ``kind`` is ``"free"``, ``"uniform"`` (with ``rank``) or ``"not_uniform"``
    (with ``witness``, a set that is neither independent nor spanning).
    """

    kind: str
    rank: int | None = None
    witness: int | None = None
    exchange: tuple[int, int, int] | None = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.rank is not None:
            out["rank"] = self.rank
        if self.witness is not None:
            out["witness"] = members(self.witness)
        if self.exchange is not None:
            i, e, f = self.exchange
            out["exchange"] = {"I": members(i), "e": e, "f": f}
        return out


def classify_uniform(matroid: Matroid, threshold: int | None = DEFAULTS.classify) -> UniformClass:
    if threshold is not None and len(matroid) > threshold:
        raise CapacityError(f"uniform classification limited to {threshold} elements, got {len(matroid)}")
    g = matroid.ground_mask
    r = matroid._rank(g)
    if r == len(matroid):
        return UniformClass("free")
    if all(matroid._independent(s) == (popcount(s) <= r) for s in submasks(g)):
        return UniformClass("uniform", rank=r)
    for s in submasks(g):
        if not matroid._independent(s) and matroid._rank(s) < r:
            return UniformClass("not_uniform", witness=s)
    # unreachable for genuine matroids; fall back to an explicit exchange failure
    for i in submasks(g):
        if not matroid._independent(i):
            continue
        for eb in iter_bits(i):
            for fb in iter_bits(g & ~i):
                if not matroid._independent(i ^ eb | fb):
                    return UniformClass(
                        "not_uniform", exchange=(i, eb.bit_length() - 1, fb.bit_length() - 1)
                    )
    raise AssertionError("oracle is neither uniform nor non-uniform; it is not a matroid")


class SetKind(enum.Enum):
    INDEPENDENT = "independent"
    SPANNING = "spanning"
    NEITHER = "neither"


def independent_or_spanning(matroid: Matroid, subset: SubsetLike) -> SetKind:
    """Sort a set into independent / spanning / neither (independent wins for bases)."""
    f = matroid._check(subset)
    if matroid._independent(f):
        return SetKind.INDEPENDENT
    if matroid._rank(f) == matroid._rank(matroid.ground_mask):
        return SetKind.SPANNING
    return SetKind.NEITHER


class ExchangeSide(enum.Enum):
    BASE_OF_U = "m_independent_base_of_u"
    BASE_OF_M = "u_independent_base_of_m"


@dataclass(frozen=True)
class ExchangeResult:
    side: ExchangeSide
    base: int


def base_exchange_with_uniform(matroid: Matroid, uniform: UniformMatroid) -> ExchangeResult:
    """Either an M-independent base of U or a U-independent base of M.

    Take the greedy base B of M.  If it fits under U's cap it is itself a
    U-independent base of M; otherwise it is U-spanning and its first
    ``rank_cap`` elements form a base of U that M sees as independent.
    """
    if matroid.ground_mask != uniform.ground_mask:
        raise ArgumentError(
            f"ground sets differ: {fmt(matroid.ground_mask)} vs {fmt(uniform.ground_mask)}"
        )
    b = matroid._greedy(0, matroid.ground_mask)
    extra = b.bit_count() - uniform.rank_cap
    if extra <= 0:
        return ExchangeResult(ExchangeSide.BASE_OF_M, b)
    # drop the highest elements until the cap is met
    for _ in range(extra):
        b &= ~(1 << (b.bit_length() - 1))
    return ExchangeResult(ExchangeSide.BASE_OF_U, b)
