"""Finite matroid kernel: independence oracles, rank, span, minors, sums, duals.

Subsets are bitmasks (see :mod:`matroid_forge.bits`).  Public methods accept
a mask or any iterable of element ids and always return masks.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .bits import SubsetLike, as_mask, fmt, iter_bits, lex_key, members, popcount, submasks
from .config import DEFAULTS
from .errors import ArgumentError, CapacityError, DomainError, InvalidMatroidError


class Matroid:
    """A finite matroid presented by an independence oracle.

    Subclasses implement ``_independent(mask)`` for masks inside the ground
    set and may override ``_compute_rank`` with something faster than the
    greedy default.  Instances are immutable; the only internal state is a
    lock-protected rank memo.
    """

    def __init__(self, ground: SubsetLike):
        self.ground_mask = ground if type(ground) is int and ground >= 0 else as_mask(ground)
        self._rank_cache: dict[int, int] = {}

    _cache_cap = DEFAULTS.rank_cache
    # one lock shared by all instances; memo writes are rare and short
    _cache_lock = threading.Lock()

    @property
    def ground(self) -> tuple[int, ...]:
        return tuple(members(self.ground_mask))

    # -- subclass hooks -------------------------------------------------
    def _independent(self, mask: int) -> bool:
        raise NotImplementedError

    def _compute_rank(self, mask: int) -> int:
        cur = 0
        r = 0
        for b in iter_bits(mask):
            if self._independent(cur | b):
                cur |= b
                r += 1
        return r

    # -- internal mask API ----------------------------------------------
    def _rank(self, mask: int) -> int:
        r = self._rank_cache.get(mask)
        if r is None:
            r = self._compute_rank(mask)
            with self._cache_lock:
                if len(self._rank_cache) < self._cache_cap:
                    self._rank_cache[mask] = r
        return r

    def _greedy(self, start: int, within: int) -> int:
        cur = start
        rest = within & ~start
        independent = self._independent
        while rest:
            b = rest & -rest
            rest ^= b
            if independent(cur | b):
                cur |= b
        return cur

    def _span(self, mask: int) -> int:
        r = self._rank(mask)
        out = mask
        for b in iter_bits(self.ground_mask & ~mask):
            if self._rank(mask | b) == r:
                out |= b
        return out

    def _spans(self, spanner: int, target: int) -> bool:
        """True iff ``target`` lies inside the span of ``spanner``."""
        return self._rank(spanner | target) == self._rank(spanner)

    def _check(self, subset: SubsetLike) -> int:
        mask = as_mask(subset)
        if mask & ~self.ground_mask:
            raise DomainError(
                f"elements {fmt(mask & ~self.ground_mask)} are outside the ground set {fmt(self.ground_mask)}"
            )
        return mask

    # -- public API -------------------------------------------------------
    def __len__(self) -> int:
        return popcount(self.ground_mask)

    def is_independent(self, subset: SubsetLike) -> bool:
        return self._independent(self._check(subset))

    def rank(self, subset: SubsetLike | None = None) -> int:
        mask = self.ground_mask if subset is None else self._check(subset)
        return self._rank(mask)

    def max_independent_subset(self, subset: SubsetLike | None = None) -> int:
        """Ascending greedy: scan the subset, keep e whenever it stays independent."""
        mask = self.ground_mask if subset is None else self._check(subset)
        return self._greedy(0, mask)

    def extend_independent(self, start: SubsetLike, within: SubsetLike) -> int:
        """Greedily grow the independent set ``start`` to a maximal independent subset of ``start | within``."""
        s = self._check(start)
        w = self._check(within)
        if not self._independent(s):
            raise ArgumentError(f"{fmt(s)} is not independent")
        return self._greedy(s, w | s)

    def span(self, subset: SubsetLike) -> int:
        return self._span(self._check(subset))

    def is_spanning(self, subset: SubsetLike) -> bool:
        mask = self._check(subset)
        return self._rank(mask) == self._rank(self.ground_mask)

    def is_base(self, subset: SubsetLike) -> bool:
        mask = self._check(subset)
        return self._independent(mask) and self._rank(mask) == self._rank(self.ground_mask)

    def restrict(self, subset: SubsetLike) -> "Minor":
        return Minor(self, 0, self.ground_mask & ~self._check(subset))

    def delete(self, subset: SubsetLike) -> "Minor":
        return Minor(self, 0, self._check(subset))

    def contract(self, subset: SubsetLike) -> "Minor":
        return Minor(self, self._check(subset), 0)

    def independent_sets(self) -> Iterator[int]:
        return downward_closed_family(self.ground_mask, self._independent)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(ground={fmt(self.ground_mask)})"


def downward_closed_family(ground: int, predicate: Callable[[int], bool]) -> Iterator[int]:
    """Enumerate a downward-closed family by depth-first extension.

    Sets come out in lexicographic order of their ascending element tuples;
    ``predicate`` is only queried on sets whose one-smaller prefix passed.
    """
    elems = list(iter_bits(ground))
    n = len(elems)

    def rec(cur: int, start: int) -> Iterator[int]:
        yield cur
        for j in range(start, n):
            nxt = cur | elems[j]
            if predicate(nxt):
                yield from rec(nxt, j + 1)

    return rec(0, 0)


class Minor(Matroid):
    """``base / contracted - deleted`` relative to a fixed basis of ``contracted``.

    ``I`` (disjoint from both sets) is independent iff ``I | contracted_basis``
    is independent in ``base``.  ``validate=False`` trusts the caller on
    every argument, masks included.
    """

    def __init__(
        self,
        base: Matroid,
        contracted: SubsetLike,
        deleted: SubsetLike,
        contracted_basis: SubsetLike | None = None,
        *,
        validate: bool = True,
    ):
        if not validate:
            self._setup(base, contracted, deleted, base._greedy(0, contracted) if contracted_basis is None else contracted_basis)
            return
        x = base._check(contracted)
        d = base._check(deleted)
        if x & d:
            raise ArgumentError(f"contract and delete overlap in {fmt(x & d)}")
        if contracted_basis is None:
            bx = base._greedy(0, x)
        else:
            bx = base._check(contracted_basis)
            if bx & ~x or not base._independent(bx) or base._rank(bx) != base._rank(x):
                raise ArgumentError(f"{fmt(bx)} is not a basis of {fmt(x)}")
        self._setup(base, x, d, bx)

    def _setup(self, base: Matroid, x: int, d: int, bx: int) -> None:
        super().__init__(base.ground_mask & ~(x | d))
        self.base = base
        self.contracted = x
        self.deleted = d
        self.contracted_basis = bx
        self._basis_size = bx.bit_count()

    def _independent(self, mask: int) -> bool:
        return self.base._independent(mask | self.contracted_basis)

    def _compute_rank(self, mask: int) -> int:
        return self.base._rank(mask | self.contracted_basis) - self._basis_size

    def __repr__(self) -> str:
        return f"Minor({self.base!r} / {fmt(self.contracted)} - {fmt(self.deleted)})"


class DirectSum(Matroid):
    def __init__(self, parts: Sequence[Matroid]):
        ground = 0
        for p in parts:
            if ground & p.ground_mask:
                raise ArgumentError(f"summand grounds overlap in {fmt(ground & p.ground_mask)}")
            ground |= p.ground_mask
        super().__init__(ground)
        self.parts = tuple(parts)

    def _independent(self, mask: int) -> bool:
        return all(p._independent(mask & p.ground_mask) for p in self.parts)

    def _compute_rank(self, mask: int) -> int:
        return sum(p._rank(mask & p.ground_mask) for p in self.parts)


class ExplicitMatroid(Matroid):
    """A matroid given by the list of all of its independent sets."""

    def __init__(self, ground: SubsetLike, independent_sets: Iterable[SubsetLike], *, validate: bool = True):
        super().__init__(ground)
        self.family = frozenset(as_mask(s) for s in independent_sets)
        self.validated = False
        if validate:
            report = check_axioms(self.family, self.ground_mask, threshold=None)
            if not report.ok:
                raise InvalidMatroidError(f"family is not a matroid: {report.summary()}", report)
            self.validated = True

    @classmethod
    def from_matroid(cls, matroid: Matroid, limit: int | None = DEFAULTS.brute) -> "ExplicitMatroid":
        if limit is not None and len(matroid) > limit:
            raise CapacityError(f"{len(matroid)} elements exceeds the explicit-listing limit {limit}")
        m = cls(matroid.ground_mask, matroid.independent_sets(), validate=False)
        m.validated = True
        return m

    def _independent(self, mask: int) -> bool:
        return mask in self.family

    def descriptor(self) -> dict:
        sets = sorted(self.family, key=lambda s: (popcount(s), lex_key(s)))
        return {"type": "explicit", "independent_sets": [members(s) for s in sets]}

    def bases(self) -> list[int]:
        r = self._rank(self.ground_mask)
        return sorted((s for s in self.family if popcount(s) == r), key=lex_key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExplicitMatroid):
            return NotImplemented
        return self.ground_mask == other.ground_mask and self.family == other.family

    def __hash__(self) -> int:
        return hash((self.ground_mask, self.family))


# -- axiom checking --------------------------------------------------------


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    message: str
    witness: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "message": self.message,
            "witness": {k: members(v) for k, v in self.witness.items()},
        }


@dataclass
class AxiomReport:
    violations: list[AxiomViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def violated(self) -> list[str]:
        return [v.axiom for v in self.violations]

    def summary(self) -> str:
        return "; ".join(f"({v.axiom}) {v.message}" for v in self.violations) or "ok"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def check_axioms(
    family: Iterable[SubsetLike], ground: SubsetLike, threshold: int | None = DEFAULTS.axioms
) -> AxiomReport:
    """Check axioms (i)-(iii) of an independence family; one witness per violated axiom.

    Axiom (iv), extension to a maximal member inside any X, holds for every
    finite family, so it never appears in a report.  ``threshold=None``
    disables the ground-size limit (the cost is polynomial in ``len(family)``).
    """
    g = as_mask(ground)
    if threshold is not None and popcount(g) > threshold:
        raise CapacityError(f"axiom check limited to {threshold} elements, got {popcount(g)}")
    fam = {as_mask(s) for s in family}
    ordered = sorted(fam, key=lambda s: (popcount(s), lex_key(s)))
    report = AxiomReport()

    for s in ordered:
        if s & ~g:
            report.violations.append(
                AxiomViolation("ground", f"{fmt(s)} leaves the ground set", {"set": s})
            )
            break
    if 0 not in fam:
        report.violations.append(AxiomViolation("i", "the empty set is not independent"))

    for s in ordered:
        missing = next((s ^ b for b in iter_bits(s) if s ^ b not in fam), None)
        if missing is not None:
            report.violations.append(
                AxiomViolation(
                    "ii",
                    f"{fmt(missing)} is a subset of {fmt(s)} but not in the family",
                    {"subset": missing, "superset": s},
                )
            )
            break

    ext = {}
    for s in ordered:
        e = 0
        for b in iter_bits(g & ~s):
            if s | b in fam:
                e |= b
        ext[s] = e
    maximal = [s for s in ordered if not ext[s]]
    for i in ordered:
        if not ext[i]:
            continue
        j = next((j for j in maximal if not ext[i] & j), None)
        if j is not None:
            report.violations.append(
                AxiomViolation(
                    "iii",
                    f"{fmt(i)} is not maximal but no element of the maximal {fmt(j)} extends it",
                    {"I": i, "J": j},
                )
            )
            break
    return report


# -- free-function surface ------------------------------------------------


def is_independent(matroid: Matroid, subset: SubsetLike) -> bool:
    return matroid.is_independent(subset)


def rank(matroid: Matroid, subset: SubsetLike | None = None) -> int:
    return matroid.rank(subset)


def max_independent_subset(matroid: Matroid, subset: SubsetLike | None = None) -> int:
    return matroid.max_independent_subset(subset)


def span(matroid: Matroid, subset: SubsetLike) -> int:
    return matroid.span(subset)


def minor(matroid: Matroid, contract: SubsetLike = 0, delete: SubsetLike = 0) -> Minor:
    """``matroid / contract - delete``, contracting along the ascending greedy basis."""
    return Minor(matroid, contract, delete)


def direct_sum(parts: Sequence[Matroid]) -> DirectSum:
    return DirectSum(parts)


def dual(matroid: ExplicitMatroid) -> ExplicitMatroid:
    """Dual matroid: its bases are the complements of the bases of ``matroid``."""
    if not isinstance(matroid, ExplicitMatroid):
        raise TypeError("dual() expects an ExplicitMatroid; convert with ExplicitMatroid.from_matroid")
    if not matroid.validated:
        report = check_axioms(matroid.family, matroid.ground_mask, threshold=None)
        if not report.ok:
            raise InvalidMatroidError(f"family is not a matroid: {report.summary()}", report)
    g = matroid.ground_mask
    full = matroid._rank(g)
    family = [s for s in submasks(g) if matroid._rank(g & ~s) == full]
    return ExplicitMatroid(g, family, validate=True)


def circuits(matroid: Matroid, threshold: int | None = DEFAULTS.circuits) -> list[int]:
    """All minimal dependent sets, ordered by size then lexicographically."""
    if threshold is not None and len(matroid) > threshold:
        raise CapacityError(f"circuit enumeration limited to {threshold} elements, got {len(matroid)}")
    found = [
        s
        for s in submasks(matroid.ground_mask)
        if not matroid._independent(s) and all(matroid._independent(s ^ b) for b in iter_bits(s))
    ]
    return sorted(found, key=lambda s: (popcount(s), lex_key(s)))
