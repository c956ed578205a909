"""Intersection-property witnesses for ``M`` against a partition matroid ``N``.

The pipeline: grow common independent sets to maximal ones part by part,
look for a union of parts ``W`` on which ``M`` has an N-independent base
(and recurse on ``M/W`` against the remaining parts), and otherwise build
an M-independent base of ``N`` by induction on the number of parts,
steering with the set of parts already M-spanned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .bits import SubsetLike, as_mask, fmt, iter_bits, members, popcount
from .config import DEFAULTS, Thresholds
from .core import Matroid, Minor
from .edmonds import max_common_independent
from .errors import ArgumentError, ConditionViolatedError, InvalidInputError
from .zoo import PartitionMatroid


@dataclass(frozen=True)
class Witness:
    I: int
    I_M: int
    I_N: int

    @property
    def size(self) -> int:
        return popcount(self.I)

    def to_dict(self) -> dict:
        return {"I": members(self.I), "I_M": members(self.I_M), "I_N": members(self.I_N)}

    @classmethod
    def from_dict(cls, doc: dict) -> "Witness":
        return cls(as_mask(doc["I"]), as_mask(doc["I_M"]), as_mask(doc["I_N"]))


@dataclass(frozen=True)
class ConditionReport:
    holds: bool
    violating_W: int | None = None
    base_B: int | None = None
    parts: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        if self.holds:
            return {"holds": True}
        return {"holds": False, "W": members(self.violating_W), "B": members(self.base_B), "parts": list(self.parts)}


@dataclass(frozen=True)
class ThetaResult:
    """Outcome of :func:`maximize_theta`.

    ``theta`` is the bitmask of part indices fully inside ``span_M(I)``.
    ``exact`` is False when the heuristic search ran out of restarts.
    """

    I: int
    theta: int
    exact: bool = True
    improvements: int = 0

    @property
    def indices(self) -> list[int]:
        return members(self.theta)


@dataclass(frozen=True)
class SideResult:
    B: int
    theta: tuple[int, ...] = ()
    order: tuple[int, ...] = ()
    exact: bool = True


def _check_pair(m: Matroid, n: PartitionMatroid) -> None:
    if not isinstance(n, PartitionMatroid):
        raise ArgumentError("N must be a PartitionMatroid")
    if m.ground_mask != n.ground_mask:
        raise ArgumentError(f"ground sets differ: {fmt(m.ground_mask)} vs {fmt(n.ground_mask)}")


def _check_common(m: Matroid, n: PartitionMatroid, subset: SubsetLike) -> int:
    _check_pair(m, n)
    mask = m._check(as_mask(subset))
    if not m._independent(mask):
        raise InvalidInputError(f"{fmt(mask)} is dependent in M")
    if not n._independent(mask):
        raise InvalidInputError(f"{fmt(mask)} is dependent in N")
    return mask


def _theta(m: Matroid, n: PartitionMatroid, i: int) -> int:
    r = m._rank(i)
    out = 0
    for k, part in enumerate(n.part_masks):
        if m._rank(i | part) == r:
            out |= 1 << k
    return out


def theta_set(m: Matroid, n: PartitionMatroid, subset: SubsetLike) -> frozenset[int]:
    """Indices ``i`` with ``E_i`` inside ``span_M(subset)``."""
    return frozenset(members(_theta(m, n, _check_common(m, n, subset))))


# -- maximal common independent sets --------------------------------------


def _part_exchange(m: Matroid, i: int, part: int, cap: int) -> int:
    """base_exchange_with_uniform(M/I on E_i - I, U of the part's remaining room), inlined.

    The greedy base of M/I cut down to its lowest ``room`` elements is the
    ascending greedy stopped after ``room`` picks.
    """
    room = cap - (i & part).bit_count()
    rest = part & ~i
    independent = m._independent
    cur = i
    while rest and room:
        b = rest & -rest
        rest ^= b
        if independent(cur | b):
            cur |= b
            room -= 1
    return cur & ~i


def _extend(m: Matroid, n: PartitionMatroid, i: int) -> int:
    for part, cap in zip(n.part_masks, n.caps):
        if part & ~i:
            i |= _part_exchange(m, i, part, cap)
    return i


def extend_to_maximal(m: Matroid, n: PartitionMatroid, subset: SubsetLike) -> int:
    """Grow a common independent set to a maximal one, one part at a time.

    For each part, the exchange between ``M/I`` on ``E_i - I`` and the
    contracted uniform part yields a set that makes ``I`` span ``E_i`` in
    at least one of the two matroids.
    """
    return _extend(m, n, _check_common(m, n, subset))


def _is_maximal(m: Matroid, n: PartitionMatroid, i: int) -> bool:
    for part in n.part_masks:
        if not (m._spans(i, part) or n._spans(i, part)):
            return False
    return True


def is_maximal_common(m: Matroid, n: PartitionMatroid, subset: SubsetLike) -> bool:
    """Every part is spanned by the set in M or in N."""
    return _is_maximal(m, n, _check_common(m, n, subset))


# -- the condition on unions of parts -------------------------------------


def condition_report(m: Matroid, n: PartitionMatroid) -> ConditionReport:
    """Find the first union of parts W on which M has an N-independent base."""
    _check_pair(m, n)
    ground = m.ground_mask
    for code in range(1, 1 << n.n_parts):
        idx = members(code)
        w = n.union_of(idx)
        r = m._rank(w)
        if r > n._rank(w):
            continue
        opt = max_common_independent(Minor(m, 0, ground & ~w), n.select_parts(idx))
        if opt.size == r:
            return ConditionReport(False, w, opt.I_star, tuple(idx))
    return ConditionReport(True)


# -- steering by spanned parts --------------------------------------------


class _ThetaSearch:
    def __init__(self, m: Matroid, n: PartitionMatroid, target: int, theta: int):
        self.m = m
        self.n = n
        self.target = target
        self.others = [p for k, p in enumerate(n.part_masks) if not theta >> k & 1]

    def improves(self, k: int) -> bool:
        """``span_M(k)`` holds the target and some part outside the current theta."""
        m = self.m
        r = m._rank(k)
        if m._rank(k | self.target) != r:
            return False
        return any(m._rank(k | p) == r for p in self.others)

    def common(self, s: int) -> bool:
        return self.m._independent(s) and self.n._independent(s)

    def exhaustive(self) -> int | None:
        elems = list(iter_bits(self.m.ground_mask))
        size = len(elems)

        def rec(k: int, start: int) -> int | None:
            cand = [j for j in range(start, size) if self.common(k | elems[j])]
            reach = k
            for j in cand:
                reach |= elems[j]
            # spans only grow along a branch, so the branch union bounds it
            if not self.improves(reach):
                return None
            if self.improves(k):
                return k
            for j in cand:
                found = rec(k | elems[j], j + 1)
                if found is not None:
                    return found
            return None

        return rec(0, 0)

    def heuristic(self, rng: random.Random, restarts: int) -> int | None:
        m = self.m
        ground = list(iter_bits(m.ground_mask))
        spanned = m._span(self.target)
        for attempt in range(restarts):
            order = ground[:]
            if attempt:
                rng.shuffle(order)
            k = 0
            for b in order:
                if b & spanned and self.common(k | b):
                    k |= b
            if not m._spans(k, self.target):
                k = self.target
            for b in order:
                if self.common(k | b):
                    k |= b
            if self.improves(k):
                return k
        return None


def _maximize_theta(m: Matroid, n: PartitionMatroid, j: int, thr: Thresholds, seed: int) -> ThetaResult:
    i = j
    theta = _theta(m, n, i)
    full = (1 << n.n_parts) - 1
    exact = True
    steps = 0
    rng = random.Random(seed)
    while theta != full:
        search = _ThetaSearch(m, n, i, theta)
        if len(m) <= thr.theta:
            k = search.exhaustive()
        else:
            k = search.heuristic(rng, thr.theta_restarts)
            if k is None:
                exact = False
        if k is None:
            break
        i = k
        theta = _theta(m, n, k)
        steps += 1
    return ThetaResult(i, theta, exact, steps)


def maximize_theta(
    m: Matroid, n: PartitionMatroid, j: SubsetLike = 0, *, thresholds: Thresholds | None = None, seed: int = 0
) -> ThetaResult:
    """Common independent I spanning J in M whose spanned-part set cannot grow.

    Repeatedly replaces I by a common independent K with ``span_M(K) >= I``
    and strictly more parts spanned.  Exact (lexicographically least K)
    up to ``thresholds.theta`` elements, randomized restarts above.
    """
    thr = thresholds or DEFAULTS
    return _maximize_theta(m, n, _check_common(m, n, j), thr, seed)


# -- M-independent bases of N ----------------------------------------------


def _side(m: Matroid, n: PartitionMatroid, j: int, thr: Thresholds, seed: int) -> SideResult:
    if n.n_parts == 0:
        return SideResult(0)
    start = j
    exact = True
    while True:
        res = _maximize_theta(m, n, start, thr, seed)
        exact = exact and res.exact
        i, theta = res.I, res.theta
        spanned = members(theta)
        order = tuple(spanned + [k for k in range(n.n_parts) if not theta >> k & 1])
        head = order[: len(spanned)]
        e_prime = n.union_of(head)
        sub_m = Minor(m, 0, m.ground_mask & ~e_prime)
        sub_n = n.select_parts(head)
        b_prime = _side(sub_m, sub_n, i & e_prime, thr, seed).B
        b = m._greedy(b_prime, (i & ~e_prime) | b_prime)
        b = _extend(m, n, b)
        if _theta(m, n, b) == theta:
            break
        # only reachable when the heuristic search missed an improvement; b is one
        exact = False
        start = b
    if not (m._independent(b) and n._rank(b) == n._rank(n.ground_mask) and m._spans(b, j)):
        raise AssertionError(f"side construction produced an invalid base {fmt(b)}")
    return SideResult(b, tuple(spanned), order, exact)


def theorem_side(
    m: Matroid,
    n: PartitionMatroid,
    j: SubsetLike = 0,
    *,
    thresholds: Thresholds | None = None,
    seed: int = 0,
    check_condition: bool = True,
) -> SideResult:
    """An M-independent base B of N whose M-span contains J.

    Requires the condition: no nonempty union of parts carries an
    N-independent base of M restricted to it.
    """
    mask = _check_common(m, n, j)
    if check_condition:
        report = condition_report(m, n)
        if not report.holds:
            raise ConditionViolatedError(report.violating_W, report.base_B)
    return _side(m, n, mask, thresholds or DEFAULTS, seed)


# -- witnesses ------------------------------------------------------------


def _witness(m: Matroid, n: PartitionMatroid, thr: Thresholds, seed: int, trace: list | None, depth: int) -> Witness:
    if n.n_parts == 0:
        return Witness(0, 0, 0)
    report = condition_report(m, n)
    if not report.holds:
        w, b = report.violating_W, report.base_B
        if trace is not None:
            trace.append({"depth": depth, "step": "contract", "parts": list(report.parts), "W": members(w), "B": members(b)})
        # N - W equals N / W because N is the direct sum of N|W and N - W
        inner = _witness(Minor(m, w, 0), n.delete_parts(report.parts), thr, seed, trace, depth + 1)
        return Witness(inner.I | b, inner.I_M | b, inner.I_N)
    side = _side(m, n, 0, thr, seed)
    if trace is not None:
        trace.append({"depth": depth, "step": "side", "B": members(side.B), "theta": list(side.theta), "exact": side.exact})
    return Witness(side.B, 0, side.B)


def main_witness(
    m: Matroid, n: PartitionMatroid, *, thresholds: Thresholds | None = None, seed: int = 0, trace: list | None = None
) -> Witness:
    """A common independent I = I_M + I_N with span_M(I_M) | span_N(I_N) = E."""
    _check_pair(m, n)
    return _witness(m, n, thresholds or DEFAULTS, seed, trace, 0)


@dataclass
class WitnessReport:
    checks: dict[str, bool] = field(default_factory=dict)
    messages: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def fail(self, name: str, message: str) -> None:
        self.checks[name] = False
        self.messages.append(f"{name}: {message}")

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "messages": list(self.messages)}


def verify_witness(m: Matroid, n: PartitionMatroid, w: Witness) -> WitnessReport:
    """Check a witness and certify that its I is a maximum common independent set."""
    _check_pair(m, n)
    report = WitnessReport()
    ground = m.ground_mask
    stray = (w.I | w.I_M | w.I_N) & ~ground
    if stray:
        report.fail("ground", f"{fmt(stray)} outside the ground set")
        for name in ("bipartition", "independent_M", "independent_N", "span_cover", "optimality"):
            report.checks[name] = False
        return report
    report.checks["ground"] = True

    report.checks["bipartition"] = True
    if w.I_M & w.I_N:
        report.fail("bipartition", f"I_M and I_N share {fmt(w.I_M & w.I_N)}")
    if w.I_M | w.I_N != w.I:
        report.fail("bipartition", f"I_M | I_N = {fmt(w.I_M | w.I_N)} differs from I = {fmt(w.I)}")

    report.checks["independent_M"] = m._independent(w.I)
    if not report.checks["independent_M"]:
        report.messages.append(f"independent_M: {fmt(w.I)} is dependent in M")
    report.checks["independent_N"] = n._independent(w.I)
    if not report.checks["independent_N"]:
        report.messages.append(f"independent_N: {fmt(w.I)} is dependent in N")

    a = m._span(w.I_M)
    covered = a | n._span(w.I_N)
    report.checks["span_cover"] = covered == ground
    if covered != ground:
        report.messages.append(f"span_cover: {fmt(ground & ~covered)} spanned by neither side")

    total = m._rank(a) + n._rank(ground & ~a)
    report.checks["optimality"] = total == popcount(w.I)
    if total != popcount(w.I):
        report.messages.append(f"optimality: r_M(A) + r_N(E-A) = {total} but |I| = {popcount(w.I)}")
    return report
