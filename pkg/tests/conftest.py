"""Shared fixtures, brute-force oracles and hypothesis strategies."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from matroid_forge.bits import members, popcount, submasks
from matroid_forge.catalog import matroids_up_to_isomorphism
from matroid_forge.core import ExplicitMatroid, Matroid
from matroid_forge.zoo import GraphicMatroid, LinearMatroidGF2, PartitionMatroid, UniformMatroid

# triangle on vertices a, b, c with edges e01 < e12 < e20
E01, E12, E20 = 0, 1, 2
TRIANGLE_EDGES = [(E01, "a", "b"), (E12, "b", "c"), (E20, "c", "a")]

# two parallel edges e1, e2 between u and v, then e3 from v to w
MULTIGRAPH_EDGES = [(0, "u", "v"), (1, "u", "v"), (2, "v", "w")]


def triangle() -> GraphicMatroid:
    return GraphicMatroid(TRIANGLE_EDGES)


def multigraph() -> GraphicMatroid:
    return GraphicMatroid(MULTIGRAPH_EDGES)


def full(n: int) -> int:
    return (1 << n) - 1


# -- brute-force oracles (share nothing with the library beyond the independence predicate)


def brute_family(m: Matroid) -> set[int]:
    return {s for s in submasks(m.ground_mask) if m.is_independent(s)}


def brute_rank(m: Matroid, x: int) -> int:
    return max(popcount(s) for s in submasks(x) if m.is_independent(s))


def brute_span(m: Matroid, x: int) -> int:
    r = brute_rank(m, x)
    return x | sum(1 << e for e in m.ground if brute_rank(m, x | 1 << e) == r and not x >> e & 1)


def brute_max_common(m: Matroid, n: Matroid) -> int:
    return max(popcount(s) for s in submasks(m.ground_mask) if m.is_independent(s) and n.is_independent(s))


def brute_maximal_common(m: Matroid, n: Matroid, i: int) -> bool:
    return all(
        not (m.is_independent(i | 1 << e) and n.is_independent(i | 1 << e)) for e in m.ground if not i >> e & 1
    )


def gf2_independent(vectors: list[tuple[int, ...]]) -> bool:
    """No nonempty subfamily sums to zero."""
    for k in range(1, len(vectors) + 1):
        for combo in itertools.combinations(vectors, k):
            if all(sum(col) % 2 == 0 for col in zip(*combo)):
                return False
    return True


def relabel(family, perm) -> list[int]:
    out = []
    for s in family:
        t = 0
        for e in members(s):
            t |= 1 << perm[e]
        out.append(t)
    return out


# -- strategies -------------------------------------------------------------------


@st.composite
def graphic_matroids(draw, max_edges: int = 8):
    k = draw(st.integers(0, max_edges))
    vertices = draw(st.integers(1, 5))
    ends = draw(st.lists(st.tuples(st.integers(0, vertices - 1), st.integers(0, vertices - 1)), min_size=k, max_size=k))
    return GraphicMatroid((e, u, v) for e, (u, v) in enumerate(ends))


@st.composite
def linear_matroids(draw, max_columns: int = 8):
    k = draw(st.integers(0, max_columns))
    dim = draw(st.integers(1, 4))
    cols = draw(st.lists(st.lists(st.integers(0, 1), min_size=dim, max_size=dim), min_size=k, max_size=k))
    return LinearMatroidGF2(dim, enumerate(cols))


@st.composite
def uniform_matroids(draw, max_elements: int = 8):
    n = draw(st.integers(0, max_elements))
    return UniformMatroid(full(n), draw(st.integers(0, n)))


@st.composite
def catalog_matroids(draw, max_elements: int = 6):
    n = draw(st.integers(0, max_elements))
    entries = matroids_up_to_isomorphism(n)
    entry = entries[draw(st.integers(0, len(entries) - 1))]
    perm = draw(st.permutations(list(range(n))))
    return ExplicitMatroid(full(n), relabel(entry.matroid.family, perm))


def any_matroid(max_elements: int = 8):
    return st.one_of(
        graphic_matroids(max_elements),
        linear_matroids(max_elements),
        uniform_matroids(max_elements),
        catalog_matroids(min(max_elements, 6)),
    )


@st.composite
def partition_for(draw, ground: int, max_parts: int = 4):
    elems = members(ground)
    if not elems:
        return PartitionMatroid([])
    k = draw(st.integers(1, min(max_parts, len(elems))))
    labels = draw(st.lists(st.integers(0, k - 1), min_size=len(elems), max_size=len(elems)))
    groups = [[e for e, lab in zip(elems, labels) if lab == i] for i in range(k)]
    groups = [g for g in groups if g]
    return PartitionMatroid((g, draw(st.integers(0, len(g)))) for g in groups)


@st.composite
def instances(draw, max_elements: int = 8, max_parts: int = 4):
    m = draw(any_matroid(max_elements))
    return m, draw(partition_for(m.ground_mask, max_parts))
