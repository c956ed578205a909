"""All matroids on small ground sets, up to isomorphism.

Every matroid on ``{0..n-1}`` is a single-element extension of its deletion
of ``n-1``, and single-element extensions correspond to modular cuts of the
lattice of flats.  Extending every representative on ``n-1`` elements by
every modular cut and keeping one matroid per canonical form gives the full
list on ``n`` elements.  Canonical forms minimize the permuted independence
indicator over all ``n!`` relabelings, which caps this at about 7 elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .bits import iter_bits, popcount
from .core import ExplicitMatroid
from .errors import CapacityError

MAX_ELEMENTS = 7


@dataclass(frozen=True)
class CatalogEntry:
    matroid: ExplicitMatroid
    # each automorphism maps element e to perm[e]
    automorphisms: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=None)
def _perm_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``(perms, inverse_images)``: ``inverse_images[k, m]`` is the preimage of mask m under perm k."""
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    masks = np.arange(1 << n, dtype=np.int64)
    member = (masks[:, None] >> np.arange(n)) & 1
    inverse = np.argsort(perms, axis=1)
    images_inv = member @ (np.int64(1) << inverse).T
    return perms, np.ascontiguousarray(images_inv.T)


def _indicator(n: int, family) -> np.ndarray:
    f = np.zeros(1 << n, dtype=bool)
    f[list(family)] = True
    return f


def canonical_form(n: int, family) -> tuple[bytes, list[tuple[int, ...]]]:
    """Canonical key of a family on range(n) and the permutations fixing it."""
    perms, pre = _perm_tables(n)
    f = _indicator(n, family)
    images = f[pre]
    packed = np.packbits(images, axis=1)
    best = np.lexsort(packed.T[::-1])[0]
    fixed = np.flatnonzero((images == f).all(axis=1))
    return packed[best].tobytes(), [tuple(int(x) for x in perms[k]) for k in fixed]


def _flats(m: ExplicitMatroid) -> list[int]:
    return sorted({m._span(s) for s in range(m.ground_mask + 1) if not s & ~m.ground_mask})


def modular_cuts(m: ExplicitMatroid) -> Iterator[frozenset[int]]:
    """All modular cuts of the lattice of flats, the empty cut included.

    Modular cuts are the closed sets of a closure operator (close upward,
    then add the meet of every modular pair inside), so they are listed
    with Ganter's next-closure walk.
    """
    flats = _flats(m)
    size = len(flats)
    rank = [m._rank(f) for f in flats]
    index = {f: k for k, f in enumerate(flats)}
    up = [1 << k for k in range(size)]
    partners: list[list[tuple[int, int]]] = [[] for _ in flats]
    for a, b in itertools.combinations(range(size), 2):
        fa, fb = flats[a], flats[b]
        if fa & fb == fa:
            up[a] |= 1 << b
        elif fa & fb == fb:
            up[b] |= 1 << a
        else:
            meet = index.get(fa & fb)
            if meet is not None and rank[a] + rank[b] == m._rank(fa | fb) + rank[meet]:
                partners[a].append((1 << b, meet))
                partners[b].append((1 << a, meet))

    def close(seed: int) -> int:
        cut = 0
        todo = seed
        while todo:
            low = todo & -todo
            todo ^= low
            k = low.bit_length() - 1
            if cut >> k & 1:
                continue
            fresh = up[k] & ~cut
            cut |= fresh
            todo |= fresh
            for kb in iter_bits(fresh):
                for other, meet in partners[kb.bit_length() - 1]:
                    if cut & other and not cut >> meet & 1:
                        todo |= 1 << meet
        return cut

    def as_flats(cut: int) -> frozenset[int]:
        return frozenset(flats[b.bit_length() - 1] for b in iter_bits(cut))

    cut = close(0)
    while True:
        yield as_flats(cut)
        for i in range(size - 1, -1, -1):
            if cut >> i & 1:
                continue
            below = (1 << i) - 1
            nxt = close(cut & below | 1 << i)
            if nxt & below == cut & below:
                cut = nxt
                break
        else:
            return


def extend(m: ExplicitMatroid, cut: frozenset[int]) -> ExplicitMatroid:
    """Add element ``len(m)`` so that it lies in the closure of exactly the flats in ``cut``."""
    p = 1 << len(m.ground)
    family = set(m.family)
    for s in m.family:
        if m._span(s) not in cut:
            family.add(s | p)
    return ExplicitMatroid(m.ground_mask | p, family, validate=False)


@lru_cache(maxsize=None)
def matroids_up_to_isomorphism(n: int) -> tuple[CatalogEntry, ...]:
    """One representative per isomorphism class of matroids on range(n)."""
    if not 0 <= n <= MAX_ELEMENTS:
        raise CapacityError(f"catalog covers 0..{MAX_ELEMENTS} elements, got {n}")
    if n == 0:
        empty = ExplicitMatroid(0, [0])
        return (CatalogEntry(empty, ((),)),)
    seen: dict[bytes, CatalogEntry] = {}
    for entry in matroids_up_to_isomorphism(n - 1):
        for cut in modular_cuts(entry.matroid):
            ext = extend(entry.matroid, cut)
            key, autos = canonical_form(n, ext.family)
            if key not in seen:
                ext.validated = True
                seen[key] = CatalogEntry(ext, tuple(autos))
    return tuple(seen[k] for k in sorted(seen))


def set_partitions(n: int, max_blocks: int) -> Iterator[list[int]]:
    """Partitions of range(n) into at most ``max_blocks`` nonempty blocks, as block masks ordered by least element."""

    def rec(e: int, blocks: list[int]) -> Iterator[list[int]]:
        if e == n:
            yield list(blocks)
            return
        for k in range(len(blocks)):
            blocks[k] |= 1 << e
            yield from rec(e + 1, blocks)
            blocks[k] &= ~(1 << e)
        if len(blocks) < max_blocks:
            blocks.append(1 << e)
            yield from rec(e + 1, blocks)
            blocks.pop()

    return rec(0, [])


def partition_specs(n: int, max_blocks: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every partition matroid on range(n) with at most ``max_blocks`` parts, as ``((mask, cap), ...)``."""
    for blocks in set_partitions(n, max_blocks):
        for caps in itertools.product(*(range(popcount(b) + 1) for b in blocks)):
            yield tuple(zip(blocks, caps))


@lru_cache(maxsize=None)
def _spec_table(n: int, max_blocks: int) -> tuple[list, np.ndarray, np.ndarray]:
    specs = list(partition_specs(n, max_blocks))
    masks = np.zeros((len(specs), max_blocks), dtype=np.int64)
    caps = np.zeros((len(specs), max_blocks), dtype=np.int64)
    for row, spec in enumerate(specs):
        for col, (mask, cap) in enumerate(spec):
            masks[row, col] = mask
            caps[row, col] = cap
    return specs, masks, caps


def _images(n: int, perms: np.ndarray) -> np.ndarray:
    """``out[k, m]`` is the image of mask m under ``perms[k]``."""
    masks = np.arange(1 << n, dtype=np.int64)
    member = (masks[:, None] >> np.arange(n)) & 1
    return np.ascontiguousarray((member @ (np.int64(1) << perms).T).T)


def generators(group: Sequence[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """A small generating set of a permutation group given by all its elements."""
    if not group:
        return []
    n = len(group[0])
    span = {tuple(range(n))}
    gens: list[tuple[int, ...]] = []
    for g in group:
        if g in span:
            continue
        gens.append(g)
        frontier = list(span)
        while frontier:
            nxt = []
            for h in frontier:
                for x in gens:
                    hx = tuple(x[h[e]] for e in range(n))
                    if hx not in span:
                        span.add(hx)
                        nxt.append(hx)
            frontier = nxt
    return gens


def _spec_keys(n: int, masks: np.ndarray, caps: np.ndarray) -> np.ndarray:
    packed = np.sort(masks << 4 | caps, axis=1)
    key = np.zeros(len(packed), dtype=np.int64)
    for col in range(packed.shape[1]):
        key = key << (4 + n) | packed[:, col]
    return key


def partition_orbits(entry: CatalogEntry, max_blocks: int) -> list[tuple[tuple[int, int], ...]]:
    """Partition matroids on the entry's ground, one per orbit of its automorphism group.

    Each generator of the group permutes the list of specs; propagating the
    least index along those permutations until nothing changes labels every
    orbit by its first member, which is kept as the representative.
    """
    n = len(entry.matroid)
    specs, masks, caps = _spec_table(n, max_blocks)
    gens = generators(entry.automorphisms)
    if not gens:
        return list(specs)
    keys = _spec_keys(n, masks, caps)
    order = np.argsort(keys)
    images = _images(n, np.array(gens, dtype=np.int64))
    moves = [order[np.searchsorted(keys, _spec_keys(n, img[masks], caps), sorter=order)] for img in images]
    label = np.arange(len(specs))
    while True:
        before = label
        for move in moves:
            label = np.minimum(label, label[move])
        if np.array_equal(label, before):
            break
    return [specs[k] for k in np.flatnonzero(label == np.arange(len(specs)))]


@lru_cache(maxsize=512)
def automorphism_images(entry: CatalogEntry) -> np.ndarray:
    """``out[k, m]`` is the image of mask m under the k-th automorphism of the entry."""
    n = len(entry.matroid)
    return _images(n, np.array(entry.automorphisms, dtype=np.int64).reshape(-1, n))


def _spec_arrays(spec, width: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.zeros((1, width), dtype=np.int64)
    caps = np.zeros((1, width), dtype=np.int64)
    for col, (mask, cap) in enumerate(spec):
        masks[0, col] = mask
        caps[0, col] = cap
    return masks, caps


def subset_orbit_minima(entry: CatalogEntry, spec, subsets: np.ndarray) -> np.ndarray:
    """The members of ``subsets`` that are least in their orbit under the automorphisms fixing ``spec``.

    ``subsets`` must be closed under those automorphisms (the common
    independent sets of the pair are).
    """
    if len(entry.automorphisms) == 1:
        return subsets
    images = automorphism_images(entry)
    n = len(entry.matroid)
    masks, caps = _spec_arrays(spec, max(1, len(spec)))
    key = _spec_keys(n, masks, caps)[0]
    moved = np.sort(images[:, masks[0]] << 4 | caps[0], axis=1)
    keys = np.zeros(len(images), dtype=np.int64)
    for col in range(moved.shape[1]):
        keys = keys << (4 + n) | moved[:, col]
    stabilizer = images[keys == key]
    return subsets[stabilizer[:, subsets].min(axis=0) == subsets]
