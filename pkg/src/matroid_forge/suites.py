"""Desk-scale acceptance suites.

Each ``criterion_*`` function runs one property check end to end and
returns a :class:`CriterionResult`.  The CLI ``selftest`` subcommand and
``tests/test_acceptance.py`` both call these.

The exhaustive suites range over one matroid per isomorphism class (from
:mod:`matroid_forge.catalog`) and, for pairs, one partition matroid per
orbit of the matroid's automorphism group.  Every property checked is
invariant under relabeling the ground set, so this covers every labeled
instance.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .bits import iter_bits, members, popcount, submasks
from .catalog import matroids_up_to_isomorphism, partition_orbits, subset_orbit_minima
from .config import DEFAULTS, Thresholds
from .core import ExplicitMatroid, Matroid, Minor, check_axioms, direct_sum, dual
from .edmonds import brute_force_max_common, certify, max_common_independent
from .instances import build_matroid, build_partition, generate, suite_specs
from .intersection import (
    condition_report,
    extend_to_maximal,
    is_maximal_common,
    main_witness,
    theorem_side,
    verify_witness,
)
from .zoo import (
    PartitionMatroid,
    SetKind,
    UniformMatroid,
    classify_uniform,
    independent_or_spanning,
)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    summary: str
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)
    budget: float | None = None

    def line(self, timing: bool = True) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.number}. {self.name}: {self.summary}"
        if timing:
            text += f" ({self.seconds:.1f} s"
            text += f", budget {self.budget:.0f} s)" if self.budget is not None else ")"
        return text

    def to_dict(self, timing: bool = False) -> dict:
        out = {"number": self.number, "name": self.name, "passed": self.passed, "summary": self.summary, "failures": self.failures[:20]}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


class _Recorder:
    def __init__(self, limit: int = 50):
        self.failures: list[str] = []
        self.count = 0
        self.limit = limit

    def fail(self, message: str) -> None:
        self.count += 1
        if len(self.failures) < self.limit:
            self.failures.append(message)


def _finish(number: int, name: str, rec: _Recorder, summary: str, start: float, budget: float | None = None) -> CriterionResult:
    seconds = time.perf_counter() - start
    passed = rec.count == 0 and (budget is None or seconds <= budget)
    if budget is not None and seconds > budget:
        rec.failures.append(f"runtime {seconds:.1f} s exceeds the {budget:.0f} s budget")
    return CriterionResult(number, name, passed, f"{summary}, {rec.count} failures", seconds, rec.failures, budget)


# -- random instance suite -------------------------------------------------


@dataclass
class InstanceRecord:
    index: int
    family: str
    m: Matroid
    n: PartitionMatroid
    witness_size: int
    verified: bool
    messages: list[str]
    edmonds_size: int
    edmonds_certified: bool
    witness_certified: bool
    brute_size: int | None
    seconds: float


def instance_pairs(count: int, seed: int, max_elements: int = 20, max_parts: int = 5):
    for k, spec in enumerate(suite_specs(count, seed, max_elements, max_parts)):
        doc = generate(spec)
        yield k, spec.family, build_matroid(doc), build_partition(doc)


@lru_cache(maxsize=4)
def instance_records(count: int = 1000, seed: int = 0, thresholds: Thresholds = DEFAULTS, brute_limit: int = 14) -> tuple[InstanceRecord, ...]:
    """Run main_witness, the augmenting-path oracle and (when small) brute force on each instance."""
    out = []
    for k, family, m, n in instance_pairs(count, seed):
        t = time.perf_counter()
        w = main_witness(m, n, thresholds=thresholds, seed=seed + k)
        seconds = time.perf_counter() - t
        report = verify_witness(m, n, w)
        opt = max_common_independent(m, n)
        brute = popcount(brute_force_max_common(m, n)) if len(m) <= brute_limit else None
        out.append(
            InstanceRecord(
                k,
                family,
                m,
                n,
                w.size,
                report.ok,
                report.messages,
                opt.size,
                certify(m, n, opt.I_star, opt.A),
                certify(m, n, w.I, m._span(w.I_M)),
                brute,
                seconds,
            )
        )
    return tuple(out)


def criterion_witness_soundness(count: int = 1000, seed: int = 0, budget: float | None = 60.0) -> CriterionResult:
    start = time.perf_counter()
    records = instance_records(count, seed)
    rec = _Recorder()
    for r in records:
        if len(r.m) > 20 or r.n.n_parts > 5:
            rec.fail(f"instance {r.index} outside the size envelope")
        if not r.verified:
            rec.fail(f"instance {r.index} ({r.family}): " + "; ".join(r.messages))
    # the witness runs alone count against the budget, not the oracles
    witness_seconds = sum(r.seconds for r in records)
    biggest = max((len(r.m) for r in records), default=0)
    result = _finish(1, "witness soundness", rec, f"{len(records)} instances, |E| <= {biggest}", start, None)
    result.seconds = witness_seconds
    result.budget = budget
    if budget is not None and witness_seconds > budget:
        result.passed = False
        result.failures.append(f"runtime {witness_seconds:.1f} s exceeds the {budget:.0f} s budget")
    return result


def criterion_optimality(count: int = 1000, seed: int = 0) -> CriterionResult:
    start = time.perf_counter()
    records = instance_records(count, seed)
    rec = _Recorder()
    brute = 0
    for r in records:
        if r.witness_size != r.edmonds_size:
            rec.fail(f"instance {r.index}: |I| = {r.witness_size} but augmenting paths give {r.edmonds_size}")
        if not r.witness_certified:
            rec.fail(f"instance {r.index}: span_M(I_M) does not certify |I|")
        if not r.edmonds_certified:
            rec.fail(f"instance {r.index}: augmenting-path certificate fails")
        if r.brute_size is not None:
            brute += 1
            if r.brute_size != r.witness_size:
                rec.fail(f"instance {r.index}: brute force gives {r.brute_size}, witness {r.witness_size}")
    return _finish(2, "optimality", rec, f"{len(records)} instances, {brute} also brute-forced", start)


# -- exhaustive pair suite --------------------------------------------------


@lru_cache(maxsize=None)
def _popcounts(n: int) -> np.ndarray:
    return np.array([popcount(s) for s in range(1 << n)], dtype=np.int64)


def _indicator(n: int, family) -> np.ndarray:
    f = np.zeros(1 << n, dtype=bool)
    f[list(family)] = True
    return f


def common_indicator(n: int, family_indicator: np.ndarray, spec) -> np.ndarray:
    """Indicator over all masks of sets independent in M and in the partition matroid ``spec``."""
    pc = _popcounts(n)
    masks = np.arange(1 << n)
    out = family_indicator.copy()
    for part, cap in spec:
        out &= pc[masks & part] <= cap
    return out


def maximal_indicator(n: int, common: np.ndarray) -> np.ndarray:
    out = common.copy()
    for e in range(n):
        # axis 1 of the view is bit e: masks without e versus the same masks with e
        view = out.reshape(-1, 2, 1 << e)
        view[:, 0, :] &= ~common.reshape(-1, 2, 1 << e)[:, 1, :]
    return out


def exhaustive_pairs(max_elements: int, max_parts: int):
    """Every (matroid, partition matroid) pair up to isomorphism with at most the given sizes."""
    for size in range(max_elements + 1):
        for entry in matroids_up_to_isomorphism(size):
            for spec in partition_orbits(entry, max_parts):
                yield entry, spec


def criterion_lemmas(max_elements: int = 7, max_parts: int = 3, budget: float | None = 300.0) -> CriterionResult:
    """Extension to a maximal common independent set, and the span characterization of maximality."""
    start = time.perf_counter()
    rec = _Recorder()
    pairs = sets = 0
    for size in range(max_elements + 1):
        for entry in matroids_up_to_isomorphism(size):
            m = entry.matroid
            if not check_axioms(m.family, m.ground_mask).ok:
                rec.fail(f"catalog entry fails the axioms: {m.descriptor()}")
            fam = _indicator(size, m.family)
            for spec in partition_orbits(entry, max_parts):
                n = PartitionMatroid(spec)
                pairs += 1
                common = common_indicator(size, fam, spec)
                maximal = maximal_indicator(size, common).tolist()
                for s in subset_orbit_minima(entry, spec, np.flatnonzero(common)).tolist():
                    sets += 1
                    x = extend_to_maximal(m, n, s)
                    if x & s != s or not maximal[x]:
                        rec.fail(f"extend {members(s)} -> {members(x)} on {m.descriptor()} vs {spec}")
                    if maximal[s] and not is_maximal_common(m, n, s):
                        rec.fail(f"maximal {members(s)} has a part spanned in neither matroid: {m.descriptor()} vs {spec}")
    summary = f"{pairs} pairs and {sets} (pair, common independent set) triples up to isomorphism"
    return _finish(3, "lemma suite", rec, summary, start, budget)


# -- uniform matroids ----------------------------------------------------------


def exchange_uniform(m: Matroid) -> bool:
    """Swapping any member of an independent set for any outside element keeps it independent."""
    g = m.ground_mask
    for i in m.independent_sets():
        for eb in iter_bits(i):
            for fb in iter_bits(g & ~i):
                if not m._independent(i ^ eb | fb):
                    return False
    return True


def brute_uniform_class(m: Matroid) -> tuple[str, int | None]:
    g = m.ground_mask
    sizes_ok = {}
    for r in range(len(m) + 1):
        sizes_ok[r] = all(m._independent(s) == (popcount(s) <= r) for s in submasks(g))
    if sizes_ok[len(m)]:
        return "free", None
    for r, ok in sizes_ok.items():
        if ok:
            return "uniform", r
    return "not_uniform", None


def criterion_uniform(max_elements: int = 7) -> CriterionResult:
    start = time.perf_counter()
    rec = _Recorder()
    total = uniform = 0
    for size in range(max_elements + 1):
        for entry in matroids_up_to_isomorphism(size):
            m = entry.matroid
            total += 1
            by_exchange = exchange_uniform(m)
            kinds = [independent_or_spanning(m, s) for s in submasks(m.ground_mask)]
            by_trichotomy = SetKind.NEITHER not in kinds
            if by_exchange != by_trichotomy:
                rec.fail(f"exchange says {by_exchange}, independent-or-spanning says {by_trichotomy}: {m.descriptor()}")
            got = classify_uniform(m)
            kind, r = brute_uniform_class(m)
            uniform += kind != "not_uniform"
            if got.kind != kind or (kind == "uniform" and got.rank != r):
                rec.fail(f"classify_uniform {got.to_dict()} vs brute force {kind}/{r}: {m.descriptor()}")
            if (kind == "not_uniform") == by_exchange:
                rec.fail(f"brute classification {kind} disagrees with the exchange property: {m.descriptor()}")
            if got.kind == "not_uniform" and got.witness is not None:
                if independent_or_spanning(m, got.witness) is not SetKind.NEITHER:
                    rec.fail(f"witness {members(got.witness)} is independent or spanning: {m.descriptor()}")
    return _finish(4, "uniform characterization", rec, f"{total} matroids up to isomorphism, {uniform} uniform", start)


def criterion_closure(max_elements: int = 7) -> CriterionResult:
    start = time.perf_counter()
    rec = _Recorder()
    checked = 0
    for size in range(max_elements + 1):
        for entry in matroids_up_to_isomorphism(size):
            m = entry.matroid
            if classify_uniform(m).kind == "not_uniform":
                continue
            relatives = [("dual", dual(m))]
            for e in m.ground:
                relatives.append((f"delete {e}", ExplicitMatroid.from_matroid(Minor(m, 0, 1 << e))))
                relatives.append((f"contract {e}", ExplicitMatroid.from_matroid(Minor(m, 1 << e, 0))))
            for label, other in relatives:
                checked += 1
                if classify_uniform(other).kind == "not_uniform":
                    rec.fail(f"{label} of {m.descriptor()} is not uniform")
    return _finish(5, "structural closure", rec, f"{checked} duals and single-element minors of uniform matroids", start)


# -- kernel properties -----------------------------------------------------


def kernel_corpus(max_elements: int = 8, seed: int = 0) -> list[Matroid]:
    """Every matroid up to isomorphism below the catalog limit, plus zoo samples at ``max_elements``."""
    corpus: list[Matroid] = []
    top = min(max_elements, 7)
    for size in range(top + 1):
        corpus.extend(e.matroid for e in matroids_up_to_isomorphism(size))
    if max_elements > top:
        rng = random.Random(seed)
        n = max_elements
        for r in range(n + 1):
            corpus.append(UniformMatroid((1 << n) - 1, r))
        for k in range(24):
            family = ("graphic", "linear_gf2", "explicit")[k % 3]
            spec_seed = rng.getrandbits(32)
            doc = generate(_kernel_spec(family, spec_seed, n, rng))
            corpus.append(build_matroid(doc))
    return corpus


def _kernel_spec(family: str, seed: int, n: int, rng: random.Random):
    from .instances import GeneratorSpec

    if family == "graphic":
        return GeneratorSpec(seed, family, elements=n, parts=1, vertices=rng.randint(4, 6), edge_prob=0.9)
    if family == "linear_gf2":
        return GeneratorSpec(seed, family, elements=n, parts=1, dim=rng.randint(2, 5))
    return GeneratorSpec(seed, family, elements=n, parts=1, rank=rng.randint(1, 4))


def check_kernel(m: Matroid, rec: _Recorder) -> None:
    g = m.ground_mask
    subsets = list(submasks(g))
    span = {x: m._span(x) for x in subsets}
    rank = {x: m._rank(x) for x in subsets}
    where = repr(m) if not isinstance(m, ExplicitMatroid) else str(m.descriptor())
    for x in subsets:
        sx = span[x]
        if sx & x != x:
            rec.fail(f"span not extensive at {members(x)}: {where}")
        if span[sx] != sx:
            rec.fail(f"span not idempotent at {members(x)}: {where}")
        # literal definition: e is spanned iff {e} is dependent after contracting x
        contracted = Minor(m, x, 0)
        literal = x
        for b in iter_bits(g & ~x):
            if not contracted._independent(b):
                literal |= b
        if literal != sx:
            rec.fail(f"rank-comparison span differs from the contraction definition at {members(x)}: {where}")
    for x, y in itertools.product(subsets, repeat=2):
        if x & y == x and span[x] & span[y] != span[x]:
            rec.fail(f"span not monotone at {members(x)} <= {members(y)}: {where}")
        if rank[x | y] + rank[x & y] > rank[x] + rank[y]:
            rec.fail(f"rank not submodular at {members(x)}, {members(y)}: {where}")
    _check_minors(m, rec, where)
    if isinstance(m, ExplicitMatroid):
        d = dual(m)
        if dual(d) != m:
            rec.fail(f"dual is not an involution: {where}")
        bases = set(m.bases())
        if {g & ~b for b in d.bases()} != bases:
            rec.fail(f"dual bases are not complements of bases: {where}")


def _predicate(m: Matroid) -> frozenset[int]:
    return frozenset(s for s in submasks(m.ground_mask) if m._independent(s))


def _check_minors(m: Matroid, rec: _Recorder, where: str) -> None:
    g = m.ground_mask
    for x in submasks(g):
        # every basis of x induces the same contraction
        bases = [b for b in submasks(x) if m._independent(b) and popcount(b) == m._rank(x)]
        reference = _predicate(Minor(m, x, 0))
        for b in bases:
            if _predicate(Minor(m, x, 0, contracted_basis=b)) != reference:
                rec.fail(f"contraction by {members(x)} depends on the basis {members(b)}: {where}")
        for y in submasks(g & ~x):
            one = Minor(Minor(m, x, 0), 0, y)
            other = Minor(Minor(m, 0, y), x, 0)
            if _predicate(one) != _predicate(other) or _predicate(one) != _predicate(Minor(m, x, y)):
                rec.fail(f"contracting {members(x)} and deleting {members(y)} do not commute: {where}")


def _shifted(m: Matroid, k: int) -> ExplicitMatroid:
    return ExplicitMatroid(m.ground_mask << k, [s << k for s in m.independent_sets()], validate=False)


def check_direct_sums(corpus: list[Matroid], max_elements: int, rec: _Recorder, pairs: int = 60, seed: int = 0) -> int:
    """Rank of a direct sum is the sum of the ranks, on random pairs from the corpus."""
    rng = random.Random(seed)
    done = 0
    while done < pairs:
        a, b = rng.choice(corpus), rng.choice(corpus)
        if len(a) + len(b) > max_elements:
            continue
        k = b.ground_mask.bit_length()
        total = direct_sum([b, _shifted(a, k)])
        for s in submasks(total.ground_mask):
            if total._rank(s) != b._rank(s & b.ground_mask) + a._rank(s >> k):
                rec.fail(f"direct-sum rank not additive at {members(s)}: {b!r} + {a!r}")
                break
        done += 1
    return done


def criterion_kernel(max_elements: int = 8, seed: int = 0) -> CriterionResult:
    start = time.perf_counter()
    rec = _Recorder()
    corpus = kernel_corpus(max_elements, seed)
    for m in corpus:
        check_kernel(m, rec)
    sums = check_direct_sums(corpus, max_elements, rec, seed=seed)
    sizes = sorted({len(m) for m in corpus})
    return _finish(6, "kernel properties", rec, f"{len(corpus)} matroids on {sizes[0]}..{sizes[-1]} elements, {sums} direct sums", start)


# -- side theorem ----------------------------------------------------------


def condition_holds_brute(n: int, family_indicator: np.ndarray, common: np.ndarray, spec) -> bool:
    """No nonempty union of parts W has a base of M restricted to W that is independent in N."""
    pc = _popcounts(n)
    masks = np.arange(1 << n)
    for code in range(1, 1 << len(spec)):
        w = 0
        for k, (part, _) in enumerate(spec):
            if code >> k & 1:
                w |= part
        inside = (masks & ~w) == 0
        if pc[inside & family_indicator].max() == pc[inside & common].max():
            return False
    return True


def random_common(m: Matroid, n: PartitionMatroid, rng: random.Random) -> int:
    order = list(iter_bits(m.ground_mask))
    rng.shuffle(order)
    j = 0
    for b in order:
        if rng.random() < 0.5 and m._independent(j | b) and n._independent(j | b):
            j |= b
    return j


def side_postconditions(m: Matroid, n: PartitionMatroid, j: int, b: int) -> list[str]:
    problems = []
    if not m._independent(b):
        problems.append(f"B={members(b)} is dependent in M")
    if not n._independent(b) or n._rank(b) != n._rank(n.ground_mask):
        problems.append(f"B={members(b)} is not a base of N")
    if not m._spans(b, j):
        problems.append(f"J={members(j)} is not inside span_M(B={members(b)})")
    return problems


def criterion_side(
    count: int = 1000,
    seed: int = 0,
    max_elements: int = 7,
    max_parts: int = 3,
    thresholds: Thresholds = DEFAULTS,
) -> CriterionResult:
    start = time.perf_counter()
    rec = _Recorder()
    rng = random.Random(seed)
    random_hits = exhaustive_hits = inexact = 0
    for r in instance_records(count, seed):
        if not condition_report(r.m, r.n).holds:
            continue
        random_hits += 1
        j = random_common(r.m, r.n, rng)
        side = theorem_side(r.m, r.n, j, thresholds=thresholds, seed=seed + r.index)
        inexact += not side.exact
        for p in side_postconditions(r.m, r.n, j, side.B):
            rec.fail(f"random instance {r.index}: {p}")
    for size in range(max_elements + 1):
        for entry in matroids_up_to_isomorphism(size):
            m = entry.matroid
            fam = _indicator(size, m.family)
            for spec in partition_orbits(entry, max_parts):
                common = common_indicator(size, fam, spec)
                if not condition_holds_brute(size, fam, common, spec):
                    continue
                n = PartitionMatroid(spec)
                exhaustive_hits += 1
                j = rng.choice(np.flatnonzero(common).tolist())
                side = theorem_side(m, n, j, thresholds=thresholds, seed=seed)
                for p in side_postconditions(m, n, j, side.B):
                    rec.fail(f"{m.descriptor()} vs {spec}: {p}")
    summary = (
        f"{random_hits} random and {exhaustive_hits} exhaustive instances satisfying the condition"
        f" ({inexact} used the heuristic search)"
    )
    return _finish(7, "side theorem postconditions", rec, summary, start)


# -- CLI determinism ---------------------------------------------------------


def determinism_invocations(workdir: str) -> list[list[str]]:
    inst = f"{workdir}/instance.json"
    small = f"{workdir}/small.json"
    return [
        ["gen", "--seed", "7", "--family", "graphic", "--elements", "12", "--parts", "3", "--output", inst],
        ["gen", "--seed", "11", "--family", "explicit", "--elements", "6", "--output", small],
        ["gen", "--seed", "11", "--family", "explicit", "--elements", "6"],
        ["intersect", "--input", inst],
        ["intersect", "--input", inst, "--trace", "--format", "text"],
        ["intersect", "--input", inst, "--trace", "--threshold-theta", "4", "--seed", "3"],
        ["edmonds", "--input", inst],
        ["verify", "--input", inst],
        ["check-axioms", "--input", small],
        ["edmonds", "--input", small, "--brute", "--trace"],
        ["classify-uniform", "--input", inst],
        ["selftest", "--quick"],
    ]


def criterion_determinism(workdir: str, runs: int = 2, python: str | None = None) -> CriterionResult:
    """Run each CLI invocation several times in fresh interpreters and compare the bytes."""
    import os
    import subprocess
    import sys

    start = time.perf_counter()
    rec = _Recorder()
    python = python or sys.executable
    invocations = determinism_invocations(workdir)
    for argv in invocations:
        outputs = []
        for k in range(runs):
            env = dict(os.environ, PYTHONHASHSEED=str(k * 7919 + 1))
            proc = subprocess.run([python, "-m", "matroid_forge", *argv], capture_output=True, env=env, cwd=workdir)
            outputs.append((proc.returncode, proc.stdout))
            if proc.returncode not in (0, 2):
                rec.fail(f"{' '.join(argv)} exited {proc.returncode}: {proc.stderr.decode(errors='replace')[-300:]}")
        if any(o != outputs[0] for o in outputs[1:]):
            rec.fail(f"{' '.join(argv)} produced different output across runs")
    return _finish(8, "CLI determinism", rec, f"{len(invocations)} invocations x {runs} runs", start)


# -- everything ------------------------------------------------------------------


def quick_criteria() -> list[Callable[[], CriterionResult]]:
    """Reduced-size versions of criteria 1-7 for a fast smoke run."""
    return [
        lambda: criterion_witness_soundness(count=60, budget=None),
        lambda: criterion_optimality(count=60),
        lambda: criterion_lemmas(max_elements=4, budget=None),
        lambda: criterion_uniform(max_elements=5),
        lambda: criterion_closure(max_elements=5),
        lambda: criterion_kernel(max_elements=4),
        lambda: criterion_side(count=60, max_elements=4),
    ]


def full_criteria() -> list[Callable[[], CriterionResult]]:
    return [
        criterion_witness_soundness,
        criterion_optimality,
        criterion_lemmas,
        criterion_uniform,
        criterion_closure,
        criterion_kernel,
        criterion_side,
    ]
