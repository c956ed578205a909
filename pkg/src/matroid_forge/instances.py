"""JSON instance documents and seeded instance generators.

Document layout::

    {"elements": [0, 1, ...],
     "M": {"type": "uniform", "rank": 2}
        | {"type": "graphic", "edges": [[id, u, v], ...]}
        | {"type": "linear_gf2", "dim": 3, "columns": [[id, [0, 1, 1]], ...]}
        | {"type": "explicit", "independent_sets": [[], [0], ...]},
     "N": {"parts": [{"elements": [...], "cap": 1}, ...]},
     "witness": {"I": [...], "I_M": [...], "I_N": [...]}}   # optional
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass

import jsonschema

from .bits import bits, members, popcount
from .core import ExplicitMatroid, Matroid, check_axioms
from .errors import ArgumentError, InstanceError, InvalidMatroidError, MatroidError
from .zoo import GraphicMatroid, LinearMatroidGF2, PartitionMatroid, UniformMatroid

_ELEMENT = {"type": "integer", "minimum": 0}
_ELEMENTS = {"type": "array", "items": _ELEMENT}

SCHEMA = {
    "type": "object",
    "required": ["elements", "M", "N"],
    "properties": {
        "elements": _ELEMENTS,
        "M": {
            "type": "object",
            "required": ["type"],
            "properties": {"type": {"enum": ["uniform", "graphic", "linear_gf2", "explicit"]}},
            "allOf": [
                {
                    "if": {"properties": {"type": {"const": "uniform"}}},
                    "then": {"required": ["rank"], "properties": {"rank": {"type": "integer", "minimum": 0}}},
                },
                {
                    "if": {"properties": {"type": {"const": "graphic"}}},
                    "then": {
                        "required": ["edges"],
                        "properties": {
                            "edges": {
                                "type": "array",
                                "items": {"type": "array", "prefixItems": [_ELEMENT, {"type": "integer"}, {"type": "integer"}], "minItems": 3, "maxItems": 3},
                            }
                        },
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "linear_gf2"}}},
                    "then": {
                        "required": ["dim", "columns"],
                        "properties": {
                            "dim": {"type": "integer", "minimum": 0},
                            "columns": {
                                "type": "array",
                                "items": {
                                    "type": "array",
                                    "prefixItems": [_ELEMENT, {"type": "array", "items": {"enum": [0, 1]}}],
                                    "minItems": 2,
                                    "maxItems": 2,
                                },
                            },
                        },
                    },
                },
                {
                    "if": {"properties": {"type": {"const": "explicit"}}},
                    "then": {
                        "required": ["independent_sets"],
                        "properties": {"independent_sets": {"type": "array", "items": _ELEMENTS}},
                    },
                },
            ],
        },
        "N": {
            "type": "object",
            "required": ["parts"],
            "properties": {
                "parts": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["elements", "cap"],
                        "properties": {"elements": _ELEMENTS, "cap": {"type": "integer", "minimum": 0}},
                    },
                }
            },
        },
        "witness": {
            "type": "object",
            "required": ["I", "I_M", "I_N"],
            "properties": {"I": _ELEMENTS, "I_M": _ELEMENTS, "I_N": _ELEMENTS},
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def load_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("$", f"not valid JSON: {exc}") from None
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        err = errors[0]
        raise InstanceError(_path(err.absolute_path), err.message)
    return doc


def _distinct(values, path: str) -> int:
    seen = set()
    for k, v in enumerate(values):
        if v in seen:
            raise InstanceError(f"{path}[{k}]", f"duplicate element {v}")
        seen.add(v)
    return bits(values)


def build_matroid(doc: dict) -> Matroid:
    ground = _distinct(doc["elements"], "$.elements")
    spec = doc["M"]
    kind = spec["type"]
    if kind == "uniform":
        if spec["rank"] > popcount(ground):
            raise InstanceError("$.M.rank", f"rank {spec['rank']} exceeds {popcount(ground)} elements")
        return UniformMatroid(ground, spec["rank"])
    if kind == "graphic":
        ids = [e[0] for e in spec["edges"]]
        if _distinct(ids, "$.M.edges") != ground:
            raise InstanceError("$.M.edges", "edge ids must be exactly the elements")
        return GraphicMatroid((e, u, v) for e, u, v in spec["edges"])
    if kind == "linear_gf2":
        ids = [c[0] for c in spec["columns"]]
        if _distinct(ids, "$.M.columns") != ground:
            raise InstanceError("$.M.columns", "column ids must be exactly the elements")
        for k, (_, vec) in enumerate(spec["columns"]):
            if len(vec) != spec["dim"]:
                raise InstanceError(f"$.M.columns[{k}]", f"vector length {len(vec)} differs from dim {spec['dim']}")
        return LinearMatroidGF2(spec["dim"], ((e, vec) for e, vec in spec["columns"]))
    # explicit
    family = []
    for k, s in enumerate(spec["independent_sets"]):
        mask = _distinct(s, f"$.M.independent_sets[{k}]")
        if mask & ~ground:
            raise InstanceError(f"$.M.independent_sets[{k}]", f"elements {members(mask & ~ground)} are not in $.elements")
        family.append(mask)
    report = check_axioms(family, ground, threshold=None)
    if not report.ok:
        raise InvalidMatroidError(f"$.M.independent_sets: not a matroid: {report.summary()}", report)
    m = ExplicitMatroid(ground, family, validate=False)
    m.validated = True
    return m


def build_partition(doc: dict) -> PartitionMatroid:
    ground = bits(doc["elements"])
    covered = 0
    parts = []
    for k, part in enumerate(doc["N"]["parts"]):
        where = f"$.N.parts[{k}]"
        mask = _distinct(part["elements"], f"{where}.elements")
        if not mask:
            raise InstanceError(f"{where}.elements", "parts must be nonempty")
        if mask & covered:
            raise InstanceError(f"{where}.elements", f"overlaps earlier parts in {members(mask & covered)}")
        if mask & ~ground:
            raise InstanceError(f"{where}.elements", f"elements {members(mask & ~ground)} are not in $.elements")
        if part["cap"] > popcount(mask):
            raise InstanceError(f"{where}.cap", f"cap {part['cap']} exceeds part size {popcount(mask)}")
        covered |= mask
        parts.append((mask, part["cap"]))
    if covered != ground:
        raise InstanceError("$.N.parts", f"elements {members(ground & ~covered)} belong to no part")
    return PartitionMatroid(parts)


def parse_instance(text: str) -> tuple[Matroid, PartitionMatroid]:
    doc = load_document(text)
    return build_matroid(doc), build_partition(doc)


def to_document(m: Matroid, n: PartitionMatroid) -> dict:
    return {"elements": list(m.ground), "M": m.descriptor(), "N": n.descriptor()}


def serialize_instance(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True)


# -- generators -----------------------------------------------------------

FAMILIES = ("graphic", "linear_gf2", "uniform", "explicit")


@dataclass(frozen=True)
class GeneratorBounds:
    elements: int = 24
    explicit_elements: int = 10
    parts: int = 8
    vertices: int = 16
    dim: int = 16


BOUNDS = GeneratorBounds()


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of one random instance; identical specs give identical documents.

    ``elements`` is the ground size (for graphic instances, the cap on the
    number of edges kept).  ``rank`` fixes the uniform or explicit rank;
    ``max_cap`` bounds the part caps.
    """

    seed: int
    family: str = "graphic"
    elements: int = 8
    parts: int = 3
    vertices: int = 5
    edge_prob: float = 0.5
    dim: int = 3
    rank: int | None = None
    max_cap: int | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _check_bounds(spec: GeneratorSpec, bounds: GeneratorBounds) -> None:
    problems = []
    if spec.family not in FAMILIES:
        problems.append(f"family must be one of {', '.join(FAMILIES)}")
    limit = bounds.explicit_elements if spec.family == "explicit" else bounds.elements
    if not 0 <= spec.elements <= limit:
        problems.append(f"elements must be in [0, {limit}]")
    if not 0 <= spec.parts <= bounds.parts:
        problems.append(f"parts must be in [0, {bounds.parts}]")
    if not 1 <= spec.vertices <= bounds.vertices:
        problems.append(f"vertices must be in [1, {bounds.vertices}]")
    if not 0.0 <= spec.edge_prob <= 1.0:
        problems.append("edge_prob must be in [0, 1]")
    if not 0 <= spec.dim <= bounds.dim:
        problems.append(f"dim must be in [0, {bounds.dim}]")
    if spec.rank is not None and not 0 <= spec.rank <= spec.elements:
        problems.append("rank must be in [0, elements]")
    if spec.max_cap is not None and spec.max_cap < 0:
        problems.append("max_cap must be non-negative")
    if problems:
        raise ArgumentError("; ".join(problems))


def _graphic(rng: random.Random, spec: GeneratorSpec) -> tuple[int, dict]:
    pairs = []
    for u, v in itertools.combinations(range(spec.vertices), 2):
        if rng.random() < spec.edge_prob:
            pairs.append((u, v))
            if rng.random() < spec.edge_prob / 4:
                pairs.append((u, v))
    for u in range(spec.vertices):
        if rng.random() < 0.03:
            pairs.append((u, u))
    rng.shuffle(pairs)
    pairs = pairs[: spec.elements]
    return len(pairs), {"type": "graphic", "edges": [[k, u, v] for k, (u, v) in enumerate(pairs)]}


def _linear(rng: random.Random, spec: GeneratorSpec) -> tuple[int, dict]:
    cols = [[k, [rng.randint(0, 1) for _ in range(spec.dim)]] for k in range(spec.elements)]
    return spec.elements, {"type": "linear_gf2", "dim": spec.dim, "columns": cols}


def _uniform(rng: random.Random, spec: GeneratorSpec) -> tuple[int, dict]:
    r = spec.rank if spec.rank is not None else rng.randint(0, spec.elements)
    return spec.elements, {"type": "uniform", "rank": r}


def sparse_paving_family(rng: random.Random, n: int, r: int, density: float = 0.5) -> list[int]:
    """Independent sets of a random sparse paving matroid of rank r on range(n).

    Some r-subsets, pairwise sharing at most r-2 elements, are declared
    dependent (circuit-hyperplanes); every other set of size <= r is independent.
    """
    candidates = [bits(c) for c in itertools.combinations(range(n), r)]
    rng.shuffle(candidates)
    chosen: list[int] = []
    for c in candidates:
        if rng.random() < density and all(popcount(c & h) <= r - 2 for h in chosen):
            chosen.append(c)
    dependent = set(chosen)
    return [s for s in range(1 << n) if popcount(s) < r or (popcount(s) == r and s not in dependent)]


def _explicit(rng: random.Random, spec: GeneratorSpec) -> tuple[int, dict]:
    n = spec.elements
    r = spec.rank if spec.rank is not None else rng.randint(0, min(n, 4))
    family = sparse_paving_family(rng, n, r) if r else [0]
    report = check_axioms(family, (1 << n) - 1, threshold=None)
    if not report.ok:
        raise InvalidMatroidError(f"generated family failed the axioms: {report.summary()}", report)
    sets = sorted(family, key=lambda s: (popcount(s), members(s)))
    return n, {"type": "explicit", "independent_sets": [members(s) for s in sets]}


_BUILDERS = {"graphic": _graphic, "linear_gf2": _linear, "uniform": _uniform, "explicit": _explicit}


def random_partition(rng: random.Random, n: int, parts: int, max_cap: int | None = None) -> list[dict]:
    parts = min(parts, n)
    if n and not parts:
        parts = 1
    order = list(range(n))
    rng.shuffle(order)
    groups: list[list[int]] = [[e] for e in order[:parts]]
    for e in order[parts:]:
        groups[rng.randrange(parts)].append(e)
    out = []
    for g in groups:
        top = len(g) if max_cap is None else min(len(g), max_cap)
        out.append({"elements": sorted(g), "cap": rng.randint(0, top)})
    return out


def generate(spec: GeneratorSpec, bounds: GeneratorBounds = BOUNDS) -> dict:
    _check_bounds(spec, bounds)
    rng = random.Random(spec.seed)
    n, m_doc = _BUILDERS[spec.family](rng, spec)
    parts = random_partition(rng, n, spec.parts, spec.max_cap)
    return {"elements": list(range(n)), "M": m_doc, "N": {"parts": parts}}


def suite_specs(count: int, seed: int = 0, max_elements: int = 20, max_parts: int = 5) -> list[GeneratorSpec]:
    """A deterministic mix of generator specs cycling through every family."""
    rng = random.Random(seed)
    specs = []
    for k in range(count):
        family = FAMILIES[k % len(FAMILIES)]
        parts = rng.randint(1, max_parts)
        sub_seed = rng.getrandbits(63)
        # small caps make the no-N-independent-base condition common
        max_cap = rng.choice((None, None, 1, 2))
        if family == "graphic":
            vertices = rng.randint(3, 8)
            specs.append(GeneratorSpec(sub_seed, family, elements=max_elements, parts=parts, vertices=vertices, edge_prob=rng.uniform(0.3, 0.8), max_cap=max_cap))
        elif family == "linear_gf2":
            specs.append(GeneratorSpec(sub_seed, family, elements=rng.randint(1, max_elements), parts=parts, dim=rng.randint(1, 6), max_cap=max_cap))
        elif family == "uniform":
            specs.append(GeneratorSpec(sub_seed, family, elements=rng.randint(1, max_elements), parts=parts, max_cap=max_cap))
        else:
            specs.append(GeneratorSpec(sub_seed, family, elements=rng.randint(1, min(max_elements, BOUNDS.explicit_elements)), parts=parts, max_cap=max_cap))
    return specs


__all__ = [
    "BOUNDS",
    "FAMILIES",
    "GeneratorBounds",
    "GeneratorSpec",
    "MatroidError",
    "SCHEMA",
    "build_matroid",
    "build_partition",
    "generate",
    "load_document",
    "parse_instance",
    "random_partition",
    "serialize_instance",
    "sparse_paving_family",
    "suite_specs",
    "to_document",
]
