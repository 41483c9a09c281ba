"""Instance documents: JSON schema, validation, and deterministic generators.

An instance file is one JSON object:

    {"n": 3,
     "name": "triangle-vs-colors",        (optional)
     "seed": 7,                           (optional)
     "matroid1": {"type": "graphic", "vertex_count": 3,
                  "edges": [[0, 1], [1, 2], [2, 0]]},
     "matroid2": {"type": "partition", "blocks": [[0, 1], [2]],
                  "capacities": [1, 1]}}

Matroid objects carry "type" in {"uniform", "partition", "graphic",
"linear_gf2"} plus the family fields shown in ``MATROID_FIELDS``.  Both
matroids must describe a ground set of exactly n elements.  Serialization
is canonical (sorted keys, no whitespace), so equal instances are equal
bytes.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .matroids import (
    GraphicMatroid,
    GroundSetError,
    LinearMatroidGF2,
    MatroidOracle,
    PartitionMatroid,
    UniformMatroid,
)


class InstanceFormatError(ValueError):
    """The instance document violates the schema; the message names the field."""


class GroundSizeMismatchError(InstanceFormatError):
    """A matroid description and the instance disagree on the ground size."""


MATROID_FIELDS = {
    "uniform": ("n", "k"),
    "partition": ("blocks", "capacities"),
    "graphic": ("vertex_count", "edges"),
    "linear_gf2": ("row_count", "columns"),
}

GENERATOR_FAMILIES = ("uniform_pair", "partition_matching", "graphic_partition", "gf2_pair")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _require_int(value, where: str, minimum: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InstanceFormatError(f"field {where!r} must be an integer")
    if value < minimum:
        raise InstanceFormatError(f"field {where!r} must be >= {minimum}, got {value}")
    return value


def _require_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise InstanceFormatError(f"field {where!r} must be a list")
    return value


def validate_matroid_description(desc, where: str) -> dict:
    """Check one matroid object against the schema; returns it unchanged."""
    if not isinstance(desc, dict):
        raise InstanceFormatError(f"field {where!r} must be an object")
    kind = desc.get("type")
    if kind not in MATROID_FIELDS:
        known = ", ".join(sorted(MATROID_FIELDS))
        raise InstanceFormatError(
            f"field {where}.type must be one of: {known}; got {kind!r}"
        )
    expected = set(MATROID_FIELDS[kind]) | {"type"}
    unknown = set(desc) - expected
    if unknown:
        raise InstanceFormatError(
            f"field {where!r} has unknown keys for type {kind!r}: {sorted(unknown)}"
        )
    missing = expected - set(desc)
    if missing:
        raise InstanceFormatError(
            f"field {where!r} is missing keys for type {kind!r}: {sorted(missing)}"
        )

    if kind == "uniform":
        _require_int(desc["n"], f"{where}.n")
        _require_int(desc["k"], f"{where}.k")
    elif kind == "partition":
        blocks = _require_list(desc["blocks"], f"{where}.blocks")
        for i, block in enumerate(blocks):
            block = _require_list(block, f"{where}.blocks[{i}]")
            for e in block:
                _require_int(e, f"{where}.blocks[{i}]")
        caps = _require_list(desc["capacities"], f"{where}.capacities")
        for i, cap in enumerate(caps):
            _require_int(cap, f"{where}.capacities[{i}]")
        if len(caps) != len(blocks):
            raise InstanceFormatError(
                f"field {where}.capacities must have one entry per block "
                f"({len(blocks)} blocks, {len(caps)} capacities)"
            )
    elif kind == "graphic":
        _require_int(desc["vertex_count"], f"{where}.vertex_count")
        edges = _require_list(desc["edges"], f"{where}.edges")
        for i, edge in enumerate(edges):
            edge = _require_list(edge, f"{where}.edges[{i}]")
            if len(edge) != 2:
                raise InstanceFormatError(
                    f"field {where}.edges[{i}] must be a [u, v] pair"
                )
            for v in edge:
                _require_int(v, f"{where}.edges[{i}]")
    else:  # linear_gf2
        _require_int(desc["row_count"], f"{where}.row_count")
        columns = _require_list(desc["columns"], f"{where}.columns")
        for i, col in enumerate(columns):
            col = _require_list(col, f"{where}.columns[{i}]")
            for b in col:
                if b not in (0, 1) or isinstance(b, bool):
                    raise InstanceFormatError(
                        f"field {where}.columns[{i}] must contain only 0/1"
                    )
    return desc


def matroid_from_description(desc: dict) -> MatroidOracle:
    """Instantiate the oracle a validated description refers to."""
    kind = desc["type"]
    try:
        if kind == "uniform":
            return UniformMatroid(desc["n"], desc["k"])
        if kind == "partition":
            return PartitionMatroid(desc["blocks"], desc["capacities"])
        if kind == "graphic":
            return GraphicMatroid(desc["vertex_count"], [tuple(e) for e in desc["edges"]])
        if kind == "linear_gf2":
            return LinearMatroidGF2(desc["row_count"], desc["columns"])
    except GroundSetError as exc:
        raise InstanceFormatError(str(exc)) from exc
    raise InstanceFormatError(f"unknown matroid type {kind!r}")


def matroid_to_description(matroid: MatroidOracle) -> dict:
    if isinstance(matroid, UniformMatroid):
        return {"type": "uniform", "n": matroid.ground_size, "k": matroid.k}
    if isinstance(matroid, PartitionMatroid):
        return {
            "type": "partition",
            "blocks": [sorted(b) for b in matroid.blocks],
            "capacities": list(matroid.capacities),
        }
    if isinstance(matroid, GraphicMatroid):
        return {
            "type": "graphic",
            "vertex_count": matroid.vertex_count,
            "edges": [list(e) for e in matroid.edges],
        }
    if isinstance(matroid, LinearMatroidGF2):
        return {
            "type": "linear_gf2",
            "row_count": matroid.row_count,
            "columns": [list(c) for c in matroid.columns],
        }
    raise TypeError(f"no description format for {type(matroid).__name__}")


@dataclass
class InstanceFile:
    """A parsed, schema-valid instance ready to build oracles from."""

    ground_size: int
    matroid1: dict
    matroid2: dict
    name: str | None = None
    seed: int | None = None

    def build(self) -> tuple[MatroidOracle, MatroidOracle]:
        return (
            matroid_from_description(self.matroid1),
            matroid_from_description(self.matroid2),
        )

    def to_dict(self) -> dict:
        doc = {"n": self.ground_size, "matroid1": self.matroid1, "matroid2": self.matroid2}
        if self.name is not None:
            doc["name"] = self.name
        if self.seed is not None:
            doc["seed"] = self.seed
        return doc

    def to_json(self) -> str:
        return canonical_json(self.to_dict())


def _described_ground_size(desc: dict) -> int:
    kind = desc["type"]
    if kind == "uniform":
        return desc["n"]
    if kind == "partition":
        return sum(len(b) for b in desc["blocks"])
    if kind == "graphic":
        return len(desc["edges"])
    return len(desc["columns"])


def instance_from_dict(doc) -> InstanceFile:
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    unknown = set(doc) - {"n", "matroid1", "matroid2", "name", "seed"}
    if unknown:
        raise InstanceFormatError(f"unknown top-level keys: {sorted(unknown)}")
    for key in ("n", "matroid1", "matroid2"):
        if key not in doc:
            raise InstanceFormatError(f"missing required field {key!r}")
    n = _require_int(doc["n"], "n")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InstanceFormatError("field 'name' must be a string")
    seed = doc.get("seed")
    if seed is not None:
        seed = _require_int(seed, "seed")

    for key in ("matroid1", "matroid2"):
        validate_matroid_description(doc[key], key)
        declared = _described_ground_size(doc[key])
        if declared != n:
            raise GroundSizeMismatchError(
                f"ground-size mismatch: {key} describes {declared} elements "
                f"but the instance declares n={n}"
            )

    instance = InstanceFile(
        ground_size=n,
        matroid1=doc["matroid1"],
        matroid2=doc["matroid2"],
        name=name,
        seed=seed,
    )
    # Instantiating validates the family-level invariants (disjoint blocks,
    # endpoint ranges, column lengths) with precise messages.
    instance.build()
    return instance


def parse_instance(text: str) -> InstanceFile:
    """Parse and fully validate one instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"not valid JSON: {exc}") from exc
    return instance_from_dict(doc)


def _partition_by_endpoint(pairs: list[tuple[int, int]], side: int) -> dict:
    groups: dict[int, list[int]] = {}
    for i, pair in enumerate(pairs):
        groups.setdefault(pair[side], []).append(i)
    blocks = [sorted(groups[v]) for v in sorted(groups)]
    return {
        "type": "partition",
        "blocks": blocks,
        "capacities": [1] * len(blocks),
    }


def _gen_uniform_pair(n: int, rng: random.Random) -> tuple[dict, dict]:
    k1 = rng.randrange(0, n + 1)
    k2 = rng.randrange(0, n + 1)
    return (
        {"type": "uniform", "n": n, "k": k1},
        {"type": "uniform", "n": n, "k": k2},
    )


def _gen_partition_matching(n: int, rng: random.Random) -> tuple[dict, dict]:
    # Bipartite matching encoded as two partition matroids over the edges:
    # one capacity-1 block per left endpoint, one per right endpoint.
    sides = max(1, math.isqrt(n))
    pairs = [(rng.randrange(sides), rng.randrange(sides)) for _ in range(n)]
    return _partition_by_endpoint(pairs, 0), _partition_by_endpoint(pairs, 1)


def _gen_graphic_partition(n: int, rng: random.Random) -> tuple[dict, dict]:
    vertices = max(2, math.isqrt(n) + 1)
    edges = []
    for _ in range(n):
        u = rng.randrange(vertices)
        if rng.random() < 0.05:
            v = u  # occasional self-loop: a loop element
        else:
            v = rng.randrange(vertices)
        edges.append([u, v])
    classes = max(1, min(n, 1 + rng.randrange(4)))
    assignment = [rng.randrange(classes) for _ in range(n)]
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(assignment):
        groups.setdefault(c, []).append(i)
    blocks = [sorted(groups[c]) for c in sorted(groups)]
    capacities = [rng.randrange(0, 3) for _ in blocks]
    matroid1 = {"type": "graphic", "vertex_count": vertices, "edges": edges}
    matroid2 = {"type": "partition", "blocks": blocks, "capacities": capacities}
    return matroid1, matroid2


def _gen_gf2_pair(n: int, rng: random.Random) -> tuple[dict, dict]:
    rows = max(1, math.isqrt(n))

    def matrix() -> dict:
        cols = [[rng.randrange(2) for _ in range(rows)] for _ in range(n)]
        return {"type": "linear_gf2", "row_count": rows, "columns": cols}

    return matrix(), matrix()


_GENERATORS = {
    "uniform_pair": _gen_uniform_pair,
    "partition_matching": _gen_partition_matching,
    "graphic_partition": _gen_graphic_partition,
    "gf2_pair": _gen_gf2_pair,
}


def generate_instance(family: str, n: int, seed: int) -> InstanceFile:
    """Deterministically generate one instance; same inputs, same document."""
    if family not in _GENERATORS:
        known = ", ".join(GENERATOR_FAMILIES)
        raise InstanceFormatError(f"unknown family {family!r}; known families: {known}")
    if n < 1:
        raise InstanceFormatError(f"generator needs n >= 1, got {n}")
    # str seeds go through hashlib, so the stream is stable across processes.
    rng = random.Random(f"{family}:{n}:{seed}")
    matroid1, matroid2 = _GENERATORS[family](n, rng)
    instance = InstanceFile(
        ground_size=n,
        matroid1=matroid1,
        matroid2=matroid2,
        name=f"{family}-n{n}-s{seed}",
        seed=seed,
    )
    return instance_from_dict(instance.to_dict())
