"""Curve descriptors: schema validation of the JSON form and the semantic
checks every pipeline relies on."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from .groups import FiniteGroup, GroupError

PROJECTIVE = "projective"
AFFINE_LINE = "affine_line"
NODAL = "nodal_projective"

TRIVIAL_PRODUCT = "trivial_product"
CYCLIC_TOWER = "cyclic_tower"
EXPLICIT = "explicit"


class DescriptorError(ValueError):
    """Descriptor rejected; ``problems`` lists every diagnostic found."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


_INT = {"type": "integer"}
_POS = {"type": "integer", "minimum": 1}

_GROUP = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["trivial", "cyclic", "abelian", "table", "dihedral"]},
        "order": _POS,
        "factors": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "table": {"type": "array", "minItems": 1,
                  "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "m": _POS,
    },
    "required": ["kind"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "cyclic"}}}, "then": {"required": ["order"]}},
        {"if": {"properties": {"kind": {"const": "abelian"}}}, "then": {"required": ["factors"]}},
        {"if": {"properties": {"kind": {"const": "table"}}}, "then": {"required": ["table"]}},
        {"if": {"properties": {"kind": {"const": "dihedral"}}}, "then": {"required": ["m"]}},
    ],
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "characteristic": {"type": "integer", "minimum": 0},
        "coarse": {
            "type": "object",
            "properties": {
                "kind": {"enum": [PROJECTIVE, AFFINE_LINE, NODAL]},
                "genus": {"oneOf": [{"type": "integer", "minimum": 0},
                                    {"type": "array", "minItems": 1,
                                     "items": {"type": "integer", "minimum": 0}}]},
                "node_count": {"type": "integer", "minimum": 0},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "generic_stabilizer": _GROUP,
        "stacky_points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string", "minLength": 1},
                    "index": _INT,
                    "stabilizer": _GROUP,
                    "embedding": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "node": {"type": "boolean"},
                },
                "required": ["label", "index"],
                "additionalProperties": False,
            },
        },
        "gerbe": {
            "type": "object",
            "properties": {"kind": {"enum": [TRIVIAL_PRODUCT, CYCLIC_TOWER, EXPLICIT]}},
            "required": ["kind"],
            "additionalProperties": False,
        },
    },
    "required": ["characteristic", "coarse", "generic_stabilizer", "stacky_points", "gerbe"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class Coarse:
    kind: str
    genus: int = 0
    component_genera: tuple[int, ...] = ()
    node_count: int = 0


@dataclass(frozen=True)
class StackyPoint:
    label: str
    index: int
    stabilizer: FiniteGroup | None = None
    # image in ``stabilizer`` of each element of the generic stabilizer
    embedding: tuple[int, ...] | None = None
    node: bool = False


@dataclass(frozen=True)
class CurveDescriptor:
    characteristic: int
    coarse: Coarse
    generic_stabilizer: FiniteGroup
    stacky_points: tuple[StackyPoint, ...]
    gerbe: str = TRIVIAL_PRODUCT

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(pt.index for pt in self.stacky_points)

    @property
    def g0_trivial(self) -> bool:
        return self.generic_stabilizer.order == 1

    def with_gerbe(self, gerbe: str, generic: FiniteGroup | None = None) -> CurveDescriptor:
        """Same coarse data and indices, new gerbe; point stabilizers are dropped."""
        pts = tuple(StackyPoint(p.label, p.index, node=p.node) for p in self.stacky_points)
        return CurveDescriptor(self.characteristic, self.coarse,
                               generic or self.generic_stabilizer, pts, gerbe)

    def rigidification(self) -> CurveDescriptor:
        """The orbicurve ``Y`` underneath: trivial generic stabilizer."""
        return self.with_gerbe(TRIVIAL_PRODUCT, FiniteGroup.cyclic(1))


def _group(spec: dict) -> FiniteGroup:
    kind = spec["kind"]
    if kind == "trivial":
        return FiniteGroup.cyclic(1)
    if kind == "cyclic":
        return FiniteGroup.cyclic(spec["order"])
    if kind == "abelian":
        return FiniteGroup.abelian(spec["factors"])
    if kind == "dihedral":
        return FiniteGroup.dihedral(spec["m"])
    return FiniteGroup.from_table(spec["table"])


def _schema_problems(raw: Any) -> list[str]:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    out = []
    for err in sorted(validator.iter_errors(raw), key=lambda e: (list(e.absolute_path), e.message)):
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        out.append(f"{where}: {err.message}")
    return out


def _tame(order: int, characteristic: int) -> bool:
    return characteristic == 0 or order % characteristic != 0


def validate_descriptor(raw: Any) -> CurveDescriptor:
    """Check ``raw`` (parsed JSON) and build a :class:`CurveDescriptor`.

    Raises :class:`DescriptorError` listing every problem found.
    """
    problems = _schema_problems(raw)
    if problems:
        raise DescriptorError(problems)
    char = raw["characteristic"]
    c = raw["coarse"]
    kind = c["kind"]
    genus = c.get("genus", 0)
    if kind == NODAL:
        genera = tuple(genus) if isinstance(genus, list) else (genus,)
        coarse = Coarse(kind, sum(genera), genera, c.get("node_count", 0))
        if coarse.node_count < 1:
            problems.append("coarse: a nodal curve needs node_count >= 1")
    else:
        if isinstance(genus, list):
            problems.append("coarse/genus: a list of genera is only allowed for nodal curves")
            genus = 0
        if c.get("node_count"):
            problems.append("coarse/node_count: only allowed for nodal curves")
        if kind == AFFINE_LINE and genus:
            problems.append("coarse/genus: the affine line has genus 0")
        coarse = Coarse(kind, genus)

    try:
        g0 = _group(raw["generic_stabilizer"])
    except GroupError as exc:
        raise DescriptorError(problems + [f"generic_stabilizer: {exc}"]) from None
    if not _tame(g0.order, char):
        problems.append(f"generic_stabilizer: characteristic {char} divides the order {g0.order} "
                        "(wild)")

    gerbe = raw["gerbe"]["kind"]
    if gerbe == CYCLIC_TOWER and not g0.is_cyclic:
        problems.append("gerbe: cyclic_tower needs a cyclic generic stabilizer")

    points = []
    seen = set()
    for i, p in enumerate(raw["stacky_points"]):
        where = f"stacky_points/{i}"
        label, d = p["label"], p["index"]
        if label in seen:
            problems.append(f"{where}: duplicate label {label!r}")
        seen.add(label)
        if d < 2:
            problems.append(f"{where}: index {d} must be at least 2")
        if not _tame(max(d, 1) * g0.order, char):
            problems.append(f"{where}: characteristic {char} divides the stabilizer order "
                            f"{d * g0.order} (wild)")
        if p.get("node") and kind != NODAL:
            problems.append(f"{where}: node points need a nodal coarse curve")
        stab = None
        if "stabilizer" in p:
            try:
                stab = _group(p["stabilizer"])
            except GroupError as exc:
                problems.append(f"{where}/stabilizer: {exc}")
        emb = tuple(p["embedding"]) if "embedding" in p else None
        problems += _check_point(where, gerbe, g0, d, stab, emb)
        points.append(StackyPoint(label, d, stab, emb, bool(p.get("node"))))
    if kind == NODAL and sum(pt.node for pt in points) > coarse.node_count:
        problems.append("stacky_points: more node points than nodes")
    if problems:
        raise DescriptorError(problems)
    return CurveDescriptor(char, coarse, g0, tuple(points), gerbe)


def _check_point(where: str, gerbe: str, g0: FiniteGroup, d: int,
                 stab: FiniteGroup | None, emb: tuple[int, ...] | None) -> list[str]:
    out = []
    if stab is not None and stab.order != g0.order * d:
        out.append(f"{where}/stabilizer: order {stab.order} is not |G0| * index = {g0.order * d}")
        return out
    if gerbe == CYCLIC_TOWER and stab is not None and not stab.is_cyclic:
        out.append(f"{where}/stabilizer: cyclic_tower needs cyclic stabilizers")
    if gerbe == EXPLICIT:
        if stab is None or emb is None:
            out.append(f"{where}: explicit gerbes need a stabilizer and an embedding")
            return out
    if emb is not None:
        if stab is None:
            out.append(f"{where}/embedding: given without a stabilizer")
        elif any(x >= stab.order for x in emb) or not g0.is_homomorphism(stab, emb):
            out.append(f"{where}/embedding: not a homomorphism from the generic stabilizer")
        elif len(set(emb)) != g0.order:
            out.append(f"{where}/embedding: not injective")
    return out


def load_descriptor(path: str | Path) -> CurveDescriptor:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DescriptorError([f"not valid JSON: {exc}"]) from None
    return validate_descriptor(raw)


# convenience constructors for tests and fixtures ------------------------------


def orbicurve(indices, genus: int = 0, coarse: str = PROJECTIVE,
              characteristic: int = 0) -> CurveDescriptor:
    pts = tuple(StackyPoint(f"p{i + 1}", d) for i, d in enumerate(indices))
    return CurveDescriptor(characteristic, Coarse(coarse, genus), FiniteGroup.cyclic(1), pts)


def product_gerbe(indices, g0_factors, genus: int = 0, coarse: str = PROJECTIVE) -> CurveDescriptor:
    base = orbicurve(indices, genus, coarse)
    return base.with_gerbe(TRIVIAL_PRODUCT, FiniteGroup.abelian(g0_factors))


def cyclic_tower(indices, g0_order: int, genus: int = 0, coarse: str = AFFINE_LINE) -> CurveDescriptor:
    base = orbicurve(indices, genus, coarse)
    pts = tuple(StackyPoint(p.label, p.index, FiniteGroup.cyclic(p.index * g0_order),
                            tuple(p.index * k for k in range(g0_order)))
                for p in base.stacky_points)
    return CurveDescriptor(0, base.coarse, FiniteGroup.cyclic(g0_order), pts, CYCLIC_TOWER)


def dihedral_quotient(m: int) -> CurveDescriptor:
    """The affine line modulo ``D_{2m}`` acting through ``x -> -x``."""
    stab = FiniteGroup.dihedral(m)
    return CurveDescriptor(0, Coarse(AFFINE_LINE), FiniteGroup.cyclic(m),
                           (StackyPoint("origin", 2, stab, tuple(range(m))),), EXPLICIT)


def twisted_nodal(genera, node_count: int, nodes=(), smooth=()) -> CurveDescriptor:
    pts = [StackyPoint(f"n{i + 1}", d, node=True) for i, d in enumerate(nodes)]
    pts += [StackyPoint(f"s{i + 1}", d) for i, d in enumerate(smooth)]
    return CurveDescriptor(0, Coarse(NODAL, sum(genera), tuple(genera), node_count),
                           FiniteGroup.cyclic(1), tuple(pts))


def is_abelian_everywhere(desc: CurveDescriptor) -> bool:
    """Generic and all point stabilizers abelian (implied stabilizers included)."""
    if not desc.generic_stabilizer.is_abelian:
        return False
    return all(pt.stabilizer is None or pt.stabilizer.is_abelian for pt in desc.stacky_points)


def stabilizer_at(desc: CurveDescriptor, pt: StackyPoint) -> tuple[FiniteGroup, tuple[int, ...]]:
    """Full stabilizer at ``pt`` with the embedding of the generic stabilizer."""
    if pt.stabilizer is not None and pt.embedding is not None:
        return pt.stabilizer, pt.embedding
    g0 = desc.generic_stabilizer
    n0 = g0.order
    if desc.gerbe == CYCLIC_TOWER:
        # the unique subgroup of order n0; the generator of G0 goes to d_l
        gen = next(x for x in range(n0) if g0.element_order(x) == n0) if n0 > 1 else 0
        images = [0] * n0
        y, x = 0, g0.e
        for _ in range(n0):
            images[x] = y
            x, y = g0.mul[x][gen], (y + pt.index) % (n0 * pt.index)
        return pt.stabilizer or FiniteGroup.cyclic(n0 * pt.index), tuple(images)
    # product gerbe: G0 x Z/d embedded as the first factor
    d = pt.index
    table = [[g0.mul[a // d][b // d] * d + (a % d + b % d) % d for b in range(n0 * d)]
             for a in range(n0 * d)]
    prod = FiniteGroup.from_table(table, g0.e * d, f"{g0} x Z/{d}")
    return prod, tuple(a * d for a in range(n0))


