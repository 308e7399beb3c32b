"""Shipped examples and the golden classification corpus.

Algebras live as canonical JSON under ``corpus/v1``; expectations sit in
``golden.json`` beside them.  ``HYPERGEN_CORPUS`` points at a replacement
directory with the same layout.
"""
from __future__ import annotations

import json
import os
import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

from .algebra import (
    GradedLieAlgebra,
    invariant_fingerprint,
    is_lie_isomorphism,
    quotient_with_map,
    step2_quotient,
    validate,
)
from .constructions import free_metabelian, free_nilpotent
from .kaplan import Verdict, generates_layer_two, is_hypergenerated, kaplan_pencil, metivier_order
from .linalg import Subspace

CORPUS_VERSION = "v1"

_PARAMETRIC = re.compile(r"^(heisenberg|free_nilpotent|free_metabelian)\((\d+(?:,\s*\d+)*)\)$")


@dataclass(frozen=True)
class Expected:
    rank: int
    step: int
    dim: int
    metivier_order: int | None
    hypergenerated: dict[int, Verdict]
    is_metivier: bool
    indecomposable: bool
    order_method: str | None = None

    @classmethod
    def from_json(cls, data: dict) -> Expected:
        return cls(
            rank=data["rank"],
            step=data["step"],
            dim=data["dim"],
            metivier_order=data.get("metivier_order"),
            hypergenerated={int(k): Verdict(v) for k, v in data.get("hypergenerated", {}).items()},
            is_metivier=data.get("is_metivier", False),
            indecomposable=data.get("indecomposable", True),
            order_method=data.get("order_method"),
        )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: GradedLieAlgebra
    expected: Expected | None

    @property
    def dim(self) -> int:
        return self.algebra.dim


def corpus_dir() -> Path:
    env = os.environ.get("HYPERGEN_CORPUS")
    if env:
        return Path(env)
    return Path(__file__).parent / "corpus" / CORPUS_VERSION


@lru_cache(maxsize=8)
def _load(path: str) -> tuple[dict[str, GradedLieAlgebra], dict]:
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus directory {root} does not exist")
    algebras = {}
    for f in sorted(root.glob("*.json")):
        if f.name == "golden.json":
            continue
        g = GradedLieAlgebra.loads(f.read_text())
        algebras[g.name] = g
    golden_path = root / "golden.json"
    golden = json.loads(golden_path.read_text()) if golden_path.exists() else {"entries": {}, "relations": []}
    return algebras, golden


def _corpus():
    return _load(str(corpus_dir()))


def heisenberg(n: int) -> GradedLieAlgebra:
    if n < 1:
        raise ValueError("heisenberg(n) needs n >= 1")
    table = {(2 * i, 2 * i + 1): {2 * n: Fraction(1)} for i in range(n)}
    return GradedLieAlgebra(f"heisenberg({n})", (1,) * (2 * n) + (2,), table)


def _heisenberg_expected(n: int) -> Expected:
    hyp = {k: Verdict.HYPERGENERATED if k <= n - 1 else Verdict.NOT_HYPERGENERATED for k in range(1, n + 1)}
    return Expected(2 * n, 2, 2 * n + 1, 2 * n, hyp, True, True, "SingleForm")


def catalog_list() -> list[str]:
    algebras, golden = _corpus()
    names = list(golden.get("entries", {}))
    names += [n for n in algebras if n not in names]
    return names + ["heisenberg(n)", "free_nilpotent(m,s)", "free_metabelian(m,s)"]


def catalog_get(name: str) -> CatalogEntry:
    algebras, golden = _corpus()
    entries = golden.get("entries", {})
    aliases = {"H2": "heisenberg(2)", "H1": "heisenberg(1)"}
    name = aliases.get(name, name)
    if name in algebras:
        exp = Expected.from_json(entries[name]) if name in entries else None
        return CatalogEntry(name, algebras[name], exp)
    m = _PARAMETRIC.match(name.replace(" ", ""))
    if m is None:
        raise KeyError(f"unknown catalog entry {name!r}")
    kind, args = m.group(1), [int(x) for x in m.group(2).split(",")]
    if kind == "heisenberg":
        if len(args) != 1:
            raise KeyError("heisenberg takes one parameter")
        return CatalogEntry(name, heisenberg(args[0]), _heisenberg_expected(args[0]))
    if len(args) != 2:
        raise KeyError(f"{kind} takes two parameters")
    ctor = free_nilpotent if kind == "free_nilpotent" else free_metabelian
    return CatalogEntry(name, ctor(*args), None)


# ---------------------------------------------------------------------------
# golden runs


@dataclass
class GoldenReport:
    name: str
    diffs: list[str] = field(default_factory=list)
    certificates: dict = field(default_factory=dict)

    @property
    def clean(self) -> bool:
        return not self.diffs

    def to_json(self) -> dict:
        return {"name": self.name, "clean": self.clean, "diffs": self.diffs, "certificates": self.certificates}


def run_golden(entry: CatalogEntry, height: int = 8) -> GoldenReport:
    rep = GoldenReport(entry.name)
    g = entry.algebra
    v = validate(g)
    if not v.ok:
        rep.diffs.append(f"validation: {v.summary()}")
        return rep
    exp = entry.expected
    if exp is None:
        return rep
    for attr in ("rank", "step", "dim"):
        got = getattr(g, attr)
        if got != getattr(exp, attr):
            rep.diffs.append(f"{attr}: expected {getattr(exp, attr)}, got {got}")
    order = None
    if g.step >= 2:
        order = metivier_order(kaplan_pencil(step2_quotient(g)), height)
        rep.certificates["order"] = order.to_json()
    if exp.metivier_order is not None:
        if order is None or not order.exact or order.lower_bound != exp.metivier_order:
            rep.diffs.append(f"order: expected {exp.metivier_order}, got {None if order is None else order.describe()}")
        elif exp.order_method and order.method.value != exp.order_method:
            rep.diffs.append(f"order method: expected {exp.order_method}, got {order.method.value}")
    metivier = g.step == 2 and order is not None and order.exact and order.lower_bound == g.rank
    if metivier != exp.is_metivier:
        rep.diffs.append(f"is_metivier: expected {exp.is_metivier}, got {metivier}")
    for k, want in sorted(exp.hypergenerated.items()):
        dec = is_hypergenerated(g, k, height)
        rep.certificates[f"k={k}"] = dec.to_json()
        if dec.verdict is not want:
            rep.diffs.append(f"k={k}: expected {want.value}, got {dec.verdict.value}")
        if dec.verdict is Verdict.NOT_HYPERGENERATED and generates_layer_two(g, dec.witness_subspace):
            rep.diffs.append(f"k={k}: witness subspace generates V2")
        if want is Verdict.HYPERGENERATED and g.rank < 2 * (k + 1):
            rep.diffs.append(f"k={k}: hypergenerated entry with rank < 2(k+1)")
    return rep


def _ideal_from_desc(g: GradedLieAlgebra, desc) -> Subspace:
    if desc == "top_layer":
        return g.layer(g.step)
    return Subspace.span([[Fraction(x) for x in row] for row in desc], g.dim)


def run_relation(rel: dict, seed: int = 0) -> GoldenReport:
    algebras, _ = _corpus()
    kind = rel["kind"]
    rep = GoldenReport(f"{kind}:{rel.get('source')}->{rel.get('target', '')}")
    src = algebras[rel["source"]]
    if kind == "quotient_fingerprint":
        q, _ = quotient_with_map(src, _ideal_from_desc(src, rel["ideal"]))
        want = invariant_fingerprint(algebras[rel["target"]])
        got = invariant_fingerprint(q)
        rep.certificates["fingerprint"] = got.to_json()
        if got != want:
            rep.diffs.append(f"fingerprint mismatch: {got} != {want}")
    elif kind == "isomorphism":
        tgt = algebras[rel["target"]]
        q, _ = quotient_with_map(tgt, _ideal_from_desc(tgt, rel["ideal"]))
        images = [[Fraction(x) for x in row] for row in rel["images"]]
        if not is_lie_isomorphism(src, q, images):
            rep.diffs.append("explicit basis map is not a Lie isomorphism")
    elif kind == "central_quotients":
        rng = random.Random(rel.get("seed", seed))
        v2 = list(src.layer_range(2))
        for dim_str, target in sorted(rel["dims"].items()):
            d = int(dim_str)
            want = invariant_fingerprint(algebras[target])
            subspaces = [_coordinate_subspace(src, v2[:d])]
            while len(subspaces) < rel.get("samples", 4) + 1:
                rows = [[Fraction(rng.randint(-2, 2)) for _ in v2] for _ in range(d)]
                s = Subspace.span([[Fraction(0)] * v2[0] + r for r in rows], src.dim)
                if s.dim == d:
                    subspaces.append(s)
            for s in subspaces:
                q, _ = quotient_with_map(src, s)
                got = invariant_fingerprint(q)
                if got != want:
                    rep.diffs.append(f"quotient by {[list(map(str, r)) for r in s.basis]}: {got} != {want}")
    else:
        rep.diffs.append(f"unknown relation kind {kind!r}")
    return rep


def _coordinate_subspace(g: GradedLieAlgebra, idx) -> Subspace:
    return Subspace.coordinate(idx, g.dim)


@dataclass
class GoldenSummary:
    reports: list[GoldenReport]
    seconds: float

    @property
    def clean(self) -> bool:
        return all(r.clean for r in self.reports)

    def to_json(self) -> dict:
        return {"clean": self.clean, "seconds": round(self.seconds, 3), "reports": [r.to_json() for r in self.reports]}


def run_golden_all(height: int = 8, seed: int = 0) -> GoldenSummary:
    t0 = time.perf_counter()
    _, golden = _corpus()
    reports = [run_golden(catalog_get(name), height) for name in golden.get("entries", {})]
    reports += [run_relation(rel, seed) for rel in golden.get("relations", [])]
    return GoldenSummary(reports, time.perf_counter() - t0)
