"""``hypergen`` command line front end.

Exit codes: 0 success / Hypergenerated, 10 NotHypergenerated, 20 Unknown,
1 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog
from .algebra import (
    AlgebraError,
    GradedLieAlgebra,
    direct_product,
    lower_central_series,
    quotient,
    step2_quotient,
    validate,
)
from .constructions import (
    DimensionCapError,
    free_metabelian,
    free_nilpotent,
    hall_word_labels,
    metabelian_quotient,
    metabelian_word_labels,
    quaternionic_extension,
)
from .kaplan import SkewPencil, Verdict, embed_general_matrix_space, gs_from_skew, is_hypergenerated, kaplan_pencil, metivier_order
from .linalg import Subspace

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO = 10
EXIT_UNKNOWN = 20

_VERDICT_EXIT = {Verdict.HYPERGENERATED: EXIT_OK, Verdict.NOT_HYPERGENERATED: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _load_algebra(path: str) -> GradedLieAlgebra:
    # an existing file wins; otherwise try the name as a catalog entry
    if path != "-" and not Path(path).exists():
        try:
            return catalog.catalog_get(path).algebra
        except KeyError:
            pass
    return GradedLieAlgebra.from_json(_read_json(path))


def _emit(args, data: dict, human: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(human)


def _write(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    g = _load_algebra(args.file)
    rep = validate(g)
    series = [s.dim for s in lower_central_series(g)] if rep.ok else []
    data = {
        "name": g.name,
        "ok": rep.ok,
        "failures": rep.failures,
        "dim": g.dim,
        "rank": g.rank,
        "step": g.step,
        "layer_dims": list(g.layer_dims),
        "lower_central_series_dims": series,
    }
    lines = [f"{g.name}: {'valid stratified algebra' if rep.ok else 'INVALID'}"]
    lines.append(f"dim={g.dim} rank={g.rank} step={g.step} layers={list(g.layer_dims)}")
    if rep.ok:
        lines.append(f"lower central series dims: {series}")
    else:
        lines.extend(f"  {f}" for f in rep.failures)
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_INPUT


def _step2_pencil(g: GradedLieAlgebra) -> SkewPencil:
    rep = validate(g)
    if not rep.ok:
        raise InputError(f"{g.name}: {rep.summary()}")
    if g.step < 2:
        raise InputError(f"{g.name} is abelian: the Kaplan pencil is empty")
    return kaplan_pencil(step2_quotient(g))


def cmd_order(args) -> int:
    g = _load_algebra(args.file)
    res = metivier_order(_step2_pencil(g), args.height)
    lines = [res.describe()]
    if res.witness is not None:
        lines.append(f"witness mu = {_vec(res.witness)}")
    if "minor" in res.certificate:
        c = res.certificate
        lines.append(f"definite minor {c['minor']}: Pf = {c['pfaffian']} ({c['definiteness']})")
    _emit(args, res.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_hypergen(args) -> int:
    g = _load_algebra(args.file)
    rep = validate(g)
    if not rep.ok:
        raise InputError(f"{g.name}: {rep.summary()}")
    dec = is_hypergenerated(g, args.k, args.height)
    lines = [f"{g.name}, k={dec.k}: {dec.verdict.value}", f"reason: {dec.reason}"]
    if dec.order is not None:
        lines.append(dec.order.describe())
    if dec.witness_mu is not None:
        lines.append(f"witness mu = {_vec(dec.witness_mu)}")
    if dec.witness_subspace is not None:
        lines.append(f"isotropic P (codim {dec.k}), basis:")
        lines.extend(f"  {_vec(v)}" for v in dec.witness_subspace.basis)
    if dec.exported_system is not None:
        lines.append(f"exported Pfaffian system: {len(dec.exported_system)} polynomials")
    _emit(args, dec.to_json(), "\n".join(lines))
    return _VERDICT_EXIT[dec.verdict]


def _forms_from_json(data) -> list[list[list[Fraction]]]:
    forms = data["forms"] if isinstance(data, dict) else data
    return [[[Fraction(str(x)) for x in row] for row in f] for f in forms]


def cmd_construct(args) -> int:
    kind = args.kind
    cap = args.cap
    if args.emit:
        if args.emit == "hall-words":
            labels = hall_word_labels(_need(args, "m"), _need(args, "s"), cap)
        else:
            labels = metabelian_word_labels(_need(args, "m"), _need(args, "s"))
        _write(args, "".join(f"{i + 1}\t{lab}\n" for i, lab in enumerate(labels)))
        return EXIT_OK
    if kind == "free-nilpotent":
        g = free_nilpotent(_need(args, "m"), _need(args, "s"), cap)
    elif kind == "free-metabelian":
        g = free_metabelian(_need(args, "m"), _need(args, "s"), cap)
    elif kind == "product":
        if len(args.inputs) != 2:
            raise InputError("product needs two algebra files")
        g = direct_product(_load_algebra(args.inputs[0]), _load_algebra(args.inputs[1]))
    elif kind == "quotient":
        if len(args.inputs) != 2:
            raise InputError("quotient needs an algebra file and an ideal file (list of vectors)")
        base = _load_algebra(args.inputs[0])
        rows = _read_json(args.inputs[1])
        if isinstance(rows, dict):
            rows = rows["basis"]
        g = quotient(base, Subspace.span([[Fraction(str(x)) for x in r] for r in rows], base.dim))
    elif kind == "gs":
        if len(args.inputs) != 1:
            raise InputError("gs needs one file of skew forms")
        g = gs_from_skew(_forms_from_json(_read_json(args.inputs[0])))
    elif kind == "quaternionic":
        g = quaternionic_extension(_need(args, "s"), cap)
    elif kind == "metabelian-quotient":
        if len(args.inputs) != 1:
            raise InputError("metabelian-quotient needs one file of skew forms")
        res = metabelian_quotient(
            _need(args, "m"), _need(args, "s"), args.k if args.k is not None else 1,
            _forms_from_json(_read_json(args.inputs[0])), cap, args.height,
        )
        g = res.algebra
        print(
            f"dim W = {res.dim_w}; I(W) layer dims = {list(res.ideal_layer_dims)}"
            + ("; conditionally hypergenerated" if res.conditional else ""),
            file=sys.stderr,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown kind {kind}")
    _write(args, g.dumps())
    return EXIT_OK


def _need(args, name: str) -> int:
    v = getattr(args, name)
    if v is None:
        raise InputError(f"--{name} is required for {args.kind}")
    return v


def cmd_catalog(args) -> int:
    if args.action == "list":
        names = catalog.catalog_list()
        _emit(args, {"entries": names}, "\n".join(names))
        return EXIT_OK
    if args.action == "get":
        if not args.name:
            raise InputError("catalog get needs a NAME")
        try:
            entry = catalog.catalog_get(args.name)
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from exc
        sys.stdout.write(entry.algebra.dumps())
        return EXIT_OK
    summary = catalog.run_golden_all(args.height, args.seed)
    lines = []
    for r in summary.reports:
        lines.append(f"{'ok  ' if r.clean else 'DIFF'} {r.name}")
        lines.extend(f"     {d}" for d in r.diffs)
        cert = r.certificates.get("order")
        if cert:
            lines.append(f"     order: {cert['lower_bound']} ({cert['certainty']}, {cert['method']})")
    lines.append(f"golden: {'clean' if summary.clean else 'DIFFS FOUND'} ({summary.seconds:.2f}s)")
    data = summary.to_json()
    data.pop("seconds")  # keep machine output byte-stable
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if summary.clean else EXIT_INPUT


def cmd_minrank(args) -> int:
    if args.action == "export":
        g = _load_algebra(args.file)
        pencil = _step2_pencil(g)
        k = args.k if args.k is not None else 1
        out = pencil.to_minrank_json(k)
    else:
        data = _read_json(args.file)
        if isinstance(data, dict) and "matrices" not in data:
            raise InputError(f"{args.file}: expected a list of matrices or an object with 'matrices'")
        mats = data["matrices"] if isinstance(data, dict) else data
        k = args.k if args.k is not None else (data.get("k", 1) if isinstance(data, dict) else 1)
        pencil = embed_general_matrix_space([[[Fraction(str(x)) for x in row] for row in a] for a in mats])
        out = pencil.to_minrank_json(k)
    _write(args, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=None, help="order to test")
    common.add_argument("--height", type=int, default=8, help="witness search height bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=512, help="dimension cap for constructions")
    common.add_argument("--format", choices=("human", "json"), default="human")

    p = argparse.ArgumentParser(prog="hypergen", description="Hypergenerated stratified Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="validate an algebra")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("order", parents=[common], help="Métivier order with certificate")
    s.add_argument("file")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("hypergen", parents=[common], help="decide hypergenerated of order k")
    s.add_argument("file")
    s.set_defaults(func=cmd_hypergen)

    s = sub.add_parser("construct", parents=[common], help="build an algebra")
    s.add_argument(
        "kind",
        choices=("free-nilpotent", "free-metabelian", "product", "quotient", "gs", "quaternionic", "metabelian-quotient"),
    )
    s.add_argument("inputs", nargs="*")
    s.add_argument("--m", type=int)
    s.add_argument("--s", type=int)
    s.add_argument("--emit", choices=("hall-words", "metabelian-words"))
    s.add_argument("--out")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("catalog", parents=[common], help="shipped corpus")
    s.add_argument("action", choices=("list", "get", "golden"))
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("minrank", parents=[common], help="MinRank instance files")
    s.add_argument("action", choices=("export", "embed"))
    s.add_argument("file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_minrank)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.height < 1 or args.cap < 1 or (args.k is not None and args.k < 0):
        print("hypergen: --height and --cap must be positive, --k non-negative", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "hypergen" and args.k is None:
        print("hypergen: --k is required", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, AlgebraError, DimensionCapError, ValueError, KeyError, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"hypergen: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
