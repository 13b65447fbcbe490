"""Command line front end.

    sullivan validate FILE [NAME]
    sullivan cohomology FILE [NAME] --max-degree N
    sullivan coformalize E54 --format json

FILE is a path to a DSL document or the name of a bundled corpus fixture
(``E54``, ``CP3-over-S4``, ...).  ``--max-degree N`` is the cutoff: claims
cover degrees below N.  Exit status: 0 clean, 1 validation failure or an
invalid input algebra, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

from . import __version__
from .algebra import Polynomial, format_polynomial
from .dsl import AlgebraDecl, DslDocument, DslError, FibrationDecl, LieDecl, WedgeDecl, parse

__all__ = ["main", "run", "corpus_path", "load_document"]

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class ValidationFailure(Exception):
    def __init__(self, message: str, verdict: Optional[dict] = None):
        super().__init__(message)
        self.verdict = verdict


# ---------------------------------------------------------------------------
# documents


def corpus_path(name: str) -> Path:
    base = resources.files("sullivan") / "corpus"
    return Path(str(base / f"{name}.sul"))


def corpus_names() -> list:
    base = Path(str(resources.files("sullivan") / "corpus"))
    return sorted(p.stem for p in base.glob("*.sul"))


def load_document(source: str) -> tuple:
    """(document, stem) for a path or a corpus fixture name."""
    p = Path(source)
    if not p.exists():
        p = corpus_path(source)
        if not p.exists():
            raise UsageError(f"no such file or corpus fixture: {source}")
    return parse(p.read_text(encoding="utf-8")), p.stem


def _pick(doc: DslDocument, stem: str, name: Optional[str], kinds: tuple) -> str:
    if name is not None:
        if name not in doc.names():
            raise UsageError(f"no declaration named {name!r}")
        return name
    cands = [it.name for it in doc.items if isinstance(it, kinds)]
    if not cands:
        raise UsageError("document has no suitable declaration")
    return stem if stem in cands else cands[-1]


# ---------------------------------------------------------------------------
# rendering helpers


def jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Polynomial):
        return format_polynomial(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    return x


def _algebra_dict(alg) -> dict:
    return {
        "generators": [[n, d] for n, d in alg.ctx.pairs()],
        "differential": {n: format_polynomial(p) for n, p in zip(alg.names, alg.diff) if p},
    }


def _morphism_dict(phi) -> dict:
    return {n: format_polynomial(p) for n, p in zip(phi.source.names, phi.assignment)}


def _default_cutoff(alg, wedge_top: Optional[int] = None) -> int:
    """Twice the top generator degree; truncated wedge models are exact only below their top degree + 1."""
    if wedge_top is not None:
        return wedge_top + 1
    if alg.wedge_spheres is not None:
        return alg.ctx.max_degree() + 1
    return max(8, 2 * alg.ctx.max_degree())


def _checked_algebra(doc, name, cutoff=None):
    from .dga import validate
    from .fibration import DSquaredViolation

    try:
        alg = doc.algebra(name)
    except DSquaredViolation as exc:
        raise ValidationFailure(str(exc), {"subject": name, "kind": "invalid", "reason": str(exc)})
    rep = validate(alg, cutoff)
    if not rep.ok:
        raise ValidationFailure(f"{name} fails validation", _validation_dict(name, rep))
    return alg


def _validation_dict(name, rep) -> dict:
    return {
        "subject": name,
        "kind": "valid" if rep.ok else "invalid",
        "cutoff": rep.cutoff,
        "degree_ok": rep.degree_ok,
        "d_squared_ok": rep.d_squared_ok,
        "minimal": rep.minimal,
        "simply_connected": rep.simply_connected,
        "counterexamples": [
            {"generator": g, "value": format_polynomial(p), "reason": why} for g, p, why in rep.counterexamples
        ],
    }


# ---------------------------------------------------------------------------
# commands; each returns (cutoff, verdicts, failed)


def cmd_validate(args, doc, stem):
    from .dga import validate
    from .fibration import DSquaredViolation, RelativeMinimalityViolation, RestrictionMismatch
    from .lie import validate_lie
    from .morphism import validate_morphism
    from .dsl import MorphismDecl

    names = [_pick(doc, stem, args.name, ())] if args.name else doc.names()
    verdicts, failed = [], False
    for name in names:
        decl = doc.get(name)
        if isinstance(decl, LieDecl):
            rep = validate_lie(doc.lie(name))
            verdicts.append({"subject": name, "kind": "valid" if rep.ok else "invalid",
                             "failures": [[k, list(v)] for k, v in rep.failures]})
            failed |= not rep.ok
        elif isinstance(decl, MorphismDecl):
            rep = validate_morphism(doc.morphism(name), args.max_degree)
            verdicts.append({"subject": name, "kind": "valid" if rep.ok else "invalid", "cutoff": rep.cutoff,
                             "witnesses": [[g, format_polynomial(p)] for g, p in rep.witnesses]})
            failed |= not rep.ok
        else:
            try:
                alg = doc.algebra(name)
            except (DSquaredViolation, RelativeMinimalityViolation, RestrictionMismatch) as exc:
                verdicts.append({"subject": name, "kind": "invalid", "reason": str(exc)})
                failed = True
                continue
            rep = validate(alg, args.max_degree)
            verdicts.append(_validation_dict(name, rep))
            failed |= not rep.ok
    return args.max_degree, verdicts, failed


def cmd_cohomology(args, doc, stem):
    from .cohomology import betti

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    cutoff = args.max_degree or _default_cutoff(alg)
    table = betti(alg, cutoff)
    reps = {str(k): [format_polynomial(z) for z in table.representatives(k)] for k in range(cutoff) if table.dims[k]}
    return cutoff, [{"subject": name, "kind": "cohomology", "cutoff": cutoff, "dims": table.dims,
                     "representatives": reps}], False


def cmd_limit(args, doc, stem):
    from .coformal import coformal_limit

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    lim = coformal_limit(alg)
    return None, [{"subject": name, "kind": "coformal_limit", "algebra": _algebra_dict(lim)}], False


def _coformal_dict(name, v) -> dict:
    out = {"subject": name, "kind": v.kind, "cutoff": v.cutoff,
           "substitutions": [{"generator": g, "replacement": format_polynomial(Polynomial.gen(z.ctx, g) - z)}
                             for g, z in v.substitutions]}
    if v.iso is not None:
        out["iso"] = _morphism_dict(v.iso)
    if v.generator is not None:
        out["generator"] = v.generator
        out["obstruction"] = format_polynomial(v.obstruction)
    if v.reason:
        out["reason"] = v.reason
    return out


def cmd_coformalize(args, doc, stem):
    from .coformal import ClosednessViolation, coformalize

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    cutoff = args.max_degree or alg.ctx.max_degree()
    try:
        v = coformalize(alg, cutoff)
    except ClosednessViolation as exc:
        raise ValidationFailure(str(exc), {"subject": name, "kind": "ClosednessViolation", "reason": str(exc)})
    return cutoff, [_coformal_dict(name, v)], False


def _search_dict(name, target, v, cutoff) -> dict:
    out = {"subject": name, "target": target, "kind": v.kind, "cutoff": cutoff}
    if v.iso is not None:
        out["iso"] = _morphism_dict(v.iso)
    if v.reason:
        out["reason"] = v.reason
    if v.trace is not None:
        names = v.trace.params
        out["trace"] = {
            "census": v.trace.census,
            "branches": [
                {
                    "assumptions": [f"{p} {'= 0' if k == 'zero' else '!= 0'}" for p, k in b.assumptions],
                    "outcome": b.outcome,
                    "contradiction": None if b.contradiction is None else
                    {"constraint": b.contradiction[0], "reduced": b.contradiction[1], "reason": b.contradiction[2]},
                    "steps": len(b.steps),
                    "note": b.note,
                }
                for b in v.trace.branches
            ],
            "parameters": len(names),
        }
    return out


def cmd_report(args, doc, stem):
    from .coformal import ClosednessViolation, coformality_report

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    cutoff = args.max_degree or _default_cutoff(alg)
    try:
        rep = coformality_report(alg, cutoff, args.split_depth)
    except ClosednessViolation as exc:
        raise ValidationFailure(str(exc), {"subject": name, "kind": "ClosednessViolation", "reason": str(exc)})
    verdict = {
        "subject": name,
        "kind": {True: "coformal", False: "not-coformal", None: "undecided"}[rep.coformal],
        "cutoff": cutoff,
        "toomer_limit": rep.cat0_limit,
        "cat0_limit": rep.cat0_limit,
        "cat0": rep.cat0,
        "coformalize": _coformal_dict(name, rep.verdict),
    }
    if rep.search is not None:
        verdict["iso_search"] = _search_dict(name, "limit", rep.search, None)
    return cutoff, [verdict], False


def cmd_toomer(args, doc, stem):
    from .cohomology import toomer

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    cutoff = args.max_degree or _default_cutoff(alg)
    v = toomer(alg, cutoff)
    out = {"subject": name, "kind": "toomer", "cutoff": cutoff, "value": v.value, "certainty": v.certainty.value}
    if v.witness is not None:
        out["witness"] = {"degree": v.witness[0], "class": format_polynomial(v.witness[1])}
    return cutoff, [out], False


def _lie_dict(l) -> dict:
    return {
        "basis": [[n, d] for n, d in l.basis],
        "brackets": [
            {"left": l.names[i], "right": l.names[j], "value": {l.names[k]: c for k, c in vec.items()}}
            for (i, j), vec in sorted(l.brackets.items())
        ],
    }


def cmd_lie_dual(args, doc, stem):
    from .lie import NotQuadratic, quadratic_dual

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    alg = _checked_algebra(doc, name)
    try:
        l = quadratic_dual(alg)
    except NotQuadratic as exc:
        raise ValidationFailure(str(exc), {"subject": name, "kind": "NotQuadratic", "reason": str(exc)})
    return None, [dict(subject=name, kind="lie_dual", **_lie_dict(l))], False


def cmd_free_lie(args, doc, stem):
    from .lie import free_lie, free_lie_dims

    gens = []
    for part in args.gens.split(","):
        nm, _, deg = part.partition(":")
        if not nm or not deg.isdigit():
            raise UsageError("--gens expects name:degree pairs, e.g. a:2,b:2")
        gens.append((nm.strip(), int(deg)))
    cutoff = args.max_degree or 10
    l = free_lie(gens, cutoff)
    dims = l.dims(cutoff)
    verdict = dict(subject=args.gens, kind="free_lie", cutoff=cutoff, dims=dims[1:],
                   pbw_dims=free_lie_dims([d for _, d in gens], cutoff)[1:], **_lie_dict(l))
    return cutoff, [verdict], False


def cmd_iso_search(args, doc, stem):
    from .coformal import coformal_limit
    from .isosearch import parametrized_iso_search

    name = _pick(doc, stem, args.name, (AlgebraDecl, WedgeDecl, FibrationDecl))
    src = doc.algebra(name)
    if args.target in (None, "limit"):
        tgt, tname = coformal_limit(src), "limit"
    else:
        tname = _pick(doc, stem, args.target, ())
        tgt = doc.algebra(tname)
    cutoff = args.max_degree or max(src.ctx.max_degree(), tgt.ctx.max_degree())
    v = parametrized_iso_search(src, tgt, cutoff, args.split_depth)
    return cutoff, [_search_dict(name, tname, v, cutoff)], False


def cmd_fibration_analyze(args, doc, stem):
    from .cohomology import toomer
    from .coformal import coformalize
    from .dga import quadratic_part
    from .fibration import (DSquaredViolation, HypothesesNotMet, NotSpherical, RelativeMinimalityViolation,
                            RestrictionMismatch, check_tncz, check_tnhz, degree_gap_criterion,
                            limit_fibration, spherical_koszul_classifier)

    name = _pick(doc, stem, args.name, (FibrationDecl,))
    if not isinstance(doc.get(name), FibrationDecl):
        raise UsageError(f"{name!r} is not a fibration")
    try:
        rm = doc.fibration(name)
    except (DSquaredViolation, RelativeMinimalityViolation, RestrictionMismatch) as exc:
        raise ValidationFailure(str(exc), {"subject": name, "kind": "invalid", "reason": str(exc)})
    wedge_top = rm.base.ctx.max_degree() if rm.base.wedge_spheres is not None else None
    cutoff = args.max_degree or _default_cutoff(rm.total, wedge_top)
    out = {"subject": name, "kind": "fibration", "cutoff": cutoff,
           "tnhz": check_tnhz(rm), "tncz": check_tncz(rm, cutoff)}
    try:
        gap = degree_gap_criterion(rm)
        out["degree_gap"] = {"applies": gap.applies, "n": gap.n, "m": gap.m}
    except HypothesesNotMet as exc:
        out["degree_gap"] = {"applies": None, "reason": str(exc)}
    if out["tnhz"] and rm.base.is_purely_quadratic():
        lim = limit_fibration(rm)
        out["limit_fibration"] = _algebra_dict(lim.total)
        if rm.quotient.is_purely_quadratic():
            e0 = toomer(quadratic_part(rm.total), cutoff).value
            pipe = {"toomer_limit": e0}
            if e0 <= 2:
                pipe["coformalize"] = coformalize(rm.total, rm.total.ctx.max_degree()).kind
            out["pipeline"] = pipe
    if rm.base.wedge_spheres is not None:
        try:
            kv = spherical_koszul_classifier(rm, cutoff)
            out["koszul"] = {"kind": kv.kind, "case": kv.case, "cases": kv.cases,
                             "checks": kv.checks, "reason": kv.reason}
        except NotSpherical as exc:
            out["koszul"] = {"kind": "NotSpherical", "reason": str(exc)}
    return cutoff, [out], False


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "limit": cmd_limit,
    "coformalize": cmd_coformalize,
    "report": cmd_report,
    "toomer": cmd_toomer,
    "lie-dual": cmd_lie_dual,
    "free-lie": cmd_free_lie,
    "iso-search": cmd_iso_search,
    "fibration-analyze": cmd_fibration_analyze,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sullivan", description="Exact computations with minimal Sullivan algebras.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd)
        if cmd == "free-lie":
            sp.add_argument("--gens", required=True, help="name:degree pairs, e.g. a:2,b:2")
        else:
            sp.add_argument("file", help="DSL file or corpus fixture name")
            sp.add_argument("name", nargs="?", help="declaration to analyse")
        if cmd == "iso-search":
            sp.add_argument("target", nargs="?", help="target algebra (default: the coformal limit)")
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--max-degree", type=int, default=None, help="cutoff: degrees below N are covered")
        sp.add_argument("--split-depth", type=int, default=4)
    return p


def _render_text(report: dict) -> str:
    lines = [f"sullivan {report['tool_version']} {report['command']} (cutoff {report['cutoff']})"]

    def emit(obj, indent):
        pad = "  " * indent
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                emit(v, indent + 1)
            elif isinstance(v, list) and v and isinstance(v[0], dict):
                lines.append(f"{pad}{k}:")
                for item in v:
                    emit(item, indent + 1)
                    lines.append(f"{pad}  --")
            elif isinstance(v, list):
                lines.append(f"{pad}{k}: {', '.join(map(str, v))}")
            else:
                lines.append(f"{pad}{k}: {v}")

    for v in report["verdicts"]:
        lines.append("")
        emit(v, 0)
    return "\n".join(lines)


def run(argv) -> tuple:
    """(exit status, report dict or None, error message, output format)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None, "", "text"
    fmt = args.format
    if args.max_degree is not None and args.max_degree < 1:
        return 2, None, "--max-degree must be positive", fmt
    try:
        if args.command == "free-lie":
            doc, stem = DslDocument(), ""
        else:
            doc, stem = load_document(args.file)
        cutoff, verdicts, failed = COMMANDS[args.command](args, doc, stem)
        status = 1 if failed else 0
    except UsageError as exc:
        return 2, None, str(exc), fmt
    except DslError as exc:
        return 1, None, f"{type(exc).__name__}: {exc}", fmt
    except ValidationFailure as exc:
        cutoff, verdicts, status = args.max_degree, [exc.verdict] if exc.verdict else [], 1
    report = {
        "tool_version": __version__,
        "schema": SCHEMA_VERSION,
        "command": args.command,
        "cutoff": cutoff,
        "verdicts": jsonable(verdicts),
    }
    return status, report, "", fmt


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    status, report, err, fmt = run(argv)
    if err:
        print(f"error: {err}", file=sys.stderr)
    if report is not None:
        if fmt == "json":
            print(json.dumps(report, indent=2, ensure_ascii=False))
        else:
            print(_render_text(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
