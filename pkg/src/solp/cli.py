"""Command-line front end: ``solp {check,solve,translate,verify,query,jfp}``.

Exit codes: 0 success or true verdict, 1 invalid input, 2 I/O failure,
3 a search cap was exceeded, 10 a false verdict (query, verify, jfp).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .caps import Caps
from .errors import CapExceeded, DiagnosticError, SolpError
from .model import Collection, canonical_model, is_colp, vars_of
from .parser import load_sources, parse_atom, parse_collection
from .random_gen import random_collection, random_colp
from .reasoning import check_joint_fixpoints, query
from .social import Semantics, enumerate_social_models
from .translate import emit_text, translate_all
from .verify import verify_collection

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_CAP, EXIT_FALSE = 0, 1, 2, 3, 10


class InputError(SolpError):
    pass


def _caps(args) -> Caps:
    env = Caps.from_env()
    return Caps(
        args.afp_cap or env.afp_atoms,
        args.cand_cap or env.candidates,
        args.oracle_cap or env.oracle_universe,
    )


def _semantics(args) -> Semantics:
    return Semantics(args.candidates, args.cardinality)


def _load(args) -> Collection:
    if not args.paths:
        raise InputError("no input files given")
    return parse_collection(load_sources(args.paths))


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def model_text(c: Collection, m) -> str:
    atoms = canonical_model(c, m)
    return "{ " + ", ".join(map(str, atoms)) + " }" if atoms else "{}"


def model_json(c: Collection, m) -> list[dict]:
    return [
        {"program": la.program, "predicate": la.atom.predicate, "args": list(la.atom.args)}
        for la in canonical_model(c, m)
    ]


def render_models(c: Collection, models, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([model_json(c, m) for m in models], indent=None) + "\n"
    return "".join(model_text(c, m) + "\n" for m in models)


# -- commands -------------------------------------------------------------------


def cmd_check(args) -> int:
    c = _load(args)
    print(f"ok: {c.n} program(s): {', '.join(c.ids)}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    c = _load(args)
    models = enumerate_social_models(c, _semantics(args), _caps(args))
    _write(args, render_models(c, models, args.format))
    return EXIT_OK


def cmd_translate(args) -> int:
    c = _load(args)
    _write(args, emit_text(translate_all(c, prune=not args.no_prune)))
    return EXIT_OK


def _verify_one(c: Collection, args, label: str) -> tuple[bool, dict]:
    r = verify_collection(c, _semantics(args), args.method, _caps(args))
    report = {
        "instance": label,
        "equal": r.ok,
        "social_models": len(r.direct),
        "answer_sets": r.answer_sets,
        "problems": r.problems,
    }
    if not r.ok:
        report["direct"] = [model_json(c, m) for m in r.direct]
        report["projected"] = [model_json(c, m) for m in r.projected]
    return r.ok, report


def cmd_verify(args) -> int:
    instances = []
    if args.paths:
        instances.append((", ".join(args.paths), _load(args)))
    for k in range(args.random or 0):
        seed = args.seed + k
        instances.append((f"random seed {seed}", random_collection(seed)))
    if not instances:
        raise InputError("give input files or --random COUNT")
    all_ok = True
    reports = []
    for label, c in instances:
        ok, rep = _verify_one(c, args, label)
        all_ok &= ok
        reports.append(rep)
    if args.format == "json":
        _write(args, json.dumps(reports, indent=2) + "\n")
    else:
        lines = []
        for rep in reports:
            verdict = "equal" if rep["equal"] else "MISMATCH"
            lines.append(f"{rep['instance']}: {verdict} ({rep['social_models']} social models, "
                         f"{rep['answer_sets']} answer sets)")
            for p in rep["problems"]:
                lines.append(f"  problem: {p}")
            if not rep["equal"]:
                lines.append(f"  direct:    {rep['direct']}")
                lines.append(f"  projected: {rep['projected']}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if all_ok else EXIT_FALSE


def cmd_query(args) -> int:
    c = _load(args)
    x = parse_atom(args.atom)
    if not any(x in vars_of(p) for p in c.programs):
        print(f"warning: atom '{x}' does not occur in any program", file=sys.stderr)
    v = query(c, x, args.mode, semantics=_semantics(args), caps=_caps(args))
    if args.format == "json":
        out = {
            "mode": v.mode,
            "atom": str(x),
            "answer": v.answer,
            "vacuous": v.vacuous,
            "witnesses": [{"model": model_json(c, m), "programs": list(p)} for m, p in v.witnesses],
        }
        _write(args, json.dumps(out) + "\n")
    else:
        lines = [("true" if v.answer else "false") + (" (no social models)" if v.vacuous else "")]
        for m, progs in v.witnesses:
            held = ", ".join(progs) or "none"
            lines.append(f"witness: {model_text(c, m)}  holds in: {held}")
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if v.answer else EXIT_FALSE


def cmd_jfp(args) -> int:
    batches = []
    if args.paths:
        c = _load(args)
        if not all(is_colp(p) for p in c.programs):
            raise InputError("not a COLP collection: social conditions or constraints present")
        batches.append((", ".join(args.paths), list(c.programs)))
    for k in range(args.random or 0):
        seed = args.seed + k
        batches.append((f"random seed {seed}", random_colp(seed)))
    if not batches:
        raise InputError("give input files or --random COUNT")
    sem = Semantics(args.candidates if args.candidates_given else "afp", args.cardinality)
    all_ok = True
    lines = []
    for label, ps in batches:
        r = check_joint_fixpoints(ps, sem, _caps(args), range(1, args.n + 1))
        all_ok &= r.ok
        lines.append(f"{label}: {'ok' if r.ok else 'COUNTEREXAMPLE'} "
                     f"({len(r.social)} social models, {len(r.joint)} joint fixpoints, "
                     f"sigma_fixpoints={'ok' if r.sigma_ok else 'fail'}, uniform={'ok' if r.uniform else 'fail'})")
        if len(batches) == 1:
            for f in r.joint:
                lines.append("  joint fixpoint: {" + ", ".join(sorted(map(str, f))) + "}")
        for note in r.notes:
            lines.append(f"  note: {note}")
    _write(args, "\n".join(lines) + "\n")
    return EXIT_OK if all_ok else EXIT_FALSE


# -- wiring ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="solp", description="Social logic programming engine")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("paths", nargs="*", help=".solp files or directories")
        p.add_argument("--out", help="write output here instead of stdout")
        if fmt:
            p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--afp-cap", type=int, help="max atoms per program (SOLP_AFP_CAP)")
        p.add_argument("--cand-cap", type=int, help="max candidate interpretations (SOLP_CAND_CAP)")
        p.add_argument("--oracle-cap", type=int, help="max generic oracle universe (SOLP_ORACLE_CAP)")
        p.add_argument("--candidates", choices=("all", "afp"), default=None,
                       help="per-program candidates: every self-supporting set (default) or autonomous fixpoints")
        p.add_argument("--cardinality", choices=("exact", "witness"), default="exact",
                       help="cardinal range read as an exact count (default) or as an existential group")

    for name, fn, fmt in (("check", cmd_check, False), ("solve", cmd_solve, True),
                          ("translate", cmd_translate, False), ("verify", cmd_verify, True),
                          ("query", cmd_query, True), ("jfp", cmd_jfp, False)):
        p = sub.add_parser(name)
        common(p, fmt)
        p.set_defaults(func=fn)
        if not fmt:
            p.set_defaults(format="text")
        if name == "translate":
            p.add_argument("--no-prune", action="store_true",
                           help="keep guess rules for agents that can never satisfy the content")
        if name in ("verify", "jfp"):
            p.add_argument("--random", type=int, metavar="COUNT", help="also check COUNT seeded random instances")
            p.add_argument("--seed", type=int, default=0)
        if name == "verify":
            p.add_argument("--method", choices=("structured", "generic"), default="structured")
        if name == "jfp":
            p.add_argument("--n", type=int, default=4, help="check FP(P̂)=AFP(σ^k(P)) for k=1..N")
        if name == "query":
            p.add_argument("--mode", choices=("ss", "is", "sc", "ic"), required=True)
            p.add_argument("--atom", required=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.candidates_given = args.candidates is not None
    if args.candidates is None:
        args.candidates = "all"
    try:
        return args.func(args)
    except DiagnosticError as e:
        for d in e.diagnostics:
            print(d, file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (SolpError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
