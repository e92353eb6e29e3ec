"""Command-line front end.  Reports are JSON unless --human is given.

Exit codes: 0 success / valid / accepted, 1 refuted / rejected / failing
fixture, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import frames as FR
from .decide import ConsistencyError, SearchBounds, frame_valid, sat_bounded, valid_bounded
from .decide.oracle import sample_refutation
from .decide.search import LOGICS
from .formula import (
    Binary, Const, FormulaSyntaxError, Unary, Var, language_of, modal_depth, parse, size,
    to_text, to_unicode,
)
from .golden import evaluate, load_json, run_goldens
from .gvalue import TwinValue, fmt
from .hilbert import DerivationError, check_derivation
from .kripke import FModel, ModelError, frame_from_json, model_from_json, model_to_json
from .transform import (
    TranslationError, bang, circ, embedding_pair, partial, plus_bullet, star, to_nnf,
)


class UsageError(Exception):
    pass


def _ast(f):
    if isinstance(f, Var):
        return {"var": f.name, **({"starred": True} if f.starred else {})}
    if isinstance(f, Const):
        return {"const": f.symbol}
    if isinstance(f, Unary):
        return {"op": f.op, "args": [_ast(f.child)]}
    if isinstance(f, Binary):
        return {"op": f.op, "args": [_ast(f.left), _ast(f.right)]}
    d = {"modal": f.shape, "family": f.family, "polarity": f.polarity}
    if f.index is not None:
        d["index"] = f.index
    d["args"] = [_ast(f.child)]
    return d


def _show(x):
    if isinstance(x, TwinValue):
        return [fmt(x.t), fmt(x.f)]
    return fmt(x)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _emit(out, args, human: Optional[str] = None):
    if args.human and human is not None:
        print(human)
    else:
        print(json.dumps(out, indent=2, ensure_ascii=False))


def _write_witness(verdict, path):
    if path and verdict.witness is not None:
        with open(path, "w") as fh:
            json.dump(verdict.witness.to_json(), fh, indent=2, ensure_ascii=False, sort_keys=True)
            fh.write("\n")


# -- subcommands -------------------------------------------------------------

def cmd_parse(args):
    f = parse(args.formula)
    out = {"formula": to_text(f), "unicode": to_unicode(f), "language": language_of(f),
           "size": size(f), "modal_depth": modal_depth(f), "ast": _ast(f)}
    _emit(out, args, to_unicode(f))
    return 0


def cmd_eval(args):
    m = model_from_json(_read_json(args.model))
    f = parse(args.formula)
    frame = m.base.frame if isinstance(m, FModel) else m.frame
    worlds = [args.world] if args.world else list(frame.worlds)
    vals = {w: _show(evaluate(m, f, w)) for w in worlds}
    if args.world:
        v = vals[args.world]
        human = f"({v[0]}, {v[1]})" if isinstance(v, list) else v
        _emit({"formula": to_text(f), "world": args.world, "value": v}, args, human)
    else:
        _emit({"formula": to_text(f), "values": vals}, args,
              "\n".join(f"{w}\t{v}" for w, v in vals.items()))
    return 0


def _bounds(args):
    return SearchBounds(args.max_worlds, args.grid, args.depth)


def cmd_validity(args):
    f = parse(args.formula)
    if args.frame:
        fr = frame_from_json(_read_json(args.frame))
        v = frame_valid(fr, f, args.world, semantics=args.semantics)
        if args.oracle_samples:
            sem = args.semantics if args.semantics != "auto" else None
            hit = sample_refutation(fr, f, args.world, args.oracle_samples, args.seed,
                                    twin=None if sem is None else sem == "twin")
            if hit is not None and v.valid:
                raise ConsistencyError("random sampling refuted a formula decided valid")
            v.info["oracle"] = {"samples": args.oracle_samples, "seed": args.seed,
                                "refuted": hit is not None}
    else:
        v = valid_bounded(f, args.logic, _bounds(args))
    _write_witness(v, args.emit_countermodel)
    out = v.to_json()
    if args.emit_countermodel and v.witness is not None:
        out["countermodel_path"] = args.emit_countermodel
    _emit(out, args, v.status)
    return 1 if v.refuted else 0


def cmd_sat(args):
    v = sat_bounded(parse(args.formula), args.logic, _bounds(args))
    _write_witness(v, args.emit_countermodel)
    _emit(v.to_json(), args, v.status)
    return 0 if v.status == "satisfiable" else 1


_TRANSLATIONS = ("nnf", "star", "partial", "circ", "plusbullet", "bang", "pair")


def cmd_translate(args):
    f = parse(args.formula)
    chosen = [t for t in _TRANSLATIONS if getattr(args, t)]
    if len(chosen) != 1:
        raise UsageError("pick exactly one translation flag")
    t = chosen[0]
    if t == "nnf":
        out = to_text(to_nnf(f))
    elif t == "star":
        out = to_text(star(to_nnf(f)))
    elif t == "partial":
        out = to_text(partial(f, mono=args.mono))
    elif t == "circ":
        out = to_text(circ(f))
    elif t == "plusbullet":
        out = to_text(plus_bullet(f))
    elif t == "bang":
        out = to_text(bang(f))
    else:
        a, b = embedding_pair(f, mono=args.mono)
        out = [to_text(a), to_text(b)]
    _emit({"input": to_text(f), t: out}, args, out if isinstance(out, str) else "\n".join(out))
    return 0


def _fls_spec(prop):
    body = prop[len("fls:"):]
    try:
        nums, x = body.split("@")
        h, i, j, k = (int(n) for n in nums.split(","))
    except ValueError:
        raise UsageError("fls property is written fls:h,i,j,k@world") from None
    return h, i, j, k, x


def cmd_frame_check(args):
    fr = frame_from_json(_read_json(args.frame))
    prop = args.property
    out = {"property": prop}
    if prop.startswith("fls:"):
        h, i, j, k, x = _fls_spec(prop)
        fr.check_world(x)
        ok = FR.fls_frame_check(fr, x, h, i, j, k)
        out["holds"] = ok
        if not ok:
            y, z = FR.fls_counterexample(fr, x, h, i, j, k)
            m = FR.fls_refuting_valuation(fr, x, y, z, h, i, j, k)
            out["witness"] = {"y": y, "z": z, "model": model_to_json(m)}
        _emit(out, args, "holds" if ok else "fails")
        return 0 if ok else 1
    if prop not in ("crisp+", "crisp-", "equal", "tau", "finbranch"):
        raise UsageError(f"unknown property {prop!r}")
    structural = FR.structural_check(fr, prop)
    semantic = FR.defining_formula_check(fr, prop)
    if isinstance(structural, set):
        out["worlds"] = sorted(structural, key=fr.worlds.index)
        out["agrees_with_formula"] = structural == semantic
        ok = bool(structural)
    else:
        out["holds"] = structural
        out["agrees_with_formula"] = structural == semantic
        ok = structural
        wit = None
        if prop in ("crisp+", "crisp-") and not structural:
            wit = FR.crispness_witness(fr, "plus" if prop == "crisp+" else "minus")
        elif prop == "equal" and not structural:
            wit = FR.monorel_witness(fr)
        if wit is not None:
            out["witness"] = {"world": wit[1], "model": model_to_json(wit[0])}
    _emit(out, args, json.dumps(out.get("worlds", out.get("holds"))))
    return 0 if ok else 1


def cmd_proof_check(args):
    d = _read_json(args.derivation)
    v = check_derivation(d, calc=args.calculus)
    _emit(v.to_json(), args, "accepted" if v.accepted else f"rejected at step {v.step}: {v.reason}")
    return 0 if v.accepted else 1


def cmd_fixtures(args):
    rows = run_goldens()
    for name, want in (("deriv_mp.json", True), ("deriv_trinec_blocked.json", False),
                       ("deriv_nec.json", True), ("deriv_dt_hyp.json", True), ("deriv_dt_impl.json", True)):
        got = check_derivation(load_json(name)).accepted
        rows.append({"name": name, "formula": "", "world": "",
                     "expected": "accepted" if want else "rejected",
                     "got": "accepted" if got else "rejected", "ok": got == want})
    ok = all(r["ok"] for r in rows)
    if args.human:
        width = max(len(r["name"]) for r in rows)
        for r in rows:
            flag = "ok  " if r["ok"] else "FAIL"
            print(f"{flag} {r['name']:<{width}}  {r['got']:<14} expected {r['expected']}")
    else:
        print(json.dumps({"all_ok": ok, "rows": rows}, indent=2, ensure_ascii=False))
    return 0 if ok else 1


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gmk", description="Fuzzy bi-Gödel modal logic toolkit.")
    p.add_argument("--human", action="store_true", help="plain-text output instead of JSON")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--human", action="store_true", default=argparse.SUPPRESS)

    sp = sub.add_parser("parse", help="parse and echo a formula")
    sp.add_argument("formula")
    common(sp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("eval", help="evaluate a formula on a model file")
    sp.add_argument("model")
    sp.add_argument("formula")
    sp.add_argument("world", nargs="?")
    common(sp)
    sp.set_defaults(func=cmd_eval)

    for name, func in (("validity", cmd_validity), ("sat", cmd_sat)):
        sp = sub.add_parser(name, help=f"bounded {name} search")
        sp.add_argument("formula")
        sp.add_argument("--logic", default="kbig-f", choices=sorted(LOGICS))
        sp.add_argument("--max-worlds", type=int, default=3)
        sp.add_argument("--grid", type=int, default=None, help="value grid size (default |f|+2)")
        sp.add_argument("--depth", type=int, default=None, help="tree depth (default modal depth)")
        sp.add_argument("--seed", type=int, default=0, help="seed for --oracle-samples")
        sp.add_argument("--emit-countermodel", metavar="PATH")
        if name == "validity":
            sp.add_argument("--frame", help="decide validity exactly on this frame file")
            sp.add_argument("--world", help="pointed world for --frame (default: every world)")
            sp.add_argument("--semantics", default="auto", choices=("auto", "single", "twin"))
            sp.add_argument("--oracle-samples", type=int, default=0,
                            help="cross-check a --frame verdict with this many random valuations")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("translate", help="apply a syntactic translation")
    sp.add_argument("formula")
    for t in _TRANSLATIONS:
        sp.add_argument(f"--{t}", action="store_true")
    sp.add_argument("--mono", action="store_true", help="mono-relational ∂ (no indices)")
    common(sp)
    sp.set_defaults(func=cmd_translate)

    sp = sub.add_parser("frame-check", help="check a frame property")
    sp.add_argument("frame")
    sp.add_argument("--property", required=True, help="crisp+, crisp-, equal, fls:h,i,j,k@x, tau, finbranch")
    common(sp)
    sp.set_defaults(func=cmd_frame_check)

    sp = sub.add_parser("proof-check", help="check a Hilbert derivation file")
    sp.add_argument("derivation")
    sp.add_argument("--calculus", default=None)
    common(sp)
    sp.set_defaults(func=cmd_proof_check)

    sp = sub.add_parser("fixtures", help="run the bundled golden table")
    common(sp)
    sp.set_defaults(func=cmd_fixtures)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (UsageError, FormulaSyntaxError, ModelError, TranslationError, DerivationError,
            KeyError, ValueError) as e:
        print(f"gmk: error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
