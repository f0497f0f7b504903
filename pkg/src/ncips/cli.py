"""Command-line surface: one binary, subcommands for each pipeline stage.

Exit codes: 0 success/accept, 1 reject (nonzero polynomial, failed
check, rejected certificate), 2 usage or input errors.  With
--format json, reject and error reasons go to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import abp as abp_mod
from . import pit as pit_mod
from . import proofsys as ps
from .fields import parse_field_spec
from .formula import expand, format_formula, metrics, parse_formula
from .poly import DEFAULT_TERM_CAP, TermBudgetError
from .transform import balance, homogeneous_parts


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _reject(args, payload: dict, text: str) -> int:
    if args.format == "json":
        print(json.dumps(payload), file=sys.stderr)
    else:
        print(text, file=sys.stderr)
    return 1


def _word_text(word) -> str:
    return "".join(f"x{k}" for k in word) if word else "1"


def _cmd_parse(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    _emit(args, {"formula": format_formula(f)}, format_formula(f))
    return 0


def _cmd_stats(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    m = metrics(f)
    _emit(
        args,
        {"size": m.size, "depth": m.depth, "syntactic_degree": m.syntactic_degree},
        f"size={m.size} depth={m.depth} syntactic_degree={m.syntactic_degree}",
    )
    return 0


def _cmd_expand(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    p = expand(f, args.term_cap)
    payload = {
        "terms": [
            {"word": list(w), "coeff": field.to_text(c)} for w, c in p.sorted_terms()
        ]
    }
    _emit(args, payload, p.to_text())
    return 0


def _cmd_pit(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    if pit_mod.is_identically_zero(f):
        _emit(args, {"zero": True}, "zero")
        return 0
    found = pit_mod.nonzero_witness(f)
    word, coeff = found
    return _reject(
        args,
        {"reason": "nonzero", "witness": _word_text(word), "coeff": field.to_text(coeff)},
        f"nonzero (witness monomial {_word_text(word)}, coefficient {field.to_text(coeff)})",
    )


def _cmd_balance(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    g = balance(f)
    m = metrics(g)
    _emit(
        args,
        {"formula": format_formula(g), "size": m.size, "depth": m.depth},
        format_formula(g),
    )
    return 0


def _cmd_homogenize(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    parts = homogeneous_parts(balance(f))
    payload = {"parts": [{"degree": i, "formula": format_formula(p)} for i, p in enumerate(parts)]}
    text = "\n".join(f"{i}: {format_formula(p)}" for i, p in enumerate(parts))
    _emit(args, payload, text)
    return 0


def _cmd_abp(args, field) -> int:
    from .formula import syntactic_homogeneous_degree

    f = parse_formula(_read_input(args.file), field)
    d = syntactic_homogeneous_degree(f)
    if d is not None and d >= 1:
        a, _ = abp_mod.formula_to_abp(f)
        components = {d: a}
    else:
        components = abp_mod.split_degree_components(f)
    if args.format == "json":
        body = [abp_mod.abp_to_json(a) for _, a in sorted(components.items())]
        print(json.dumps(body[0] if len(body) == 1 else {"components": body}, indent=2))
    else:
        print("\n".join(abp_mod.abp_to_dot(a) for _, a in sorted(components.items())))
    return 0


def _cmd_witness(args, field) -> int:
    f = parse_formula(_read_input(args.file), field)
    if args.check is not None:
        w = pit_mod.witness_from_json(json.loads(_read_input(args.check)))
        if pit_mod.verify_witnesses(f, w, cap=args.term_cap):
            _emit(args, {"verified": True}, "witness verified")
            return 0
        return _reject(args, {"reason": "witness rejected"}, "witness rejected")
    try:
        w = pit_mod.extract_witnesses(f)
    except (pit_mod.NotIdenticallyZeroError, pit_mod.NotHomogeneousError) as exc:
        return _reject(args, {"reason": str(exc)}, str(exc))
    if not pit_mod.verify_witnesses(f, w, cap=args.term_cap):
        return _reject(args, {"reason": "extracted witness failed self-check"}, "self-check failed")
    print(json.dumps(pit_mod.witness_to_json(w), indent=2))
    return 0


def _cmd_translate(args, field) -> int:
    text = _read_input(args.file)
    if args.prop:
        t = ps.parse_prop(text)
        f = ps.translate_tr(t, field)
        _emit(args, {"formula": format_formula(f)}, format_formula(f))
        return 0
    cnf = ps.parse_dimacs(text)
    system = ps.build_axiom_system(cnf, field)
    if args.format == "json":
        payload = {
            "field": field.name,
            "num_vars": system.num_vars,
            "axioms": [
                {"y": t, "role": ps._role_to_json(r), "formula": format_formula(f)}
                for t, (r, f) in enumerate(zip(system.roles, system.formulas), start=1)
            ],
        }
        print(json.dumps(payload, indent=2))
    else:
        for t, (r, f) in enumerate(zip(system.roles, system.formulas), start=1):
            print(f"y{t} {' '.join(str(x) for x in r)}: {format_formula(f)}")
    return 0


def _cmd_fpc_check(args, field) -> int:
    proof, system = ps.proof_from_json(json.loads(_read_input(args.file)))
    report = ps.check_fpc(proof, system, tree_like=proof.tree_like)
    if report.ok:
        _emit(args, {"ok": True, "lines": len(proof.lines)}, f"accepted ({len(proof.lines)} lines)")
        return 0
    return _reject(
        args,
        {"ok": False, "line": report.line, "reason": report.reason},
        f"rejected at line {report.line}: {report.reason}",
    )


def _cmd_fpc_to_ips(args, field) -> int:
    proof, system = ps.proof_from_json(json.loads(_read_input(args.file)))
    try:
        cert = ps.fpc_to_ips(proof, system)
    except ValueError as exc:
        return _reject(args, {"reason": str(exc)}, str(exc))
    print(json.dumps(ps.certificate_to_json(cert), indent=2))
    return 0


def _cmd_verify(args, field) -> int:
    cert = ps.certificate_from_json(json.loads(_read_input(args.file)))
    if ps.verify_ips(cert):
        _emit(args, {"accepted": True}, "certificate accepted")
        return 0
    return _reject(args, {"reason": "certificate rejected"}, "certificate rejected")


_COMMANDS = {
    "parse": _cmd_parse,
    "stats": _cmd_stats,
    "expand": _cmd_expand,
    "pit": _cmd_pit,
    "balance": _cmd_balance,
    "homogenize": _cmd_homogenize,
    "abp": _cmd_abp,
    "witness": _cmd_witness,
    "translate": _cmd_translate,
    "fpc-check": _cmd_fpc_check,
    "fpc-to-ips": _cmd_fpc_to_ips,
    "verify": _cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncips",
        description="Non-commutative polynomial proof toolkit",
    )
    parser.add_argument("--field", default="q", help="gf2, q, or zp:<prime> (default q)")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0, help="reserved for generator-backed commands")
    default_cap = int(os.environ.get("NCIPS_TERM_CAP", DEFAULT_TERM_CAP))
    parser.add_argument("--term-cap", type=int, default=default_cap, help="expansion term budget")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        if name == "witness":
            p.add_argument("--check", metavar="WITNESS_JSON", default=None)
        if name == "translate":
            p.add_argument("--prop", action="store_true", help="input is a propositional formula")
        p.add_argument("file", help="input file, or - for stdin")
    return parser


def main(argv=None) -> int:
    sys.setrecursionlimit(100000)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        field = parse_field_spec(args.field)
    except ValueError as exc:
        print(json.dumps({"error": str(exc)}) if args.format == "json" else str(exc), file=sys.stderr)
        return 2
    try:
        return _COMMANDS[args.command](args, field)
    except TermBudgetError as exc:
        msg = {"error": str(exc)}
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        msg = {"error": str(exc)}
    print(json.dumps(msg) if args.format == "json" else msg["error"], file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
