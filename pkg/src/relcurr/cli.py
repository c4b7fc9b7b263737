"""Command line front end: ``relcurr {analyze,eval,restrict,extend,approximate,act}``.

Every subcommand prints one JSON document on stdout.  Errors go to stderr
with exit status 1 (bad input), 2 (not malnormal), 3 (zero current),
4 (automorphism does not preserve the system) or 5 (internal check failed).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from relcurr.approximation import approximate
from relcurr.boundary import build_system, stratum_S_k
from relcurr.currents import act, eval_rational, extend_k, restrict_relative
from relcurr.errors import (
    InputError,
    InvariantError,
    MalnormalityError,
    NotStabilizingError,
    RelCurrError,
    ZeroCurrentError,
)
from relcurr.serialize import (
    cyclic_list,
    dumps,
    loads,
    parse_rational,
    parse_system_text,
    rational,
    rational_from_json,
    rational_to_json,
    signed_to_json,
    sorted_words,
    table_from_json,
    table_to_json,
)
from relcurr.words import Automorphism, CyclicWord, format_word, parse_word

EXIT_CODES = [
    (MalnormalityError, 2),
    (ZeroCurrentError, 3),
    (NotStabilizingError, 4),
    (InvariantError, 5),
    (RelCurrError, 1),
]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _system(args):
    graphs, rank = parse_system_text(_read(args.system), args.rank)
    return build_system(graphs, rank)


def _target_table(system, path: str, k: int):
    """A current file holds either a table or a rational current."""
    obj = loads(_read(path))
    if isinstance(obj, dict) and "terms" in obj:
        return restrict_relative(system, rational_from_json(obj, system.rank), k)
    table = table_from_json(obj, system)
    if table.depth < k:
        raise InputError(f"table depth {table.depth} is below k = {k}")
    return table


def _check_k(system, k):
    if k < system.word_length:
        raise InputError(f"k must be at least L+2 = {system.word_length}")


def cmd_analyze(args) -> dict:
    system = _system(args)
    out = {"rank": system.rank, "L": system.L, "C": sorted_words(system.C), "malnormal": True,
           "system_hash": system.fingerprint()}
    if args.stratum is not None:
        out["stratum"] = {"k": args.stratum, "words": sorted_words(stratum_S_k(system, args.stratum))}
    return out


def cmd_eval(args) -> dict:
    rank = None
    if args.system:
        rank = _system(args).rank
    g = CyclicWord.parse(args.g, rank)
    w = parse_word(args.w, rank)
    return {"g": args.g, "w": format_word(w), "value": rational(eval_rational(g, w))}


def cmd_extend(args) -> dict:
    system = _system(args)
    _check_k(system, args.k)
    eta0 = _target_table(system, args.current, args.k)
    return signed_to_json(extend_k(system, eta0, args.k, base=parse_rational(args.base)))


def cmd_restrict(args) -> dict:
    system = _system(args)
    _check_k(system, args.k)
    return table_to_json(_target_table(system, args.current, args.k))


def cmd_approximate(args) -> dict:
    system = _system(args)
    _check_k(system, args.k)
    eta0 = _target_table(system, args.current, args.k)
    tol = parse_rational(args.tol) if args.tol is not None else None
    report = approximate(system, eta0, args.k, parse_rational(args.R), tol=tol)
    return {
        "k": report.k,
        "R": rational(report.R),
        "alphas": cyclic_list(report.alphas),
        "peripheral": cyclic_list(report.peripheral),
        "approximant": rational_to_json(report.approximant),
        "residual": rational(report.residual),
        "stopping_bound": rational(report.stopping_bound),
        "remaining_mass": rational(report.remaining_mass),
        "repair_scale": rational(report.repair_scale),
        "threshold": str(report.threshold),
        "stalled": report.stalled,
    }


def cmd_act(args) -> dict:
    system = _system(args)
    phi = Automorphism.parse(system.rank, args.phi, args.phi_inv)
    current = rational_from_json(loads(_read(args.current)), system.rank)
    return rational_to_json(act(phi, current, system))


class _Parser(argparse.ArgumentParser):
    # usage errors share exit status 1 with other bad input; 2 means not malnormal
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="relcurr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_system(p, required=True):
        p.add_argument("--system", required=required,
                       help="file with one subgroup per line, generators separated by commas")
        p.add_argument("--rank", type=int, help="rank of the free group (default: inferred, at least 2)")

    p = sub.add_parser("analyze", help="L, the separating set C and optionally a stratum")
    with_system(p)
    p.add_argument("--stratum", type=int, metavar="K", help="also list the stratum of length K")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("eval", help="value of a rational current on one cylinder")
    with_system(p, required=False)
    p.add_argument("--g", required=True, help="conjugacy class, e.g. ab")
    p.add_argument("--w", required=True, help="cylinder word")
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in [
        ("restrict", cmd_restrict, "table of a current on Cyl(C) words up to length k"),
        ("extend", cmd_extend, "signed k-extension of a relative current"),
        ("approximate", cmd_approximate, "approximate a relative current by rational currents"),
    ]:
        p = sub.add_parser(name, help=helptext)
        with_system(p)
        p.add_argument("--current", required=True, help="table JSON or rational current JSON")
        p.add_argument("-k", type=int, required=True, help="depth")
        if name == "extend":
            p.add_argument("--base", default="1", help="value on letters left free (default 1)")
        if name == "approximate":
            p.add_argument("-R", required=True, help="positive rational scale")
            p.add_argument("--tol", help="residual above this marks the report as stalled")
        p.set_defaults(func=func)

    p = sub.add_parser("act", help="push a rational current through an automorphism")
    with_system(p)
    p.add_argument("--current", required=True, help="rational current JSON")
    p.add_argument("--phi", required=True, help="images of the basis, e.g. 'a:a,b:ba'")
    p.add_argument("--phi-inv", required=True, help="images under the inverse, e.g. 'a:a,b:bA'")
    p.set_defaults(func=cmd_act)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except RelCurrError as exc:
        code = next(c for cls, c in EXIT_CODES if isinstance(exc, cls))
        print(f"relcurr: {exc}", file=sys.stderr)
        return code
    sys.stdout.write(dumps(result) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
