"""
Command-line interface: ``stellar <subcommand> --type X --rank n ...``.

Results go to stdout, progress to stderr.  Exit codes: 0 success, 1 usage
error, 2 cap or budget exceeded, 3 internal self-check failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .classical import classical_count, classical_pattern_test
from .commutative import is_abelian, is_fully_commutative, is_fully_commutative_oracle
from .criteria import (STELLAR_COUNTS, build_bad_tables, embedded_rationally_smooth,
                       embedded_smooth, palindromic_vector, pattern_hits,
                       pattern_rationally_smooth, pattern_smooth, smooth_vector, sweep)
from .embeddings import embedding_hits
from .errors import CapExceeded, ConfigurationError, StellarError
from .group import TABLE_CAP, WeylGroup, set_cache_dir, weyl_group
from .poincare import (asymmetry_depth, bruhat_graph_check, factor_trace, poincare,
                       truncated_asymmetry)
from .root_system import RootSystem, build
from .subsystems import canonical, enumerate_subsystems, stellar_subsystems
from .weyl import WeylElement, from_one_line, from_word, order_of, parse_word, to_one_line

METHODS = ("pattern", "embedded", "classical", "kumar", "poincare")
PREDICATES = ("smooth", "singular", "rationally-smooth", "rationally-singular",
              "fully-commutative", "abelian")
ELEMENT_CAP = 10 ** 6


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigurationError(message)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _system(args) -> RootSystem:
    if args.type is None or args.rank is None:
        raise ConfigurationError("--type and --rank are required")
    return build(args.type, args.rank)


def _letter(rs: RootSystem) -> str:
    return rs.name[0]


def _element(args, rs: RootSystem) -> WeylElement:
    if args.word is not None and args.one_line is not None:
        raise ConfigurationError("give either --word or --one-line, not both")
    if args.word is not None:
        return from_word(rs, parse_word(args.word))
    if args.one_line is not None:
        return from_one_line(rs, parse_word(args.one_line))
    raise ConfigurationError("an element is required (--word or --one-line)")


def _oracle_cap(args) -> int:
    return args.cap if args.cap is not None else TABLE_CAP


def _group(args, rs: RootSystem, oracle: bool) -> WeylGroup:
    cap = _oracle_cap(args) if oracle else (args.cap or ELEMENT_CAP)
    return weyl_group(rs, cap)


# -- check ---------------------------------------------------------------------

def _verdicts(w: WeylElement, method: str, args) -> tuple[bool, bool, dict | None]:
    """(smooth, rationally smooth, witness) by one method."""
    rs = w.system
    if method == "pattern":
        ws, wr = pattern_smooth(w), pattern_rationally_smooth(w)
        return ws is None, wr is None, (wr or ws) if args.rational else ws
    if method == "embedded":
        ws, wr = embedded_smooth(w), embedded_rationally_smooth(w)
        return ws is None, wr is None, (wr or ws) if args.rational else ws
    if method == "classical":
        if _letter(rs) not in "ABCD":
            raise ConfigurationError(f"no one-line notation for {rs.name}")
        seq = to_one_line(w)
        return (classical_pattern_test(seq, _letter(rs)),
                classical_pattern_test(seq, _letter(rs), rational=True), None)
    G = _group(args, rs, oracle=True)
    i = G.index(w)
    smooth = bool(smooth_vector(G)[i])
    rational = bool(palindromic_vector(G)[i])
    witness = None
    if method == "poincare" and not rational:
        x = bruhat_graph_check(w, _oracle_cap(args))
        witness = {"criterion": "bruhat-graph", "irregular_vertex": list(x.reduced_word())}
    return smooth, rational, witness


def _available(rs: RootSystem, args) -> list[str]:
    out = ["pattern", "embedded"]
    if _letter(rs) in "ABCD":
        out.append("classical")
    if order_of(rs) <= _oracle_cap(args):
        out += ["kumar", "poincare"]
    return out


def cmd_check(args) -> dict:
    rs = _system(args)
    w = _element(args, rs)
    method = args.method or "pattern"
    smooth, rational, witness = _verdicts(w, method, args)
    agreed = True
    for other in _available(rs, args):
        if other != method:
            s, r, _ = _verdicts(w, other, args)
            agreed &= (s, r) == (smooth, rational)
    if hasattr(witness, "to_json"):
        witness = witness.to_json()
    return {"element": ",".join(map(str, w.reduced_word())), "type": rs.name,
            "smooth": smooth, "rationally_smooth": rational,
            "witness": witness, "methods_agreed": bool(agreed)}


def _show_check(out: dict) -> str:
    lines = [f"{out['type']} element {out['element'] or 'id'}",
             f"  smooth:            {out['smooth']}",
             f"  rationally smooth: {out['rationally_smooth']}"]
    if out["witness"]:
        lines.append(f"  witness:           {json.dumps(out['witness'], sort_keys=True)}")
    lines.append(f"  methods agreed:    {out['methods_agreed']}")
    return "\n".join(lines)


# -- count ----------------------------------------------------------------------

def _smooth_mask(args, rs: RootSystem, rational: bool) -> np.ndarray:
    method = args.method or "pattern"
    if method in ("kumar", "poincare"):
        G = _group(args, rs, oracle=True)
        return palindromic_vector(G) if rational else smooth_vector(G)
    G = _group(args, rs, oracle=False)
    inv = G.inv_matrix
    if method == "pattern":
        return ~pattern_hits(inv, rs, rational)
    if method == "embedded":
        kinds = ("A3", "D4") if rational else ("B2", "A3", "D4")
        return ~(embedding_hits(inv, rs, kinds) | embedding_hits(inv, rs, ("A3", "D4"), on_dual=True))
    raise ConfigurationError(f"unknown method {method}")


def cmd_count(args) -> dict:
    rs = _system(args)
    pred = args.predicate or "smooth"
    if pred not in PREDICATES:
        raise ConfigurationError(f"unknown predicate {pred}")
    total = order_of(rs)
    if pred in ("fully-commutative", "abelian"):
        G = _group(args, rs, oracle=False)
        test = is_fully_commutative if pred == "fully-commutative" else is_abelian
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            n = sum(pool.map(test, (G[i] for i in range(G.size))))
    else:
        rational = pred.startswith("rationally")
        if (args.method or "pattern") == "classical":
            if _letter(rs) not in "ABCD":
                raise ConfigurationError(f"no one-line notation for {rs.name}")
            n = classical_count(_letter(rs), rs.rank, rational)
        else:
            n = int(_smooth_mask(args, rs, rational).sum())
        if pred.endswith("singular"):
            n = total - n
    return {"type": rs.name, "predicate": pred, "method": args.method or "pattern",
            "count": int(n), "total": int(total)}


# -- poincare -------------------------------------------------------------------

def cmd_poincare(args) -> dict:
    rs = _system(args)
    w = _element(args, rs)
    out: dict = {"element": ",".join(map(str, w.reduced_word())), "type": rs.name}
    if order_of(rs) > _oracle_cap(args):
        depth = args.depth
        out["truncated"] = True
        out["asymmetry_depth"] = truncated_asymmetry(w, depth)
        out["searched_depth"] = depth
        return out
    p = poincare(w, _oracle_cap(args))
    out.update(coeffs=list(p.coeffs), palindromic=asymmetry_depth(p) is None,
               asymmetry_depth=asymmetry_depth(p))
    if args.factor:
        steps = factor_trace(w, _oracle_cap(args))
        out["factors"] = None if steps is None else [
            {"removed_node": s.removed_node, "inverse": s.inverted, "coeffs": list(s.factor.coeffs)}
            for s in steps]
    return out


def _show_poincare(out: dict) -> str:
    head = f"{out['type']} element {out['element'] or 'id'}"
    if out.get("truncated"):
        d = out["asymmetry_depth"]
        found = f"asymmetry at depth {d}" if d is not None else "no asymmetry"
        return f"{head}\n  {found} within {out['searched_depth']} outer coefficients"
    lines = [head, f"  P_w: {','.join(map(str, out['coeffs']))}",
             f"  palindromic: {out['palindromic']}"]
    if "factors" in out:
        if out["factors"] is None:
            lines.append("  no palindromic factorisation")
        else:
            for f in out["factors"]:
                side = "w^-1" if f["inverse"] else "w"
                lines.append(f"  remove node {f['removed_node']} ({side}): "
                             f"{','.join(map(str, f['coeffs']))}")
    return "\n".join(lines)


# -- subsystems -----------------------------------------------------------------

def cmd_subsystems(args) -> dict:
    rs = _system(args)
    if args.all:
        subs = enumerate_subsystems(rs, args.max_rank)
    else:
        subs = list(stellar_subsystems(rs))
    counts: dict[str, int] = {}
    for d in subs:
        counts[d.type_label] = counts.get(d.type_label, 0) + 1
    out: dict = {"type": rs.name, "counts": dict(sorted(counts.items()))}
    if args.list:
        out["subsystems"] = [{"type": d.type_label, "simples": d.simple_coords} for d in subs]
    return out


def _show_subsystems(out: dict) -> str:
    lines = [f"{out['type']}: " + ", ".join(f"{t} x{n}" for t, n in out["counts"].items())]
    for d in out.get("subsystems", []):
        lines.append(f"  {d['type']}: {d['simples']}")
    return "\n".join(lines)


# -- crossval -------------------------------------------------------------------

def cmd_crossval(args) -> dict:
    rs = _system(args)
    _group(args, rs, oracle=True)
    t0 = time.time()
    sw = sweep(rs)
    G = sw.group
    bad = sw.disagreements()
    fc_bad = None
    if args.commutative:
        for i in range(G.size):
            if is_fully_commutative(G[i]) != is_fully_commutative_oracle(G[i]):
                fc_bad = i
                break
    _progress(f"swept {G.size} elements in {time.time() - t0:.1f}s")
    out = {"type": rs.name, "elements": G.size, "agree": not bad and fc_bad is None,
           "smooth": int(sw.kumar.sum()), "rationally_smooth": int(sw.palindromic.sum())}
    if bad:
        i, why = bad[0]
        out["first_disagreement"] = {"element": list(G[i].reduced_word()), "reason": why}
    elif fc_bad is not None:
        out["first_disagreement"] = {"element": list(G[fc_bad].reduced_word()),
                                     "reason": "fully commutative pattern vs reduced words"}
    return out


def _show_crossval(out: dict) -> str:
    if out["agree"]:
        return f"{out['elements']} elements, all methods agree"
    d = out["first_disagreement"]
    return f"disagreement at {','.join(map(str, d['element'])) or 'id'}: {d['reason']}"


# -- tables ---------------------------------------------------------------------

def cmd_tables(args) -> dict:
    table = build_bad_tables()
    rows = []
    for t in STELLAR_COUNTS:
        rows.append({
            "type": t, "order": weyl_group(canonical(t)).size,
            "non_smooth": len(table.smooth_bad[t]),
            "non_rationally_smooth": len(table.rational_bad[t]),
            "smooth_patterns": [",".join(map(str, w)) for w in table.words(t)],
            "rational_patterns": [",".join(map(str, w)) for w in table.words(t, rational=True)],
        })
    return {"rows": rows}


def _show_tables(out: dict) -> str:
    rows = out["rows"]
    width = 8
    lines = ["".ljust(24) + "".join(r["type"].rjust(width) for r in rows),
             "non-smooth".ljust(24) + "".join(str(r["non_smooth"]).rjust(width) for r in rows),
             "non-rationally-smooth".ljust(24)
             + "".join(str(r["non_rationally_smooth"]).rjust(width) for r in rows),
             "", "forbidden patterns (smooth)"]
    for r in rows:
        lines.append(f"  {r['type']} ({len(r['smooth_patterns'])}): " + "  ".join(r["smooth_patterns"]))
    lines += ["", "forbidden patterns (rationally smooth)"]
    for r in rows:
        if r["rational_patterns"]:
            lines.append(f"  {r['type']} ({len(r['rational_patterns'])}): "
                         + "  ".join(r["rational_patterns"]))
    return "\n".join(lines)


COMMANDS = {
    "check": (cmd_check, _show_check),
    "count": (cmd_count, lambda o: str(o["count"])),
    "poincare": (cmd_poincare, _show_poincare),
    "subsystems": (cmd_subsystems, _show_subsystems),
    "crossval": (cmd_crossval, _show_crossval),
    "tables": (cmd_tables, _show_tables),
}


def make_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--type", help="Cartan type letter A-G")
    common.add_argument("--rank", type=int)
    common.add_argument("--word", help="reduced or unreduced word, e.g. 2,1,2")
    common.add_argument("--one-line", dest="one_line", help="signed one-line notation, e.g. 3,-2,1")
    common.add_argument("--rational", action="store_true", help="report the rational-smoothness witness")
    common.add_argument("--method", choices=METHODS)
    common.add_argument("--predicate", choices=PREDICATES)
    common.add_argument("--factor", action="store_true", help="print the recursive factorisation")
    common.add_argument("--depth", type=int, default=5, help="outer coefficients searched for large groups")
    common.add_argument("--all", action="store_true", help="all subsystems, not only stellar ones")
    common.add_argument("--max-rank", dest="max_rank", type=int, default=4)
    common.add_argument("--list", action="store_true", help="list each subsystem")
    common.add_argument("--commutative", action="store_true",
                        help="crossval also checks the fully commutative methods")
    common.add_argument("--json", action="store_true")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--cap", type=int, help="largest Weyl group to tabulate")
    common.add_argument("--cache-dir", dest="cache_dir")
    parser = _Parser(prog="stellar", description="Smoothness of Schubert varieties by root-subsystem patterns.")
    parser.add_argument("--version", action="version", version=f"stellar {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = make_parser().parse_args(argv)
        if args.command is None:
            raise ConfigurationError("a subcommand is required: " + ", ".join(COMMANDS))
        if args.threads < 1:
            raise ConfigurationError("--threads must be positive")
        if args.cache_dir:
            set_cache_dir(args.cache_dir)
        compute, show = COMMANDS[args.command]
        out = compute(args)
    except StellarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except MemoryError:
        print("error: out of memory; lower --cap", file=sys.stderr)
        return CapExceeded.exit_code
    print(json.dumps(out, sort_keys=True) if args.json else show(out), file=stdout)
    if args.command == "crossval" and not out["agree"]:
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
