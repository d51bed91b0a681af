"""Command line front end.

Every subcommand parses its input, calls the library and prints a report.
Exit status: 0 on success, 2 for unreadable or malformed input, 3 when the
input is well formed but violates a mathematical precondition.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

from . import formats
from .cech import PresheafError, cech_complex_data, sections
from .complexes import ComplexError, kunneth_verify
from .fgab import BilinearPairing, FpAbGroup, GroupError, is_perfect
from .group_cohomology import bar_cohomology, h1, tame_duality
from .linalg import smith_normal_form
from .local_field import eval_diagram_report
from .monodromy import (
    DegenerateDatum,
    GraphError,
    component_groups,
    critical_group,
    cycle_datum,
    graph_to_datum,
    grothendieck_pairing,
    spanning_tree_count,
    torsion_level_map,
)

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION = 0, 2, 3


class PreconditionError(ValueError):
    pass


@dataclass
class Report:
    command: str
    input_digest: str
    results: dict[str, Any] = field(default_factory=dict)
    status: str = "ok"
    lines: list[str] = field(default_factory=list)  # human readable body

    def as_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "input_sha256": self.input_digest,
            "results": self.results,
            "status": self.status,
        }

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2, sort_keys=True)
        head = [f"command: {self.command}", f"input sha256: {self.input_digest}"]
        return "\n".join(head + self.lines + [f"status: {self.status}"])


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _group(G: FpAbGroup) -> dict[str, Any]:
    return {"name": str(G), "descriptor": G.serialize(), "order": G.order}


def _pairing_table(P: BilinearPairing) -> list[list[str]]:
    return P.table()


def _pairing_lines(P: BilinearPairing) -> list[str]:
    out = []
    for i, row in enumerate(P.values):
        for j, v in enumerate(row):
            out.append(f"  <{i + 1},{j + 1}> = {v}")
    return out or ["  (both groups trivial)"]


def _matrix(m) -> list[list[int]]:
    return m.to_lists()


def _yes(b: bool) -> str:
    return "yes" if b else "no"


# ---------------------------------------------------------------------------
# subcommands


def cmd_snf(text: str, args) -> Report:
    A = formats.parse_matrix(text)
    dec = smith_normal_form(A)
    diag = dec.diagonal
    inv = [d for d in diag if d > 1]
    coker = FpAbGroup(A.rows - dec.rank, tuple(inv))
    r = Report("snf", "", {
        "U": _matrix(dec.U), "S": _matrix(dec.S), "V": _matrix(dec.V),
        "diagonal": ",".join(map(str, diag)),
        "invariant_factors": inv,
        "cokernel": _group(coker),
        "verified": dec.verify(),
    })
    r.lines = [
        "U:", *(f"  {row}" for row in r.results["U"]),
        "S:", *(f"  {row}" for row in r.results["S"]),
        "V:", *(f"  {row}" for row in r.results["V"]),
        f"chain: {r.results['diagonal']}",
        f"cokernel: {coker}",
        f"U*A*V == S: {_yes(dec.verify())}",
    ]
    return r


def cmd_compgroup(text: str, args) -> Report:
    D = formats.parse_datum(text)
    cg = component_groups(D)
    r = Report("compgroup", "", {"phi": _group(cg.phi), "phi_prime": _group(cg.phi_prime), "det": D.det})
    r.lines = [f"phi_A = {cg.phi}", f"phi_A' = {cg.phi_prime}", f"|det u| = {abs(D.det)}"]
    if cg.phi.is_trivial and cg.phi_prime.is_trivial:
        r.lines.append("trivial, trivial")
    P = None
    if args.pairing or args.verify_perfect:
        P = grothendieck_pairing(D)
    if args.pairing:
        r.results["pairing"] = _pairing_table(P)
        r.lines += ["pairing (sign +):", *_pairing_lines(P)]
    if args.verify_perfect:
        perfect = is_perfect(P)
        r.results["perfect"] = perfect
        r.lines.append(f"perfect: {_yes(perfect)}")
    if args.n is not None:
        h = torsion_level_map(D, args.n)
        r.results["level_map"] = {"n": args.n, "source": _group(h.source), "matrix": _matrix(h.matrix), "surjective": h.is_surjective()}
        r.lines += [f"level {args.n} map {h.source} -> {h.target}: {_matrix(h.matrix)}", f"surjective: {_yes(h.is_surjective())}"]
    return r


def cmd_graph(text: str, args) -> Report:
    G = formats.parse_graph(text)
    phi = critical_group(G)
    trees = spanning_tree_count(G)
    agree = phi.order == trees
    cyc = component_groups(cycle_datum(G)).phi
    r = Report("graph", "", {
        "vertices": G.vertices, "edges": len(G.edges), "critical_group": _group(phi),
        "spanning_trees": trees, "orders_agree": agree, "cycle_lattice_group": _group(cyc),
    })
    r.lines = [f"critical group: {phi}", f"trees = {trees}", f"orders agree: {_yes(agree)}",
               f"cycle-lattice cokernel: {cyc}"]
    if args.pairing:
        P = grothendieck_pairing(graph_to_datum(G))
        r.results["pairing"] = _pairing_table(P)
        r.results["perfect"] = is_perfect(P)
        r.lines += ["pairing:", *_pairing_lines(P), f"perfect: {_yes(is_perfect(P))}"]
    return r


def cmd_duality(text: str, args) -> Report:
    M = formats.parse_module(text)
    t = tame_duality(M)
    bar = [bar_cohomology(M, k) for k in range(3)]
    r = Report("duality", "", {
        "module": _group(M.module), "sigma_order": M.order,
        "H0": _group(t.invariants), "H1": _group(h1(M)), "H1_dual": _group(t.dual_coinvariants),
        "pairing": _pairing_table(t.pairing), "perfect": t.perfect,
        "bar_cohomology": [_group(b) for b in bar],
    })
    r.lines = [
        f"module: {M.module}, sigma of order {M.order}",
        f"H0 = {t.invariants}", f"H1 = {h1(M)}", f"H1(dual) = {t.dual_coinvariants}",
        "pairing:", *_pairing_lines(t.pairing),
        f"perfect: {_yes(t.perfect)}",
        "bar cohomology: " + ", ".join(f"H{k} = {b}" for k, b in enumerate(bar)),
    ]
    return r


def cmd_cech(text: str, args) -> Report:
    F = formats.parse_presheaf(text)
    cc = cech_complex_data(F, args.max_degree)
    table = {r: cc.cohomology(r) for r in range(args.max_degree + 1)}
    sec = sections(F)
    rep = Report("cech", "", {
        "index_set": list(F.index_set),
        "cohomology": {str(k): _group(v) for k, v in table.items()},
        "sections": _group(sec),
        "sections_match_H0": sec == table[0],
    })
    rep.lines = [f"H{k} = {v}" for k, v in table.items()] + [
        f"sections = {sec}", f"H0 equals sections: {_yes(sec == table[0])}"]
    return rep


def cmd_evaldiag(text: str, args) -> Report:
    if args.q < 2:
        raise PreconditionError("q must be at least 2")
    rep = eval_diagram_report(args.q)
    r = Report("evaldiag", "", {"q": args.q, "cases": rep.cases, "commutes": rep.commutes,
                                "failures": [list(f) for f in rep.failures]})
    if rep.commutes:
        r.lines = [f"diagram commutes: yes (all {rep.cases} cases)"]
    else:
        r.lines = [f"diagram commutes: no ({len(rep.failures)} of {rep.cases} cases fail)"]
    return r


def cmd_complex(text: str, args) -> Report:
    X = formats.parse_complex(text)
    table = X.cohomology_table()
    r = Report("complex", "", {"cohomology": {str(n): _group(g) for n, g in table.items()}})
    r.lines = [f"H{n} = {g}" for n, g in table.items()]
    if args.kunneth:
        with open(args.kunneth, "rb") as fh:
            Y = formats.parse_complex(fh.read().decode())
        out = {}
        lo = X.lowest_degree + Y.lowest_degree - 1
        hi = X.highest_degree + Y.highest_degree
        for s in range(lo, hi + 1):
            k = kunneth_verify(X, Y, s)
            out[str(s)] = {"left": _group(k.left), "middle": _group(k.middle), "right": _group(k.right), "ok": k.ok}
            r.lines.append(f"Kunneth s={s}: {k.left} -> {k.middle} -> {k.right}  exact: {_yes(k.ok)}")
        r.results["kunneth"] = out
    return r


COMMANDS: dict[str, Callable] = {
    "snf": cmd_snf,
    "compgroup": cmd_compgroup,
    "graph": cmd_graph,
    "duality": cmd_duality,
    "cech": cmd_cech,
    "evaldiag": cmd_evaldiag,
    "complex": cmd_complex,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="neronpair", description="Component groups, pairings and cup products with exact arithmetic.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snf", help="Smith normal form of a matrix file")
    p.add_argument("file")

    p = sub.add_parser("compgroup", help="component groups of a lattice datum")
    p.add_argument("file")
    p.add_argument("--pairing", action="store_true", help="print the pairing table")
    p.add_argument("--verify-perfect", action="store_true", help="check that the pairing is perfect")
    p.add_argument("--n", type=int, default=None, help="also build the level-n map")

    p = sub.add_parser("graph", help="critical group of a dual graph")
    p.add_argument("file")
    p.add_argument("--pairing", action="store_true")

    p = sub.add_parser("duality", help="H0, H1 and the tame duality pairing of a module file")
    p.add_argument("file")

    p = sub.add_parser("cech", help="Cech cohomology of a presheaf file")
    p.add_argument("file")
    p.add_argument("--max-degree", type=int, default=1)

    p = sub.add_parser("evaldiag", help="check the evaluation diagram exhaustively")
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("complex", help="cohomology of a complex file")
    p.add_argument("file")
    p.add_argument("--kunneth", metavar="FILE", help="second complex for the Kunneth check")
    for name in ("snf", "compgroup", "graph", "duality", "cech", "evaldiag", "complex"):
        sub.choices[name].add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    echo = "neronpair " + " ".join(sys.argv[1:] if argv is None else argv)
    try:
        if hasattr(args, "file"):
            with open(args.file, "rb") as fh:
                data = fh.read()
            text = data.decode("utf-8")
        else:
            data = f"q={args.q}".encode()
            text = ""
        report = COMMANDS[args.command](text, args)
    except OSError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnicodeDecodeError as exc:
        print(f"error: input is not UTF-8 text: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except formats.InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateDatum as exc:
        print(f"degenerate datum: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (GraphError, PreconditionError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (GroupError, ComplexError, PresheafError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report.command = echo
    report.input_digest = _digest(data)
    print(report.render(args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
