"""Command line interface: ``oddkh <command> ...``.

Inputs are PD files (see :func:`oddkh.diagram.parse_pd`), ``corpus:NAME`` for
a bundled diagram, or seed JSON for ``from-seed``.  Every command prints a
short text report; ``--json PATH`` also writes the full JSON report
(``-`` for standard output).  The exit code is 0 only if every internal
verification passed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .bdc import h1_branched_cover, mutant_surgery_check, surgery_matrix, vertex_surgery_matrix
from .chords import LinkingData, SeedError, certify_mutant_seed, linking_data
from .complex import CanonicalIsoError, build_geometric, build_thrifty, check_canonical_iso, edge_assignment
from .corpus import load_diagram
from .diagram import DiagramError, LinkDiagram, parse_pd, parse_vertex, resolve, vertex_bits
from .homology import (
    BigradedHomology,
    HomologyError,
    LaurentPoly,
    compute_homology,
    determinant_from_jones,
    jones_oracle,
    poincare_and_euler,
)
from .mutation import find_mutation

SCHEMA = "oddkh.report/1"


class CliError(Exception):
    pass


# ---------------------------------------------------------------------------
# Input
# ---------------------------------------------------------------------------


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _is_empty_pd(text: str) -> bool:
    body = re.sub(r"#.*", "", text)
    body = re.sub(r"\s+", "", body)
    return body in ("", "PD[]", "PD()", "[]")


def load_input(path: str) -> LinkDiagram | None:
    """Diagram from a file or ``corpus:NAME``; ``None`` for the crossingless unknot."""
    if path.startswith("corpus:"):
        try:
            return load_diagram(path[len("corpus:"):])
        except KeyError as exc:
            raise CliError(str(exc.args[0])) from None
    text = _read_text(path)
    if _is_empty_pd(text):
        return None
    return parse_pd(text)


def _vertex(args, d: LinkDiagram) -> int | None:
    if getattr(args, "vertex", None) is None:
        return None
    v = parse_vertex(args.vertex, d.n)
    if resolve(d, v).circle_count != 1:
        raise CliError(f"vertex {args.vertex} does not give a one-circle resolution")
    return v


# ---------------------------------------------------------------------------
# Homology
# ---------------------------------------------------------------------------


def _unknot_homology(reduced: bool) -> BigradedHomology:
    if reduced:
        return BigradedHomology({(0, 0): (1, ())})
    return BigradedHomology({(0, -1): (1, ()), (0, 1): (1, ())})


def _mod2_json(dims: dict) -> dict:
    return {f"({h},{q})": v for (h, q), v in sorted(dims.items())}


def homology_report(d: LinkDiagram | None, variant: str, reduced: bool, mod2: bool, vertex=None, ld=None):
    """Return ``(report, ok, run)`` for a diagram (or seed when ``d`` is ``None`` and ``ld`` given)."""
    key = "reduced" if reduced else "unreduced"
    report = {"schema": SCHEMA, "command": "homology", "variant": variant}
    if d is None and ld is None:
        hom = _unknot_homology(reduced)
        poincare, euler = poincare_and_euler(hom)
        report.update({key: hom.to_json(), "poincare": str(poincare), "euler": str(euler), "jones": "1"})
        report["jones_check"] = True
        if mod2:
            report["mod2"] = _mod2_json({k: v[0] for k, v in hom.groups.items()})
        return report, True, None
    if not reduced and variant != "geometric":
        raise CliError("unreduced homology needs --variant geometric")
    if variant == "geometric":
        cx = build_geometric(d, reduced=reduced)
    else:
        if ld is None:
            ld = linking_data(d, vertex)
        cx = build_thrifty(ld, compact=(variant == "compact"))
    run = compute_homology(cx, mod2=mod2)
    hom = run.homology
    poincare, euler = poincare_and_euler(hom)
    report.update({"n": cx.n, key: hom.to_json(), "poincare": str(poincare), "euler": str(euler)})
    ok = True
    if d is not None:
        jones = jones_oracle(d)
        expect = jones if reduced else jones * LaurentPoly.one_var("q", {1: 1, -1: 1})
        report["jones"] = str(jones)
        report["jones_check"] = euler == expect
        ok = report["jones_check"]
    if mod2:
        report["mod2"] = _mod2_json(run.mod2)
    report["table"] = hom.table()
    return report, ok, run


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_homology(args) -> tuple[dict, bool]:
    d = load_input(args.path)
    reduced = not args.unreduced
    variant = args.variant
    vertex = _vertex(args, d) if d is not None else None
    report, ok, run = homology_report(d, variant, reduced, args.mod2, vertex)
    report["input"] = args.path
    if args.dump_resolution is not None:
        if d is None:
            raise CliError("the crossingless unknot has no resolutions to dump")
        report["resolution"] = resolve(d, parse_vertex(args.dump_resolution, d.n)).to_json()
    if args.dump_complex:
        if run is None:
            raise CliError("the crossingless unknot has no complex to dump")
        Path(args.dump_complex).write_text(run.complex.dumps(run.eps))
    return report, ok


def _mutant_seeds(d1: LinkDiagram, d2: LinkDiagram):
    """Seeds of two diagrams at corresponding one-circle vertices, plus a crossing pairing if found."""
    ld1 = linking_data(d1)
    found = None
    if d1.n == d2.n and d1.component_count == d2.component_count == 1 and d1.n <= 16:
        found = find_mutation(d1, d2)
    if found is None:
        return ld1, linking_data(d2), None, None
    tangle, axis, pairing = found
    v2 = sum(ld1.base(i) << pairing[i] for i in range(d1.n))
    ld2 = linking_data(d2, v2)
    # arc i of ld1 is arc pairing[i] of ld2
    return ld1, ld2, pairing, {"tangle": sorted(tangle.crossings), "axis": axis, "pairing": list(pairing)}


def cmd_compare(args) -> tuple[dict, bool]:
    d1, d2 = load_input(args.path_a), load_input(args.path_b)
    report: dict = {"schema": SCHEMA, "command": "compare", "inputs": [args.path_a, args.path_b]}
    homs = []
    ok = True
    for d in (d1, d2):
        rep, good, _ = homology_report(d, args.variant, True, args.mod2)
        ok &= good
        homs.append(rep)
    report["homology_equal"] = homs[0]["reduced"] == homs[1]["reduced"]
    if args.mod2:
        report["mod2_equal"] = homs[0]["mod2"] == homs[1]["mod2"]
    report["tables"] = [h["reduced"] for h in homs]
    if d1 is not None and d2 is not None and d1.n == d2.n and d1.is_connected and d2.is_connected:
        ld1, ld2, pairing, mutation = _mutant_seeds(d1, d2)
        report["mutation"] = mutation
        report["surgery_check"] = mutant_surgery_check(ld1, ld2)
        witness = certify_mutant_seed(ld1, ld2, pairing)
        if witness is None and pairing is not None:
            witness = certify_mutant_seed(ld1, ld2)
        if witness is not None:
            relabelled = witness.apply(ld2)
            cx1, cx2 = build_thrifty(ld1), build_thrifty(relabelled)
            same = cx1.dumps(edge_assignment(cx1)) == cx2.dumps(edge_assignment(cx2))
            report["seed_witness"] = {
                "perm": list(witness.perm),
                "reversed_arcs": sorted(witness.flips),
                "complexes_identical": same,
            }
            ok &= same
        else:
            report["seed_witness"] = None
    return report, ok


def cmd_bdc(args) -> tuple[dict, bool]:
    d = load_input(args.path)
    if d is None:
        raise CliError("the crossingless unknot has no surgery presentation here")
    ld = linking_data(d, _vertex(args, d))
    sm = surgery_matrix(ld)
    free, torsion = h1_branched_cover(sm)
    det = abs(sm.determinant())
    jdet = determinant_from_jones(jones_oracle(d))
    report = {
        "schema": SCHEMA,
        "command": "bdc",
        "input": args.path,
        "base_vertex": vertex_bits(ld.base_vertex, ld.n),
        "surgery_matrix": sm.matrix.to_dense(),
        "h1": {"free_rank": free, "torsion": torsion},
        "determinant": det,
        "jones_determinant": jdet,
        "determinant_check": det == jdet,
    }
    ok = det == jdet
    if args.at_vertex is not None:
        v = parse_vertex(args.at_vertex, d.n)
        m = vertex_surgery_matrix(ld, v)
        f, t = h1_branched_cover(m)
        c = resolve(d, v).circle_count
        report["vertex"] = {
            "vertex": args.at_vertex,
            "matrix": m.to_dense(),
            "h1": {"free_rank": f, "torsion": t},
            "circle_count": c,
            "check": f == c - 1 and not t,
        }
        ok &= report["vertex"]["check"]
    if args.text:
        Path(args.text).write_text(sm.matrix.to_text())
    return report, ok


def cmd_seed(args) -> tuple[dict, bool]:
    d = load_input(args.path)
    if d is None:
        raise CliError("the crossingless unknot has no linking data")
    ld = linking_data(d, _vertex(args, d))
    return ld.to_json(), True


def cmd_from_seed(args) -> tuple[dict, bool]:
    try:
        ld = LinkingData.loads(_read_text(args.path))
    except (json.JSONDecodeError, SeedError) as exc:
        raise CliError(f"invalid seed: {exc}") from None
    variant = "compact" if args.compact else "thrifty"
    report, ok, _ = homology_report(None, variant, True, args.mod2, ld=ld)
    report["command"] = "from-seed"
    report["input"] = args.path
    return report, ok


def selfcheck() -> list[tuple[str, bool, str]]:
    """Calibration gates: unknot grading, Jones normalization, canonical isomorphisms."""
    from .diagram import parse_pd as pp

    out = []
    kink = pp("X(1,1,2,2)")
    for name, d in (("kink", kink), ("negative kink", pp("X(2,1,1,2)"))):
        hom = compute_homology(build_thrifty(linking_data(d))).homology
        out.append((f"reduced homology of the {name} is Z at (0,0)", hom == _unknot_homology(True), hom.table()))
        un = compute_homology(build_geometric(d, reduced=False)).homology
        out.append((f"unreduced homology of the {name} is Z at (0,-1) and (0,1)", un == _unknot_homology(False), un.table()))
    j = jones_oracle(kink)
    out.append(("Jones polynomial of the kink is 1", str(j) == "1", str(j)))
    samples = {
        "kink": kink,
        "trefoil": pp("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"),
        "figure-eight": pp("X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"),
    }
    for name, d in samples.items():
        ld = linking_data(d)
        t, c, g = build_thrifty(ld), build_thrifty(ld, compact=True), build_geometric(d)
        try:
            good = check_canonical_iso(t, g) and check_canonical_iso(c, t)
            msg = "thrifty -> geometric and compact -> thrifty are chain isomorphisms"
        except CanonicalIsoError as exc:
            good, msg = False, str(exc)
        out.append((f"canonical isomorphism on the {name}", good, msg))
    return out


def cmd_selfcheck(args) -> tuple[dict, bool]:
    results = selfcheck()
    report = {
        "schema": SCHEMA,
        "command": "selfcheck",
        "checks": [{"check": name, "pass": good, "detail": detail} for name, good, detail in results],
    }
    return report, all(good for _, good, _ in results)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddkh", description="Odd Khovanov homology from planar diagrams.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")

    h = sub.add_parser("homology", help="bigraded odd Khovanov homology of a diagram")
    h.add_argument("path")
    h.add_argument("--variant", choices=("thrifty", "compact", "geometric"), default="thrifty")
    h.add_argument("--unreduced", action="store_true", help="unreduced homology (geometric variant)")
    h.add_argument("--mod2", action="store_true", help="also report dimensions over Z/2")
    h.add_argument("--vertex", metavar="BITS", help="one-circle vertex to read linking data from")
    h.add_argument("--dump-complex", metavar="PATH", help="write the signed complex as JSON")
    h.add_argument("--dump-resolution", metavar="BITS", help="include the resolution at BITS in the report")
    common(h)

    c = sub.add_parser("compare", help="compare homology of two diagrams and look for a mutant seed witness")
    c.add_argument("path_a")
    c.add_argument("path_b")
    c.add_argument("--variant", choices=("thrifty", "compact", "geometric"), default="thrifty")
    c.add_argument("--mod2", action="store_true")
    common(c)

    b = sub.add_parser("bdc", help="surgery matrix and H1 of the branched double cover")
    b.add_argument("path")
    b.add_argument("--vertex", metavar="BITS", help="one-circle vertex to read linking data from")
    b.add_argument("--at-vertex", metavar="BITS", help="also report the surgery matrix at this vertex")
    b.add_argument("--text", metavar="PATH", help="write the surgery matrix as plain text")
    common(b)

    s = sub.add_parser("seed", help="linking data of a one-circle resolution")
    s.add_argument("path")
    s.add_argument("--vertex", metavar="BITS")
    common(s)

    f = sub.add_parser("from-seed", help="homology from linking data alone")
    f.add_argument("path")
    f.add_argument("--compact", action="store_true")
    f.add_argument("--mod2", action="store_true")
    common(f)

    sc = sub.add_parser("selfcheck", help="run the calibration gates")
    common(sc)
    return p


COMMANDS = {
    "homology": cmd_homology,
    "compare": cmd_compare,
    "bdc": cmd_bdc,
    "seed": cmd_seed,
    "from-seed": cmd_from_seed,
    "selfcheck": cmd_selfcheck,
}


def _summary(report: dict) -> str:
    cmd = report.get("command")
    if cmd is None:  # seed
        return json.dumps(report, indent=1)
    if cmd in ("homology", "from-seed"):
        key = "reduced" if "reduced" in report else "unreduced"
        lines = [report.get("table") or BigradedHomology.from_json(report[key]).table()]
        lines.append(f"poincare: {report['poincare']}")
        if "jones" in report:
            lines.append(f"jones: {report['jones']}  ({'matches' if report['jones_check'] else 'MISMATCH'})")
        return "\n".join(lines)
    if cmd == "compare":
        lines = [f"homology equal: {report['homology_equal']}"]
        if "mod2_equal" in report:
            lines.append(f"mod 2 homology equal: {report['mod2_equal']}")
        if report.get("mutation"):
            m = report["mutation"]
            lines.append(f"mutation: tangle {m['tangle']} axis {m['axis']}")
        w = report.get("seed_witness")
        if w is not None:
            lines.append(f"seed witness: perm {w['perm']} reversed arcs {w['reversed_arcs']}")
            lines.append(f"thrifty complexes identical: {w['complexes_identical']}")
        elif "seed_witness" in report:
            lines.append("seed witness: none")
        return "\n".join(lines)
    if cmd == "bdc":
        h1 = report["h1"]
        group = " + ".join((["Z^%d" % h1["free_rank"]] if h1["free_rank"] else []) + [f"Z/{t}" for t in h1["torsion"]])
        return "\n".join(
            [
                f"surgery matrix: {report['surgery_matrix']}",
                f"H1: {group or '0'}",
                f"|det| = {report['determinant']}, |J(-1)| = {report['jones_determinant']}",
            ]
        )
    if cmd == "selfcheck":
        return "\n".join(f"[{'PASS' if c['pass'] else 'FAIL'}] {c['check']}" for c in report["checks"])
    return json.dumps(report, indent=1)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        report, ok = COMMANDS[args.command](args)
    except (CliError, DiagramError, SeedError, HomologyError, ValueError) as exc:
        print(f"oddkh: error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=1)
    if args.json == "-":
        print(text)
    else:
        print(_summary(report))
        if args.json:
            Path(args.json).write_text(text + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
