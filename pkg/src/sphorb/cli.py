"""Command-line front end: load or build graphs, validate, compute
invariants and calculus results, emit deterministic reports.

Exit codes: 0 success, 1 validation or theorem-check failure, 2 usage or
parse error, 3 unsupported computation (wild case, group too large).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (Cor1Violation, GraphParseError, GroupTooLarge,
                     InductionInconsistent, LemmaViolation, NonFiniteType,
                     NotReflectionGroup, RankMismatch, SphorbError,
                     StabilizerNotSemidirect, WildCaseUnsupported)
from .intertwine import (ZERO, compose_word, fixed_set, hecke_generic_rank,
                         invariant_degrees, nonvanishing_set)
from .lattice import LocalFieldParams, Sublattice, quotient_invariants
from .orbitgraph import (CASE_ROLES, OrbitGraph, OrbitNode, RootEdge,
                         knop_apply, rational_orbit_count)
from .rootdata import (RootDatum, build_root_datum, named_cartan, parse_word,
                       word_str)
from .spherical import (admissible_coset, build_group_case,
                        build_horospherical_full, build_parabolic_induction,
                        build_sl2, build_sl2_on, compute_invariants,
                        levi_subdatum, type_g_roots)

FORMAT_VERSION = 1

_INT_LIMIT = 2**63


# ---------------------------------------------------------------------------
# graph document (JSON) encoding

def _encode_int(value: int):
    return str(value) if abs(value) >= _INT_LIMIT else value


def _decode_int(value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise GraphParseError(f"expected an integer, got {value!r}")
    try:
        return int(value)
    except ValueError:
        raise GraphParseError(f"expected an integer, got {value!r}") from None


def _encode_matrix(rows):
    return [[_encode_int(x) for x in row] for row in rows]


def _decode_matrix(rows):
    if not isinstance(rows, list):
        raise GraphParseError("expected a matrix (list of rows)")
    return tuple(tuple(_decode_int(x) for x in row) for row in rows)


def graph_to_document(graph: OrbitGraph) -> dict:
    datum = graph.datum
    doc = {
        "format_version": FORMAT_VERSION,
        "root_datum": {
            "ambient_rank": datum.ambient_rank,
            "simple_roots": _encode_matrix(datum.simple_roots),
            "simple_coroots": _encode_matrix(datum.simple_coroots),
            "cartan_matrix": _encode_matrix(datum.pairing),
        },
        "nodes": [
            {
                "id": node.id,
                "char_lattice": _encode_matrix(node.char_lattice.generators),
                "dim": node.dim,
                "rational": node.rational,
                "g_orbit": node.g_orbit,
            }
            for node in graph.nodes
        ],
        "edges": [
            {
                "root_index": edge.root_index + 1,
                "case_type": edge.case_type,
                "members": {role: nid for role, nid in edge.members},
            }
            for edge in graph.edges
        ],
        "open_id": graph.open_id,
    }
    return doc


def document_to_graph(doc) -> OrbitGraph:
    if not isinstance(doc, dict):
        raise GraphParseError("graph document must be a JSON object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise GraphParseError(
            f"unsupported format_version {doc.get('format_version')!r}")
    rd = doc.get("root_datum")
    if not isinstance(rd, dict):
        raise GraphParseError("missing root_datum object")
    try:
        if "name" in rd:
            datum = build_root_datum(rd["name"], rd.get("ambient_rank"))
        elif "simple_roots" in rd:
            datum = RootDatum(_decode_int(rd["ambient_rank"]),
                              _decode_matrix(rd["simple_roots"]),
                              _decode_matrix(rd["simple_coroots"]))
        else:
            datum = build_root_datum(
                [list(map(_decode_int, row)) for row in rd["cartan_matrix"]],
                rd.get("ambient_rank"))
    except (KeyError, ValueError, TypeError, NonFiniteType, RankMismatch) as exc:
        raise GraphParseError(f"bad root_datum: {exc}") from None
    if "cartan_matrix" in rd and "simple_roots" in rd:
        if _decode_matrix(rd["cartan_matrix"]) != datum.pairing:
            raise GraphParseError("cartan_matrix disagrees with the pairing "
                                  "of the given roots and coroots")

    nodes = []
    seen = set()
    for entry in doc.get("nodes", ()):
        try:
            node = OrbitNode(
                id=str(entry["id"]),
                char_lattice=Sublattice(datum.ambient_rank,
                                        _decode_matrix(entry["char_lattice"])),
                dim=_decode_int(entry["dim"]),
                rational=bool(entry["rational"]),
                g_orbit=str(entry["g_orbit"]),
            )
        except (KeyError, TypeError, SphorbError) as exc:
            raise GraphParseError(f"bad node entry: {exc}") from None
        if node.id in seen:
            raise GraphParseError(f"duplicate node id {node.id}")
        seen.add(node.id)
        nodes.append(node)

    edges = []
    membership = set()
    for entry in doc.get("edges", ()):
        try:
            root_index = _decode_int(entry["root_index"]) - 1
            case_type = str(entry["case_type"])
            raw = entry["members"]
            members = tuple((role, str(raw[role]))
                            for role in CASE_ROLES.get(case_type, ())
                            if role in raw)
            extra = set(raw) - set(CASE_ROLES.get(case_type, ()))
            if extra:
                raise GraphParseError(
                    f"roles {sorted(extra)} not allowed for type {case_type}")
        except (KeyError, TypeError) as exc:
            raise GraphParseError(f"bad edge entry: {exc}") from None
        for _, nid in members:
            if nid not in seen:
                raise GraphParseError(f"edge references unknown node {nid}")
            if (nid, root_index) in membership:
                raise GraphParseError(
                    f"(node {nid}, root s{root_index + 1}) appears in two edges")
            membership.add((nid, root_index))
        edges.append(RootEdge(root_index, case_type, members))

    open_id = doc.get("open_id")
    if open_id not in seen:
        raise GraphParseError(f"open_id {open_id!r} is not a node")
    return OrbitGraph(datum, nodes, edges, str(open_id))


def dump_graph(graph: OrbitGraph) -> str:
    return json.dumps(graph_to_document(graph), indent=2) + "\n"


def load_graph_text(text: str) -> OrbitGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphParseError(f"not valid JSON: {exc}") from None
    return document_to_graph(doc)


def load_graph_file(path: str) -> OrbitGraph:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc}") from None
    return load_graph_text(text)


# ---------------------------------------------------------------------------
# builtins

BUILTINS = (
    "sl2:G",
    "sl2:T_split",
    "sl2:T_nonsplit",
    "sl2:N",
    "sl2:U",
    "group:A1",
    "group:A2",
    "horospherical:A1",
    "horospherical:A2",
    "horospherical:C2",
    "horospherical:G2",
    "induce:sl2:T_split@A2/{a1}",
)


def build_builtin(name: str) -> OrbitGraph:
    """Builtin graphs addressed as family:params (see BUILTINS for the
    bundled list; any valid Cartan type works in the parameter slot)."""
    if name.startswith("induce:"):
        rest = name[len("induce:"):]
        if "@" not in rest or "/" not in rest:
            raise GraphParseError(f"bad induction builtin {name!r}")
        inner_part, _, tail = rest.partition("@")
        type_part, _, roots_part = tail.partition("/")
        if not (roots_part.startswith("{") and roots_part.endswith("}")):
            raise GraphParseError(f"bad root subset in {name!r}")
        try:
            p_roots = sorted(
                int(token.strip()[1:]) - 1
                for token in roots_part[1:-1].split(",") if token.strip())
        except ValueError:
            raise GraphParseError(f"bad root subset in {name!r}") from None
        ambient = build_root_datum(type_part)
        if not inner_part.startswith("sl2:"):
            raise GraphParseError(
                f"only sl2 inner graphs are addressable, got {inner_part!r}")
        if len(p_roots) != 1:
            raise GraphParseError("sl2 inner graphs need exactly one root")
        sub = levi_subdatum(ambient, p_roots)
        inner = build_sl2_on(sub, 0, inner_part[len("sl2:"):])
        return build_parabolic_induction(inner, p_roots, ambient)
    family, _, params = name.partition(":")
    try:
        if family == "sl2":
            return build_sl2(params)
        if family == "group":
            return build_group_case(build_root_datum(params))
        if family == "horospherical":
            return build_horospherical_full(build_root_datum(params))
    except (ValueError, NonFiniteType, RankMismatch) as exc:
        raise GraphParseError(f"bad builtin {name!r}: {exc}") from None
    raise GraphParseError(f"unknown builtin family {family!r}")


# ---------------------------------------------------------------------------
# rendering

def _fmt_fraction(x) -> str:
    return str(x)


def _fmt_vector(vec) -> str:
    return "(" + ", ".join(_fmt_fraction(x) for x in vec) + ")"


def _fmt_lattice(lat: Sublattice) -> str:
    if not lat.generators:
        return "{0}"
    return "span{" + "; ".join(_fmt_vector(row) for row in lat.generators) + "}"


def _fmt_elements(elems) -> str:
    return "{" + ", ".join(word_str(w.word) for w in elems) + "}"


def _field_from_args(args) -> LocalFieldParams | None:
    if args.q is None and args.p is None:
        return None
    if args.q is None or args.p is None:
        raise GraphParseError("--q and --p must be given together")
    return LocalFieldParams(args.q, args.p)


def _resolve_graph(args) -> OrbitGraph:
    if getattr(args, "builtin", None):
        return build_builtin(args.builtin)
    if getattr(args, "path", None):
        return load_graph_file(args.path)
    raise GraphParseError("give a graph file or --builtin NAME")


def invariants_lines(graph: OrbitGraph, field) -> list[str]:
    inv = compute_invariants(graph, field)
    lines = [
        "type_G_roots: [" + ", ".join(f"s{i + 1}" for i in inv.p_x_roots) + "]",
        f"stabilizer_order: {len(inv.stabilizer)}",
        f"little_weyl_order: {len(inv.little_weyl)}",
        "little_weyl: " + _fmt_elements(inv.little_weyl),
        f"weight_rank: {inv.rank}",
        "weight_lattice: " + _fmt_lattice(inv.a_x_star),
        f"normalizer_order: {len(inv.normalizer)}",
        f"normalizer_index: {len(inv.normalizer) // len(inv.little_weyl)}",
    ]
    if field is not None:
        lines.append(f"h1: {inv.h1}")
        lines.append(f"multiplicity: {inv.multiplicity}")
    return lines


def report_text(graph: OrbitGraph, field) -> str:
    lines = []
    datum = graph.datum
    lines.append("== graph ==")
    lines.append(f"ambient_rank: {datum.ambient_rank}")
    lines.append(f"simple_roots: {len(datum.simple_roots)}")
    lines.append(f"nodes: {len(graph.nodes)}")
    lines.append(f"open: {graph.open_id}")
    lines.append("")
    lines.append("== validation ==")
    report = graph.validation_report()
    if report.passed:
        lines.append("pass")
    else:
        lines.extend(f.render() for f in report.findings)
        return "\n".join(lines) + "\n"
    lines.append("")
    lines.append("== orbits ==")
    for node in graph.nodes:
        extra = ""
        if field is not None and node.rational:
            extra = f" rational_orbits={rational_orbit_count(graph, node, field)}"
        lines.append(
            f"{node.id}: g_orbit={node.g_orbit} dim={node.dim} "
            f"rank={node.rank} rational={str(node.rational).lower()}"
            f" lattice={_fmt_lattice(node.char_lattice)}{extra}")
    lines.append("")
    lines.append("== invariants ==")
    inv = compute_invariants(graph, field)
    lines.extend(invariants_lines(graph, field))
    lines.append("")
    lines.append("== admissibility ==")
    for node in graph.max_rank_nodes():
        coset = admissible_coset(graph, node)
        lines.append(f"{node.id}: shift={_fmt_vector(coset.shift)} "
                     f"direction={_fmt_lattice(coset.direction)}")
    lines.append("")
    lines.append("== calculus ==")
    nonzero = nonvanishing_set(graph)
    fixed = fixed_set(graph)
    lines.append("nonvanishing: " + _fmt_elements(nonzero))
    lines.append("fixed: " + _fmt_elements(fixed))
    if field is not None:
        lines.append(f"hecke_rank: {hecke_generic_rank(graph, field)}")
    degrees = invariant_degrees(inv)
    lines.append("degrees: [" + ", ".join(str(d) for d in degrees) + "]")
    return "\n".join(lines) + "\n"


def report_json(graph: OrbitGraph, field) -> str:
    report = graph.validation_report()
    doc: dict = {
        "graph": graph_to_document(graph),
        "validation": {
            "pass": report.passed,
            "findings": [
                {"check": f.check, "severity": f.severity,
                 "message": f.message, "ids": list(f.ids)}
                for f in report.findings
            ],
        },
    }
    if not report.passed:
        return json.dumps(doc, indent=2) + "\n"
    inv = compute_invariants(graph, field)
    doc["invariants"] = {
        "type_G_roots": [i + 1 for i in inv.p_x_roots],
        "stabilizer_order": len(inv.stabilizer),
        "little_weyl": [word_str(w.word) for w in inv.little_weyl],
        "weight_rank": inv.rank,
        "weight_lattice": _encode_matrix(inv.a_x_star.generators),
        "normalizer_order": len(inv.normalizer),
        "h1": inv.h1,
        "multiplicity": inv.multiplicity,
    }
    doc["orbits"] = [
        {
            "id": node.id,
            "g_orbit": node.g_orbit,
            "dim": node.dim,
            "rank": node.rank,
            "rational": node.rational,
            "rational_orbits": (rational_orbit_count(graph, node, field)
                                if field is not None and node.rational else None),
        }
        for node in graph.nodes
    ]
    doc["admissibility"] = [
        {
            "id": node.id,
            "shift": [str(x) for x in admissible_coset(graph, node).shift],
            "direction": _encode_matrix(
                admissible_coset(graph, node).direction.generators),
        }
        for node in graph.max_rank_nodes()
    ]
    doc["calculus"] = {
        "nonvanishing": [word_str(w.word) for w in nonvanishing_set(graph)],
        "fixed": [word_str(w.word) for w in fixed_set(graph)],
        "hecke_rank": (hecke_generic_rank(graph, field)
                       if field is not None else None),
        "degrees": invariant_degrees(inv),
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    graph = load_graph_file(args.path)
    report = graph.validation_report()
    if report.passed:
        print("pass")
        return 0
    for finding in report.findings:
        print(finding.render())
    return 1


def cmd_invariants(args) -> int:
    graph = _resolve_graph(args)
    if not graph.validation_report().passed:
        for finding in graph.validation_report().findings:
            print(finding.render())
        return 1
    field = _field_from_args(args)
    for line in invariants_lines(graph, field):
        print(line)
    return 0


def cmd_compose(args) -> int:
    graph = _resolve_graph(args)
    if not graph.validation_report().passed:
        for finding in graph.validation_report().findings:
            print(finding.render())
        return 1
    if args.all:
        print("nonvanishing: " + _fmt_elements(nonvanishing_set(graph)))
        print("fixed: " + _fmt_elements(fixed_set(graph)))
        return 0
    if args.word is None:
        raise GraphParseError("give --word or --all")
    try:
        word = parse_word(args.word)
    except ValueError as exc:
        raise GraphParseError(str(exc)) from None
    if any(i >= graph.datum.num_simple for i in word):
        raise GraphParseError(f"word {args.word!r} indexes a missing simple root")
    group = graph.weyl_group()
    result = compose_word(graph, group.from_word(word))
    print("Zero" if result is ZERO else result.orbit_id)
    return 0


def cmd_report(args) -> int:
    graph = _resolve_graph(args)
    field = _field_from_args(args)
    text = (report_json(graph, field) if args.json
            else report_text(graph, field))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0 if graph.validation_report().passed else 1


def _add_field_args(sub):
    sub.add_argument("--q", type=int, default=None,
                     help="residue field order (prime power)")
    sub.add_argument("--p", type=int, default=None,
                     help="residue characteristic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphorb",
        description="exact invariants of typed Borel-orbit graphs")
    parser.add_argument("--list", action="store_true",
                        help="list builtin graph names and exit")
    sub = parser.add_subparsers(dest="command")

    p_val = sub.add_parser("validate", help="run checks V1-V10 on a graph file")
    p_val.add_argument("path")

    p_inv = sub.add_parser("invariants", help="print the invariant package")
    p_inv.add_argument("path", nargs="?")
    p_inv.add_argument("--builtin")
    _add_field_args(p_inv)

    p_comp = sub.add_parser("compose", help="compose along a word")
    p_comp.add_argument("path", nargs="?")
    p_comp.add_argument("--builtin")
    p_comp.add_argument("--word", help="comma-separated reflections, e.g. s1,s2")
    p_comp.add_argument("--all", action="store_true",
                        help="print the nonvanishing and fixed sets")

    p_rep = sub.add_parser("report", help="full deterministic report")
    p_rep.add_argument("path", nargs="?")
    p_rep.add_argument("--builtin")
    _add_field_args(p_rep)
    p_rep.add_argument("--out")
    p_rep.add_argument("--json", action="store_true")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        for name in BUILTINS:
            print(name)
        return 0
    if args.command is None:
        parser.print_usage()
        return 2
    handlers = {
        "validate": cmd_validate,
        "invariants": cmd_invariants,
        "compose": cmd_compose,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (GraphParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WildCaseUnsupported, GroupTooLarge) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 3
    except (Cor1Violation, LemmaViolation, StabilizerNotSemidirect,
            InductionInconsistent, SphorbError) as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
