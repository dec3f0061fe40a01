"""Typed Borel-orbit graphs and the Weyl-group action they induce.

An :class:`OrbitGraph` is a finite set of orbit nodes, each carrying a
character sublattice of the ambient lattice, together with one typed edge
per (node, simple root).  The edge types G/U/T/N determine how each simple
reflection permutes the nodes; the validator enforces every combinatorial
constraint a graph must satisfy to model the Borel orbits of a spherical
variety (checks V1 through V10).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (GroupTooLarge, InvalidGraph, NotMaximalRank, NotRational,
                     WildCaseUnsupported)
from .lattice import (LocalFieldParams, Sublattice, h1_order,
                      quotient_invariants, transport)
from .rootdata import DEFAULT_GROUP_CAP, RootDatum, WeylElement, WeylGroup, apply

CASE_TYPES = ("G", "U", "T", "N")

# canonical member roles per case type
CASE_ROLES = {
    "G": ("self",),
    "U": ("open", "closed"),
    "T": ("open", "closed1", "closed2"),
    "N": ("open", "closed"),
}


@dataclass(frozen=True)
class OrbitNode:
    """One Borel orbit: id, weight lattice, dimension, rationality flag and
    the label of the group orbit containing it."""

    id: str
    char_lattice: Sublattice
    dim: int
    rational: bool
    g_orbit: str

    @property
    def rank(self) -> int:
        return self.char_lattice.rank


@dataclass(frozen=True)
class RootEdge:
    """Grouping of the nodes in one minimal-parabolic orbit at one simple
    root, tagged by its case type.  Members are (role, node id) pairs in the
    canonical role order for the type."""

    root_index: int
    case_type: str
    members: tuple[tuple[str, str], ...]

    def role_of(self, node_id: str) -> str | None:
        for role, nid in self.members:
            if nid == node_id:
                return role
        return None

    def member(self, role: str) -> str | None:
        for r, nid in self.members:
            if r == role:
                return nid
        return None

    @property
    def member_ids(self) -> tuple[str, ...]:
        return tuple(nid for _, nid in self.members)


def make_edge(root_index: int, case_type: str, **roles: str) -> RootEdge:
    """Edge constructor enforcing the canonical role order."""
    if case_type not in CASE_ROLES:
        raise ValueError(f"unknown case type {case_type!r}")
    members = tuple((role, roles.pop(role)) for role in CASE_ROLES[case_type]
                    if role in roles)
    if roles:
        raise ValueError(f"roles {sorted(roles)} not allowed for type {case_type}")
    return RootEdge(root_index, case_type, members)


@dataclass(frozen=True)
class Finding:
    check: str
    severity: str
    message: str
    ids: tuple[str, ...] = ()

    def render(self) -> str:
        where = f" [{', '.join(self.ids)}]" if self.ids else ""
        return f"{self.check} {self.severity}: {self.message}{where}"


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def passed(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def checks_failed(self) -> tuple[str, ...]:
        return tuple(sorted({f.check for f in self.findings if f.severity == "error"}))


class OrbitGraph:
    """Immutable container for nodes and typed edges over one root datum.

    Construction never raises on combinatorial inconsistencies; those are
    the validator's job.  Queries that presuppose a valid graph call
    :func:`ensure_validated` first.
    """

    def __init__(self, datum: RootDatum, nodes, edges, open_id: str):
        self.datum = datum
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.open_id = open_id
        self._node_by_id: dict[str, OrbitNode] = {}
        for node in self.nodes:
            self._node_by_id.setdefault(node.id, node)
        self._edges_at: dict[tuple[str, int], list[RootEdge]] = {}
        for edge in self.edges:
            for nid in edge.member_ids:
                self._edges_at.setdefault((nid, edge.root_index), []).append(edge)
        self._cache: dict = {}

    # -- lookups -----------------------------------------------------------

    def node(self, node_id: str) -> OrbitNode:
        return self._node_by_id[node_id]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._node_by_id

    @property
    def open_node(self) -> OrbitNode:
        return self.node(self.open_id)

    def edges_at(self, node_id: str, root_index: int) -> list[RootEdge]:
        return self._edges_at.get((node_id, root_index), [])

    def edge_at(self, node_id: str, root_index: int) -> RootEdge:
        found = self.edges_at(node_id, root_index)
        if len(found) != 1:
            raise InvalidGraph(
                f"(node {node_id}, root s{root_index + 1}) lies in {len(found)} edges")
        return found[0]

    @property
    def max_rank(self) -> int:
        if "max_rank" not in self._cache:
            self._cache["max_rank"] = max(n.rank for n in self.nodes)
        return self._cache["max_rank"]

    def max_rank_nodes(self) -> tuple[OrbitNode, ...]:
        return tuple(n for n in self.nodes if n.rank == self.max_rank)

    def weyl_group(self, cap: int = DEFAULT_GROUP_CAP) -> WeylGroup:
        if "weyl" not in self._cache:
            self._cache["weyl"] = WeylGroup(self.datum, cap)
        return self._cache["weyl"]

    # -- validation ----------------------------------------------------------

    def validation_report(self) -> ValidationReport:
        if "report" not in self._cache:
            self._cache["report"] = validate(self)
        return self._cache["report"]


def ensure_validated(graph: OrbitGraph) -> None:
    report = graph.validation_report()
    if not report.passed:
        failed = ", ".join(report.checks_failed())
        raise InvalidGraph(f"graph fails validation checks: {failed}")


# ---------------------------------------------------------------------------
# the validator

def validate(graph: OrbitGraph) -> ValidationReport:
    """Run checks V1 to V10 and report findings; never raises.

    Structure-dependent checks (V4, V5, V9, V10) are skipped when V1 finds
    errors, since the action is not well defined on a malformed graph.
    """
    findings: list[Finding] = []
    err = lambda check, msg, *ids: findings.append(Finding(check, "error", msg, ids))

    _check_v1(graph, err)
    structural_ok = not findings

    _check_v2(graph, err)
    _check_v3(graph, err)
    _check_v6(graph, err)
    _check_v8(graph, err)

    if structural_ok:
        _check_v4(graph, err)
        rank_stable = not any(f.check == "V4" for f in findings)
        if rank_stable:
            _check_v5(graph, err)
        _check_v7(graph, err)
        _check_v9(graph, err)
        _check_v10(graph, err)

    return ValidationReport(tuple(findings))


def _check_v1(graph, err):
    seen_ids = set()
    for node in graph.nodes:
        if node.id in seen_ids:
            err("V1", f"duplicate node id {node.id}", node.id)
        seen_ids.add(node.id)
        if node.char_lattice.ambient_rank != graph.datum.ambient_rank:
            err("V1", f"node {node.id} lattice has wrong ambient rank", node.id)
    if not graph.has_node(graph.open_id):
        err("V1", f"open node id {graph.open_id} does not exist", graph.open_id)
    l = graph.datum.num_simple
    for edge in graph.edges:
        if not 0 <= edge.root_index < l:
            err("V1", f"edge root index s{edge.root_index + 1} out of range")
            continue
        roles = tuple(r for r, _ in edge.members)
        if edge.case_type not in CASE_ROLES:
            err("V1", f"unknown case type {edge.case_type}")
            continue
        if roles != CASE_ROLES[edge.case_type]:
            err("V1", f"type-{edge.case_type} edge at s{edge.root_index + 1} has "
                f"roles {list(roles)}, expected {list(CASE_ROLES[edge.case_type])}",
                *edge.member_ids)
        for _, nid in edge.members:
            if not graph.has_node(nid):
                err("V1", f"edge references missing node {nid}", nid)
        ids = edge.member_ids
        if len(set(ids)) != len(ids):
            err("V1", f"edge at s{edge.root_index + 1} repeats a member", *ids)
    for node in graph.nodes:
        for i in range(l):
            count = len(graph.edges_at(node.id, i))
            if count != 1:
                err("V1", f"(node {node.id}, root s{i + 1}) lies in {count} edges, "
                    "expected exactly 1", node.id)


def _iter_well_formed_edges(graph):
    for edge in graph.edges:
        if edge.case_type not in CASE_ROLES:
            continue
        if tuple(r for r, _ in edge.members) != CASE_ROLES[edge.case_type]:
            continue
        if not all(graph.has_node(nid) for nid in edge.member_ids):
            continue
        yield edge


def _check_v2(graph, err):
    for edge in _iter_well_formed_edges(graph):
        if edge.case_type == "G":
            continue
        open_node = graph.node(edge.member("open"))
        for role, nid in edge.members:
            if role == "open":
                continue
            closed = graph.node(nid)
            if open_node.dim != closed.dim + 1:
                err("V2", f"type-{edge.case_type} edge at s{edge.root_index + 1}: "
                    f"dim({open_node.id})={open_node.dim} is not "
                    f"dim({closed.id})+1={closed.dim + 1}",
                    open_node.id, closed.id)


def _check_v3(graph, err):
    datum = graph.datum
    for edge in _iter_well_formed_edges(graph):
        i = edge.root_index
        if not 0 <= i < datum.num_simple:
            continue
        refl = datum.simple_reflection_matrix(i)
        if edge.case_type == "G":
            node = graph.node(edge.member("self"))
            for gen in node.char_lattice.generators:
                if apply(refl, gen) != gen:
                    err("V3", f"type-G edge at s{i + 1}: X({node.id}) is not fixed "
                        f"pointwise by s{i + 1}", node.id)
                    break
        elif edge.case_type == "U":
            opened = graph.node(edge.member("open"))
            closed = graph.node(edge.member("closed"))
            if transport(refl, closed.char_lattice) != opened.char_lattice:
                err("V3", f"type-U edge at s{i + 1}: s{i + 1}*X({closed.id}) != "
                    f"X({opened.id})", opened.id, closed.id)
        elif edge.case_type == "T":
            opened = graph.node(edge.member("open"))
            c1 = graph.node(edge.member("closed1"))
            c2 = graph.node(edge.member("closed2"))
            if transport(refl, c1.char_lattice) != c2.char_lattice:
                err("V3", f"type-T edge at s{i + 1}: s{i + 1}*X({c1.id}) != X({c2.id})",
                    c1.id, c2.id)
            for closed in (c1, c2):
                if not (opened.char_lattice.contains(closed.char_lattice)
                        and closed.rank == opened.rank - 1):
                    err("V3", f"type-T edge at s{i + 1}: X({closed.id}) is not a "
                        f"corank-1 sublattice of X({opened.id})",
                        opened.id, closed.id)
        elif edge.case_type == "N":
            opened = graph.node(edge.member("open"))
            closed = graph.node(edge.member("closed"))
            if not opened.char_lattice.contains(
                    transport(refl, closed.char_lattice)):
                err("V3", f"type-N edge at s{i + 1}: s{i + 1}*X({closed.id}) not "
                    f"inside X({opened.id})", opened.id, closed.id)


def _check_v4(graph, err):
    top = graph.max_rank
    for node in graph.max_rank_nodes():
        for i in range(graph.datum.num_simple):
            image = knop_simple(graph, node, i)
            if image.rank != top:
                err("V4", f"s{i + 1} moves maximal-rank node {node.id} to "
                    f"{image.id} of rank {image.rank}", node.id, image.id)


def _braid_order(datum, i, j) -> int:
    c = datum.pairing[i][j] * datum.pairing[j][i]
    return {0: 2, 1: 3, 2: 4, 3: 6}[c]


def _check_v5(graph, err):
    ids = [n.id for n in graph.max_rank_nodes()]
    perms = {i: {nid: knop_simple(graph, graph.node(nid), i).id for nid in ids}
             for i in range(graph.datum.num_simple)}

    def chain(first, second, length, nid):
        seq = [first, second] * ((length + 1) // 2)
        for k in seq[:length]:
            nid = perms[k][nid]
        return nid

    for i in range(graph.datum.num_simple):
        for j in range(i + 1, graph.datum.num_simple):
            m = _braid_order(graph.datum, i, j)
            for nid in ids:
                if chain(i, j, m, nid) != chain(j, i, m, nid):
                    err("V5", f"braid relation of order {m} fails for "
                        f"(s{i + 1}, s{j + 1}) at node {nid}", nid)


def _check_v6(graph, err):
    datum = graph.datum
    for edge in _iter_well_formed_edges(graph):
        i = edge.root_index
        if not 0 <= i < datum.num_simple:
            continue
        if edge.case_type == "G":
            continue
        # applicable members: the open one (alpha does not raise it) and, for
        # type U, also the closed one (raised of type U)
        applicable = [edge.member("open")]
        if edge.case_type == "U":
            applicable.append(edge.member("closed"))
        for nid in applicable:
            node = graph.node(nid)
            if not any(datum.pair(gen, i) != 0
                       for gen in node.char_lattice.generators):
                err("V6", f"non-degeneracy fails at ({nid}, s{i + 1}): every weight "
                    f"pairs to zero with the coroot", nid)


def _check_v7(graph, err):
    for node in graph.max_rank_nodes():
        if not node.rational:
            err("V7", f"maximal-rank node {node.id} is not rational", node.id)
    for node in graph.nodes:
        if not node.rational:
            continue
        for i in range(graph.datum.num_simple):
            image = knop_simple(graph, node, i)
            if not image.rational:
                err("V7", f"s{i + 1} image {image.id} of rational node {node.id} "
                    "is not rational", node.id, image.id)
            edge = graph.edge_at(node.id, i)
            role = edge.role_of(node.id)
            if role in ("closed", "closed1", "closed2"):
                raised = graph.node(edge.member("open"))
                if not raised.rational:
                    err("V7", f"node {raised.id} raised from rational {node.id} "
                        "is not rational", node.id, raised.id)


def _check_v8(graph, err):
    by_orbit: dict[str, list[OrbitNode]] = {}
    for node in graph.nodes:
        by_orbit.setdefault(node.g_orbit, []).append(node)
    for label, members in by_orbit.items():
        top_dim = max(n.dim for n in members)
        tops = [n for n in members if n.dim == top_dim]
        if len(tops) != 1:
            err("V8", f"group orbit {label} has {len(tops)} nodes of maximal "
                "dimension, expected exactly one", *[n.id for n in tops])
    if not graph.has_node(graph.open_id):
        return
    open_orbit = graph.open_node.g_orbit
    open_lattice = graph.open_node.char_lattice
    open_rank = graph.open_node.rank
    for label, members in by_orbit.items():
        if label == open_orbit:
            continue
        worst = max(members, key=lambda n: n.rank)
        if worst.rank >= open_rank:
            err("V8", f"non-open group orbit {label} reaches rank {worst.rank}, "
                f"not below the open rank {open_rank}", worst.id)
        top = max(members, key=lambda n: n.dim)
        if not open_lattice.contains(top.char_lattice):
            err("V8", f"open Borel orbit {top.id} of group orbit {label} has "
                "weights outside the open-orbit weight group", top.id)


def _check_v9(graph, err):
    node = graph.open_node
    if node.dim != max(n.dim for n in graph.nodes):
        err("V9", f"open node {node.id} does not have maximal dimension", node.id)
    if node.rank != graph.max_rank:
        err("V9", f"open node {node.id} does not have maximal rank", node.id)


def _check_v10(graph, err):
    datum = graph.datum
    open_node = graph.open_node
    for i in range(datum.num_simple):
        edge = graph.edge_at(open_node.id, i)
        if edge.case_type != "G":
            continue
        refl = datum.simple_reflection_matrix(i)
        for gen in open_node.char_lattice.generators:
            if apply(refl, gen) != gen:
                err("V10", f"s{i + 1} is a type-G root of the open orbit but does "
                    "not fix its weight group pointwise", open_node.id)
                break


# ---------------------------------------------------------------------------
# the Weyl action on nodes

def knop_simple(graph: OrbitGraph, node, root_index: int) -> OrbitNode:
    """Image of a node under one simple reflection, by edge type:
    G and N fix every member, T fixes the open member and swaps the closed
    pair, U swaps its two members."""
    if isinstance(node, str):
        node = graph.node(node)
    edge = graph.edge_at(node.id, root_index)
    kind = edge.case_type
    if kind in ("G", "N"):
        return node
    if kind == "U":
        other = next((nid for nid in edge.member_ids if nid != node.id), None)
        if other is None:
            raise InvalidGraph(f"type-U edge at s{root_index + 1} has one member")
        return graph.node(other)
    # type T
    role = edge.role_of(node.id)
    if role == "open":
        return node
    target = "closed2" if role == "closed1" else "closed1"
    return graph.node(edge.member(target))


def knop_apply(graph: OrbitGraph, node, w: WeylElement) -> OrbitNode:
    """Left action along a reduced word, letters applied right to left.

    Composite words are only defined on maximal-rank nodes (single
    reflections act everywhere)."""
    if isinstance(node, str):
        node = graph.node(node)
    if len(w.word) > 1:
        ensure_validated(graph)
        if node.rank != graph.max_rank:
            raise NotMaximalRank(
                f"composite action needs a maximal-rank node, got {node.id}")
    current = node
    for i in reversed(w.word):
        current = knop_simple(graph, current, i)
    return current


def stabilizer(graph: OrbitGraph, node,
               cap: int = DEFAULT_GROUP_CAP):
    """Stabilizer {w : w sends the node to itself} of a maximal-rank node.

    Returns (elements, generators); elements are closed under product and
    sorted by (length, word).
    """
    ensure_validated(graph)
    if isinstance(node, str):
        node = graph.node(node)
    if node.rank != graph.max_rank:
        raise NotMaximalRank(f"{node.id} is not of maximal rank")
    group = graph.weyl_group(cap)
    elems = [w for w in group.elements
             if knop_apply(graph, node, w).id == node.id]
    elem_set = {w.matrix for w in elems}
    for a in elems:
        for b in elems:
            if group.multiply(a, b).matrix not in elem_set:
                raise InvalidGraph(
                    f"stabilizer of {node.id} is not closed under products")
    generators = []
    span = {group.identity.matrix}
    for w in elems:
        if w.matrix in span:
            continue
        generators.append(w)
        span = {u.matrix for u in group.subgroup(generators)}
    return elems, generators


def rational_orbit_count(graph: OrbitGraph, node,
                         field: LocalFieldParams) -> int:
    """Number of rational Borel orbits inside one geometric orbit: the order
    of H^1 of the component group of the orbit's toral stabilizer."""
    ensure_validated(graph)
    if isinstance(node, str):
        node = graph.node(node)
    if not node.rational:
        raise NotRational(f"orbit {node.id} has no rational point")
    _, torsion = quotient_invariants(graph.datum.ambient_rank, node.char_lattice)
    return h1_order(torsion, field)
