"""Derived invariants of a validated orbit graph and standard builders.

From a graph this module extracts the type-G root set of the open orbit,
the stabilizer of the open orbit under the reflection action, its little
Weyl group (minimal coset representatives inside the stabilizer), the
weight lattice of the open orbit, the normalizer of the shifted weight
space, and the generic multiplicity (normalizer index times the rational
orbit count).

Builders produce the standard families: the five rank-one cases, the group
case G under G x G, full horospherical varieties, and parabolic induction
from a graph over a Levi sub-datum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (InductionInconsistent, LemmaViolation, NotMaximalRank,
                     RankMismatch, SphorbError, StabilizerNotSemidirect)
from .lattice import (LocalFieldParams, Sublattice, full_lattice, h1_order,
                      quotient_invariants, saturation, transport, zero_lattice)
from .orbitgraph import (OrbitGraph, OrbitNode, ensure_validated, knop_apply,
                         make_edge, stabilizer)
from .rootdata import (DEFAULT_GROUP_CAP, RootDatum, WeylElement, apply,
                       min_coset_reps, word_str, _solve_fraction_system)


# ---------------------------------------------------------------------------
# affine character cosets (log coordinates)

@dataclass(frozen=True)
class AffineCharacterCoset:
    """A coset shift + span_Q(direction) inside the log character space Q^n.

    The log convention: the vector nu stands for the unramified character
    with chi^(coroot) = q^(-<nu, coroot>); the square root of the Borel
    modulus corresponds to rho.
    """

    shift: tuple[Fraction, ...]
    direction: Sublattice

    def __post_init__(self):
        object.__setattr__(self, "shift",
                           tuple(Fraction(x) for x in self.shift))
        if len(self.shift) != self.direction.ambient_rank:
            raise RankMismatch("shift dimension does not match the direction")

    def contains(self, nu) -> bool:
        diff = tuple(Fraction(a) - b for a, b in zip(nu, self.shift))
        return _in_rational_span(self.direction, diff)

    def transported(self, w: WeylElement) -> "AffineCharacterCoset":
        return AffineCharacterCoset(apply(w, self.shift),
                                    transport(w, self.direction))

    def __eq__(self, other):
        if not isinstance(other, AffineCharacterCoset):
            return NotImplemented
        return (saturation(self.direction) == saturation(other.direction)
                and self.contains(other.shift))

    def __hash__(self):
        return hash(saturation(self.direction))


def _in_rational_span(lat: Sublattice, vec) -> bool:
    if not any(vec):
        return True
    if not lat.hermite:
        return False
    return _solve_fraction_system(lat.hermite, tuple(vec)) is not None


# ---------------------------------------------------------------------------
# spherical invariants

@dataclass(frozen=True)
class SphericalInvariants:
    """Invariant package of one graph; see compute_invariants."""

    datum: RootDatum
    p_x_roots: tuple[int, ...]
    stabilizer: tuple[WeylElement, ...]
    w_px: tuple[WeylElement, ...]
    little_weyl: tuple[WeylElement, ...]
    a_x_star: Sublattice
    normalizer: tuple[WeylElement, ...]
    h1: int | None = None
    multiplicity: int | None = None

    @property
    def rank(self) -> int:
        return self.a_x_star.rank


def _normalizes_shifted_space(datum, w, span_rows, rho_vec) -> bool:
    for row in span_rows:
        if not _span_member(span_rows, apply(w, row)):
            return False
    shifted = tuple(a + b for a, b in zip(apply(w, tuple(-x for x in rho_vec)),
                                          rho_vec))
    return _span_member(span_rows, shifted)


def _span_member(rows, vec) -> bool:
    if not any(vec):
        return True
    if not rows:
        return False
    return _solve_fraction_system(rows, tuple(vec)) is not None


def type_g_roots(graph: OrbitGraph) -> tuple[int, ...]:
    """Simple roots whose edge at the open orbit is of type G."""
    open_id = graph.open_id
    return tuple(sorted(
        i for i in range(graph.datum.num_simple)
        if graph.edge_at(open_id, i).case_type == "G"))


def compute_invariants(graph: OrbitGraph,
                       field: LocalFieldParams | None = None,
                       cap: int = DEFAULT_GROUP_CAP) -> SphericalInvariants:
    """Full invariant package of a validated graph.

    The little Weyl group is the set of minimal-length coset representatives
    inside the stabilizer of the open orbit; the factorization
    stabilizer = little_weyl * W_P with trivial intersection is verified and
    its failure raises StabilizerNotSemidirect.  With a field, the package
    also carries |H^1| and the generic multiplicity
    (normalizer : little Weyl group) * |H^1|.
    """
    ensure_validated(graph)
    datum = graph.datum
    group = graph.weyl_group(cap)
    delta = type_g_roots(graph)
    stab, _ = stabilizer(graph, graph.open_node, cap)
    w_px = group.subgroup([group.simple(i) for i in delta])
    w_px_set = {w.matrix for w in w_px}
    little = tuple(
        w for w in stab
        if all(datum.is_positive_root(apply(w, datum.simple_roots[j]))
               for j in delta))

    stab_set = {w.matrix for w in stab}
    little_set = {w.matrix for w in little}
    if len(little) * len(w_px) != len(stab):
        raise StabilizerNotSemidirect(
            f"|stabilizer|={len(stab)} is not |W_X|*|W_P|="
            f"{len(little)}*{len(w_px)}")
    products = set()
    for a in little:
        for b in w_px:
            products.add(group.multiply(a, b).matrix)
    if products != stab_set:
        raise StabilizerNotSemidirect(
            "stabilizer does not factor as W_X * W_P(X)")
    if little_set & w_px_set != {group.identity.matrix}:
        raise StabilizerNotSemidirect("W_X meets W_P(X) beyond the identity")
    for a in little:
        for b in little:
            if group.multiply(a, b).matrix not in little_set:
                raise StabilizerNotSemidirect(
                    "little Weyl group is not closed under products")

    a_x = graph.open_node.char_lattice
    span_rows = saturation(a_x).hermite
    rho_vec = datum.rho
    normalizer = tuple(w for w in group.elements
                       if _normalizes_shifted_space(datum, w, span_rows, rho_vec))
    norm_set = {w.matrix for w in normalizer}
    if not little_set <= norm_set:
        raise StabilizerNotSemidirect(
            "little Weyl group does not normalize the shifted weight space")

    h1 = None
    mult = None
    if field is not None:
        _, torsion = quotient_invariants(datum.ambient_rank, a_x)
        h1 = h1_order(torsion, field)
        mult = (len(normalizer) // len(little)) * h1

    return SphericalInvariants(
        datum=datum, p_x_roots=delta, stabilizer=tuple(stab),
        w_px=tuple(w_px), little_weyl=little, a_x_star=a_x,
        normalizer=normalizer, h1=h1, multiplicity=mult)


def open_orbit_coset(graph: OrbitGraph) -> AffineCharacterCoset:
    """Admissibility coset of the open orbit: shift -rho, direction a_X*."""
    rho_vec = graph.datum.rho
    return AffineCharacterCoset(tuple(-x for x in rho_vec),
                                graph.open_node.char_lattice)


def admissible_coset(graph: OrbitGraph, node,
                     cap: int = DEFAULT_GROUP_CAP) -> AffineCharacterCoset:
    """Admissibility coset of a maximal-rank orbit, transported from the open
    orbit along any minimal coset representative reaching it.

    All representatives reaching the node must agree; disagreement means the
    graph is not a valid spherical model.
    """
    ensure_validated(graph)
    if isinstance(node, str):
        node = graph.node(node)
    if node.rank != graph.max_rank:
        raise NotMaximalRank(f"{node.id} is not of maximal rank")
    group = graph.weyl_group(cap)
    delta = type_g_roots(graph)
    reps = min_coset_reps(group, delta, side="left")
    base = open_orbit_coset(graph)
    cosets = [base.transported(w) for w in reps
              if knop_apply(graph, graph.open_node, w).id == node.id]
    if not cosets:
        raise SphorbError(
            f"{node.id} is not in the Weyl orbit of the open node")
    first = cosets[0]
    for other in cosets[1:]:
        if other != first:
            raise StabilizerNotSemidirect(
                f"coset representatives disagree at {node.id}")
    return first


def bad_divisors(inv: SphericalInvariants):
    """Containments of the shifted weight space in the bad divisor families.

    Returns (r_containments, q_containments) as sets of coroot vectors.  The
    first is asserted empty and the second must consist exactly of the
    coroots of the type-G simple roots; any other outcome raises
    LemmaViolation.
    """
    datum = inv.datum
    rho_vec = datum.rho
    gens = inv.a_x_star.generators
    r_hits = set()
    q_hits = set()
    for root, coroot in datum.positive_root_coroot_pairs:
        constant = all(sum(c * g for c, g in zip(coroot, gen)) == 0
                       for gen in gens)
        if not constant:
            continue
        value = sum(-c * r for c, r in zip(coroot, rho_vec))
        if value == 0:
            r_hits.add(coroot)
        if value == -1:
            q_hits.add(coroot)
    if r_hits:
        raise LemmaViolation(
            f"shifted weight space lies inside an irregular divisor: {sorted(r_hits)}")
    expected = {datum.simple_coroots[i] for i in inv.p_x_roots}
    if q_hits != expected:
        raise LemmaViolation(
            f"q-divisor containments {sorted(q_hits)} differ from the type-G "
            f"coroots {sorted(expected)}")
    return set(), q_hits


# ---------------------------------------------------------------------------
# builders

def sl2_datum() -> RootDatum:
    """Rank-one datum in weight coordinates: X(A) = Z, alpha = 2, coroot = 1."""
    return RootDatum(1, ((2,),), ((1,),))


SL2_CASES = ("G", "T_split", "T_nonsplit", "N", "U")


def build_sl2_on(datum: RootDatum, root_index: int, case: str) -> OrbitGraph:
    """One rank-one family member over an arbitrary (sub-)datum.

    Weight lattices relative to the root alpha at root_index: type G has the
    zero lattice, T has Z*alpha, N has Z*2alpha, U the full ambient lattice.
    """
    if case not in SL2_CASES:
        raise ValueError(f"unknown rank-one case {case!r}; choose from {SL2_CASES}")
    n = datum.ambient_rank
    alpha = datum.simple_roots[root_index]
    if case == "G":
        nodes = [OrbitNode("open", zero_lattice(n), 0, True, "X")]
        edges = [make_edge(root_index, "G", self="open")]
        open_id = "open"
    elif case in ("T_split", "T_nonsplit"):
        closed_rational = case == "T_split"
        nodes = [
            OrbitNode("open", Sublattice(n, (alpha,)), 1, True, "X"),
            OrbitNode("closed1", zero_lattice(n), 0, closed_rational, "X"),
            OrbitNode("closed2", zero_lattice(n), 0, closed_rational, "X"),
        ]
        edges = [make_edge(root_index, "T", open="open",
                           closed1="closed1", closed2="closed2")]
        open_id = "open"
    elif case == "N":
        double = tuple(2 * a for a in alpha)
        nodes = [
            OrbitNode("open", Sublattice(n, (double,)), 1, True, "X"),
            OrbitNode("closed", zero_lattice(n), 0, True, "X"),
        ]
        edges = [make_edge(root_index, "N", open="open", closed="closed")]
        open_id = "open"
    else:  # case U
        nodes = [
            OrbitNode("open", full_lattice(n), 1, True, "X"),
            OrbitNode("closed", full_lattice(n), 0, True, "X"),
        ]
        edges = [make_edge(root_index, "U", open="open", closed="closed")]
        open_id = "open"
    graph = OrbitGraph(datum, nodes, edges, open_id)
    ensure_validated(graph)
    return graph


def build_sl2(case: str) -> OrbitGraph:
    """The five rank-one graphs: G (one orbit), T split/non-split (three
    orbits, the open one of weight group 2Z), N (two orbits, 4Z) and U (two
    orbits of equal rank, full weight group)."""
    return build_sl2_on(sl2_datum(), 0, case)


def doubled_datum(datum: RootDatum) -> RootDatum:
    """Datum of G x G on the doubled ambient lattice; left-copy roots come
    first."""
    n = datum.ambient_rank
    zero = (0,) * n
    roots = tuple(r + zero for r in datum.simple_roots) + \
        tuple(zero + r for r in datum.simple_roots)
    coroots = tuple(c + zero for c in datum.simple_coroots) + \
        tuple(zero + c for c in datum.simple_coroots)
    return RootDatum(2 * n, roots, coroots)


def _cell_id(word) -> str:
    return f"cell:{word_str(word)}"


def build_group_case(datum: RootDatum, cap: int = DEFAULT_GROUP_CAP) -> OrbitGraph:
    """The group viewed as a spherical variety for G x G: nodes are the
    Bruhat cells, all edges of type U (left copy pairs cells w and s_i*w,
    right copy pairs w and w*s_i), and the cell of w carries the twisted
    anti-diagonal lattice {(chi, -w^-1 chi)}."""
    from .rootdata import WeylGroup
    group = WeylGroup(datum, cap)
    n = datum.ambient_rank
    l = datum.num_simple
    double = doubled_datum(datum)
    nodes = []
    for w in group.elements:
        w_inv = group.inverse(w).matrix
        gens = tuple(
            tuple((1 if j == i else 0) for j in range(n)) +
            tuple(-w_inv[r][i] for r in range(n))
            for i in range(n))
        nodes.append(OrbitNode(_cell_id(w.word), Sublattice(2 * n, gens),
                               w.length, True, "X"))
    edges = []
    for w in group.elements:
        for i in range(l):
            left = group.multiply(group.simple(i), w)
            if left.length > w.length:
                edges.append(make_edge(i, "U", open=_cell_id(left.word),
                                       closed=_cell_id(w.word)))
            right = group.multiply(w, group.simple(i))
            if right.length > w.length:
                edges.append(make_edge(l + i, "U", open=_cell_id(right.word),
                                       closed=_cell_id(w.word)))
    graph = OrbitGraph(double, nodes, edges, _cell_id(group.longest().word))
    ensure_validated(graph)
    return graph


def build_horospherical_full(datum: RootDatum,
                             cap: int = DEFAULT_GROUP_CAP) -> OrbitGraph:
    """Quotient by a maximal unipotent subgroup: nodes indexed by the Weyl
    group with full weight lattices, all edges of type U pairing cells w and
    w*s_i."""
    from .rootdata import WeylGroup
    group = WeylGroup(datum, cap)
    n = datum.ambient_rank
    nodes = [OrbitNode(_cell_id(w.word), full_lattice(n), w.length, True, "X")
             for w in group.elements]
    edges = []
    for w in group.elements:
        for i in range(datum.num_simple):
            right = group.multiply(w, group.simple(i))
            if right.length > w.length:
                edges.append(make_edge(i, "U", open=_cell_id(right.word),
                                       closed=_cell_id(w.word)))
    graph = OrbitGraph(datum, nodes, edges, _cell_id(group.longest().word))
    ensure_validated(graph)
    return graph


def levi_subdatum(ambient: RootDatum, p_roots) -> RootDatum:
    """Sub-datum of the ambient datum on a subset of simple roots (same
    ambient lattice)."""
    idx = sorted(set(p_roots))
    return RootDatum(ambient.ambient_rank,
                     tuple(ambient.simple_roots[i] for i in idx),
                     tuple(ambient.simple_coroots[i] for i in idx))


def build_parabolic_induction(inner: OrbitGraph, p_roots, ambient: RootDatum,
                              cap: int = DEFAULT_GROUP_CAP) -> OrbitGraph:
    """Induce a graph over a Levi sub-datum to the ambient datum.

    Nodes are pairs (inner node, w) over the minimal right-coset
    representatives; the pair's lattice is the w^-1 transport of the inner
    one, so the open node (at w = e) keeps the inner open-orbit weights.
    Edges in the coset direction are type U; at roots folded into the Levi
    (w alpha a simple Levi root) the inner edge is transported wholesale.
    The result must pass validation and reproduce the inner little Weyl
    group and open-orbit weight group, otherwise InductionInconsistent.
    """
    from .rootdata import WeylGroup
    p_idx = sorted(set(p_roots))
    expected = levi_subdatum(ambient, p_idx)
    if (inner.datum.ambient_rank != ambient.ambient_rank
            or inner.datum.simple_roots != expected.simple_roots
            or inner.datum.simple_coroots != expected.simple_coroots):
        raise RankMismatch(
            "inner graph must live on the Levi sub-datum of the ambient datum")
    ensure_validated(inner)
    group = WeylGroup(ambient, cap)
    reps = min_coset_reps(group, p_idx, side="right")
    rep_set = {w.matrix for w in reps}
    l_max = max(w.length for w in reps)

    def pair_id(inner_id, w):
        return f"{inner_id}@{word_str(w.word)}"

    nodes = []
    for y in inner.nodes:
        for w in reps:
            lat = transport(group.inverse(w), y.char_lattice)
            nodes.append(OrbitNode(pair_id(y.id, w), lat,
                                   y.dim + (l_max - w.length),
                                   y.rational, y.g_orbit))

    levi_root_of = {ambient.simple_roots[amb]: inner_pos
                    for inner_pos, amb in enumerate(p_idx)}
    edges = []
    for w in reps:
        for a in range(ambient.num_simple):
            v = group.multiply(w, group.simple(a))
            if v.matrix in rep_set:
                if v.length > w.length:
                    for y in inner.nodes:
                        edges.append(make_edge(
                            a, "U", open=pair_id(y.id, w),
                            closed=pair_id(y.id, v)))
            else:
                image = apply(w, ambient.simple_roots[a])
                j = levi_root_of.get(tuple(image))
                if j is None:
                    raise InductionInconsistent(
                        f"{word_str(w.word)} maps s{a + 1} outside the Levi "
                        "simple roots")
                for inner_edge in inner.edges:
                    if inner_edge.root_index != j:
                        continue
                    members = {role: pair_id(nid, w)
                               for role, nid in inner_edge.members}
                    edges.append(make_edge(a, inner_edge.case_type, **members))

    graph = OrbitGraph(ambient, nodes, edges,
                       pair_id(inner.open_id, group.identity))
    report = graph.validation_report()
    if not report.passed:
        raise InductionInconsistent(
            "induced graph fails validation: "
            + "; ".join(f.render() for f in report.findings))
    inner_inv = compute_invariants(inner, cap=cap)
    induced_inv = compute_invariants(graph, cap=cap)
    if induced_inv.a_x_star != inner_inv.a_x_star:
        raise InductionInconsistent(
            "induced open-orbit weight group differs from the inner one")
    if ({w.matrix for w in induced_inv.little_weyl}
            != {w.matrix for w in inner_inv.little_weyl}):
        raise InductionInconsistent(
            "induced little Weyl group differs from the inner one")
    return graph
