"""Symbolic composition calculus and invariant-ring degrees.

The span of equivariant functionals attached to a maximal-rank orbit is
tracked as a symbol; composing with the standard operator of a simple
reflection annihilates it at a type-G edge, moves it along the reflection
action at types U and T, and fixes it at type N.  Word-level composites
yield the nonvanishing set (minimal coset representatives) and the fixed
set (the little Weyl group); both identities are enforced and their failure
rejects the input graph.

Invariant degrees of the little Weyl group acting on the open-orbit weight
space are read off the Molien series, computed in exact rational polynomial
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Cor1Violation, NotMaximalRank, NotReflectionGroup
from .lattice import LocalFieldParams, saturation
from .orbitgraph import (OrbitGraph, ensure_validated, knop_simple,
                         rational_orbit_count)
from .rootdata import (DEFAULT_GROUP_CAP, WeylElement, apply, min_coset_reps,
                       _solve_fraction_system)
from .spherical import SphericalInvariants, compute_invariants, type_g_roots


@dataclass(frozen=True)
class IntertwinerSymbol:
    """Span of functionals supported on one maximal-rank orbit; space_dim is
    the rational orbit count when a field is fixed."""

    orbit_id: str
    space_dim: int | None = None


@dataclass(frozen=True)
class Zero:
    """Result of composing through a type-G edge."""

    def __bool__(self):
        return False


ZERO = Zero()

CompositionResult = Zero | IntertwinerSymbol


def open_symbol(graph: OrbitGraph,
                field: LocalFieldParams | None = None) -> IntertwinerSymbol:
    ensure_validated(graph)
    dim = None
    if field is not None:
        dim = rational_orbit_count(graph, graph.open_node, field)
    return IntertwinerSymbol(graph.open_id, dim)


def compose_simple(graph: OrbitGraph, symbol: IntertwinerSymbol,
                   root_index: int) -> CompositionResult:
    """One composition step at a simple root, by the type of the edge at the
    symbol's orbit: G annihilates, U and T move along the reflection action,
    N fixes the orbit."""
    ensure_validated(graph)
    node = graph.node(symbol.orbit_id)
    if node.rank != graph.max_rank:
        raise NotMaximalRank(f"{node.id} is not of maximal rank")
    edge = graph.edge_at(node.id, root_index)
    if edge.case_type == "G":
        return ZERO
    if edge.case_type == "N":
        return symbol
    target = knop_simple(graph, node, root_index)
    return IntertwinerSymbol(target.id, symbol.space_dim)


def compose_word(graph: OrbitGraph, w: WeylElement,
                 field: LocalFieldParams | None = None) -> CompositionResult:
    """Composite along a reduced word of w, starting from the open-orbit
    symbol; letters act right to left.  Nonzero exactly when no type-G edge
    is crossed."""
    result: CompositionResult = open_symbol(graph, field)
    for i in reversed(w.word):
        result = compose_simple(graph, result, i)
        if isinstance(result, Zero):
            return ZERO
    return result


def nonvanishing_set(graph: OrbitGraph,
                     cap: int = DEFAULT_GROUP_CAP) -> list[WeylElement]:
    """Elements whose composite with the open-orbit symbol is nonzero; must
    coincide with the minimal coset representatives of the type-G parabolic."""
    ensure_validated(graph)
    group = graph.weyl_group(cap)
    nonzero = [w for w in group.elements
               if not isinstance(compose_word(graph, w), Zero)]
    reps = min_coset_reps(group, type_g_roots(graph), side="left")
    if {w.matrix for w in nonzero} != {w.matrix for w in reps}:
        raise Cor1Violation(
            "nonvanishing set differs from the minimal coset representatives")
    return nonzero


def fixed_set(graph: OrbitGraph,
              cap: int = DEFAULT_GROUP_CAP) -> list[WeylElement]:
    """Nonvanishing elements whose composite returns to the open orbit; must
    coincide with the little Weyl group."""
    ensure_validated(graph)
    group = graph.weyl_group(cap)
    fixed = []
    for w in nonvanishing_set(graph, cap):
        result = compose_word(graph, w)
        if result.orbit_id == graph.open_id:
            fixed.append(w)
    little = compute_invariants(graph, cap=cap).little_weyl
    if {w.matrix for w in fixed} != {w.matrix for w in little}:
        raise Cor1Violation("fixed set differs from the little Weyl group")
    return fixed


def hecke_generic_rank(graph: OrbitGraph, field: LocalFieldParams,
                       cap: int = DEFAULT_GROUP_CAP) -> int:
    """Generic rank of the module of unramified vectors: the normalizer
    index times the rational orbit count; equals the generic multiplicity by
    construction (asserted)."""
    inv = compute_invariants(graph, field, cap)
    rank = (len(inv.normalizer) // len(inv.little_weyl)) * inv.h1
    assert rank == inv.multiplicity
    return rank


# ---------------------------------------------------------------------------
# exact polynomial helpers (coefficient lists over Fraction, low degree first)

def _ptrim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _pscale(a, c):
    return _ptrim([x * c for x in a])


def _pdivmod(a, b):
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = f
        for i in range(len(b)):
            a[k + i] -= f * b[i]
        _ptrim(a)
    return _ptrim(q), a


def _pgcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if a:
        a = _pscale(a, 1 / a[-1])
    return a


def _det_one_minus_t(matrix):
    """det(I - t*M) for a rational square matrix, as a polynomial in t."""
    m = len(matrix)
    entries = [[[Fraction(1 if i == j else 0), -Fraction(matrix[i][j])]
                for j in range(m)] for i in range(m)]

    def det(rows, cols):
        if not cols:
            return [Fraction(1)]
        i = rows[0]
        out = []
        for k, j in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = _pmul(_ptrim(list(entries[i][j])), minor)
            out = _padd(out, term) if k % 2 == 0 else _padd(out, _pscale(term, -1))
        return out

    return det(list(range(m)), list(range(m)))


def _restricted_matrix(basis, w):
    """Matrix of a Weyl element on the span of the basis rows (coefficients
    of the transported basis in the basis)."""
    rows = []
    for b in basis:
        coeffs = _solve_fraction_system(basis, apply(w, b))
        if coeffs is None:
            raise NotReflectionGroup(
                "group element does not preserve the weight span")
        rows.append(list(coeffs))
    return rows


def _rational_matrix_rank(rows):
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    for c in range(len(work[0]) if work else 0):
        pivot = next((i for i in range(rank, len(work)) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = 1 / work[rank][c]
        work[rank] = [x * inv for x in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[rank])]
        rank += 1
    return rank


def reflection_count(inv: SphericalInvariants) -> int:
    """Number of little-Weyl elements acting on the weight span with a fixed
    space of codimension exactly one."""
    basis = saturation(inv.a_x_star).hermite
    count = 0
    for w in inv.little_weyl:
        m = _restricted_matrix(basis, w)
        delta = [[m[i][j] - (1 if i == j else 0) for j in range(len(m))]
                 for i in range(len(m))]
        if _rational_matrix_rank(delta) == 1:
            count += 1
    return count


def invariant_degrees(inv: SphericalInvariants) -> list[int]:
    """Fundamental degrees of the little Weyl group on the weight span, from
    the Molien series (1/|W_X|) sum_g 1/det(1 - t g).

    The series must factor as prod 1/(1 - t^d_i) with as many factors as the
    rank; the degree product must equal |W_X| and sum(d_i - 1) the number of
    reflections.  Any failure raises NotReflectionGroup.
    """
    basis = saturation(inv.a_x_star).hermite
    m = len(basis)
    order = len(inv.little_weyl)
    num = [Fraction(0)]
    den = [Fraction(1)]
    for w in inv.little_weyl:
        d = _det_one_minus_t(_restricted_matrix(basis, w))
        num = _padd(_pmul(num, d), den)
        den = _pmul(den, d)
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdivmod(num, g)[0]
            den = _pdivmod(den, g)[0]
    # Molien series is num / (order * den); its reciprocal must be polynomial
    inverse, rem = _pdivmod(_pscale(den, Fraction(order)), num)
    if rem:
        raise NotReflectionGroup("Molien series is not the reciprocal of a "
                                 "polynomial")
    degrees = []
    while len(inverse) > 1:
        d = next((k for k in range(1, len(inverse)) if inverse[k] != 0), None)
        if d is None:
            break
        factor = [Fraction(1)] + [Fraction(0)] * (d - 1) + [Fraction(-1)]
        inverse, rem = _pdivmod(inverse, factor)
        if rem:
            raise NotReflectionGroup(
                "Molien series does not factor into fundamental degrees")
        degrees.append(d)
    if inverse != [Fraction(1)]:
        raise NotReflectionGroup("Molien series has a non-unit residual factor")
    degrees.sort()
    if len(degrees) != m:
        raise NotReflectionGroup(
            f"{len(degrees)} fundamental degrees for a rank-{m} span")
    product = 1
    for d in degrees:
        product *= d
    if product != order:
        raise NotReflectionGroup(
            f"degree product {product} differs from the group order {order}")
    if sum(d - 1 for d in degrees) != reflection_count(inv):
        raise NotReflectionGroup(
            "degree excess differs from the reflection count")
    return degrees
