"""Exact integer-lattice algebra and tame local-field H^1 orders.

Sublattices of Z^n are held as row-generator matrices and compared through
their Hermite normal forms.  Smith normal form is computed with certified
unimodular transforms; quotient invariants Z^n/L feed the Kummer-theoretic
count |k*/(k*)^m| = m*gcd(m, q-1) in the tame case.

>>> smith_invariants([[2, 4], [6, 8]])
[2, 4]
>>> quotient_invariants(2, Sublattice(2, ((2, 0), (0, 3))))
(0, FiniteAbelianInvariants(factors=(6,)))
>>> h1_order(FiniteAbelianInvariants((2,)), LocalFieldParams(5, 5))
4
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DimensionMismatch, WildCaseUnsupported


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and g = a*x + b*y."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


# ---------------------------------------------------------------------------
# Hermite normal form (row style)

def hermite_form(rows, width: int) -> tuple[tuple[int, ...], ...]:
    """Canonical row Hermite form: echelon rows, positive pivots, entries
    above each pivot reduced into [0, pivot)."""
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(width):
        idx = [i for i, r in enumerate(work) if r[col] != 0]
        if not idx:
            continue
        pivot = work[idx[0]]
        for i in idx[1:]:
            other = work[i]
            g, x, y = xgcd(pivot[col], other[col])
            fp, fo = pivot[col] // g, other[col] // g
            new_pivot = [x * a + y * b for a, b in zip(pivot, other)]
            new_other = [fo * a - fp * b for a, b in zip(pivot, other)]
            pivot[:] = new_pivot
            other[:] = new_other
        if pivot[col] < 0:
            pivot[:] = [-a for a in pivot]
        basis.append(pivot[:])
        work = [r for i, r in enumerate(work) if i != idx[0] and any(r)]
    # reduce entries above each pivot
    for i in reversed(range(len(basis))):
        pcol = next(c for c, v in enumerate(basis[i]) if v != 0)
        for j in range(i):
            q = basis[j][pcol] // basis[i][pcol]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return tuple(tuple(r) for r in basis)


# ---------------------------------------------------------------------------
# Smith normal form with transforms

def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(mat):
    """Return (U, D, V) with U*mat*V = D diagonal, d_i | d_{i+1}, U and V
    unimodular.  The identity U*mat*V == D is asserted before returning."""
    a = [list(int(x) for x in row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = _identity(m)
    v = _identity(n)

    def row_combine(i, j, p, q, r, s):
        # rows i,j <- (p*ri + q*rj, r*ri + s*rj); p*s - q*r = +-1
        for mm in (a, u):
            ri, rj = mm[i], mm[j]
            mm[i] = [p * x + q * y for x, y in zip(ri, rj)]
            mm[j] = [r * x + s * y for x, y in zip(ri, rj)]

    def col_combine(i, j, p, q, r, s):
        for mm in (a, v):
            for row in mm:
                x, y = row[i], row[j]
                row[i] = p * x + q * y
                row[j] = r * x + s * y

    t = 0
    while t < min(m, n):
        # move a nonzero pivot of smallest magnitude into (t, t)
        candidates = [(abs(a[i][j]), i, j)
                      for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not candidates:
            break
        _, pi, pj = min(candidates)
        if pi != t:
            row_combine(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_combine(t, pj, 0, 1, 1, 0)
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    if a[i][t] % a[t][t] == 0:
                        q = a[i][t] // a[t][t]
                        row_combine(t, i, 1, 0, -q, 1)
                    else:
                        g, x, y = xgcd(a[t][t], a[i][t])
                        p, q = a[t][t] // g, a[i][t] // g
                        row_combine(t, i, x, y, -q, p)
                    dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    if a[t][j] % a[t][t] == 0:
                        q = a[t][j] // a[t][t]
                        col_combine(t, j, 1, 0, -q, 1)
                    else:
                        g, x, y = xgcd(a[t][t], a[t][j])
                        p, q = a[t][t] // g, a[t][j] // g
                        col_combine(t, j, x, y, -q, p)
                    dirty = True
            if dirty:
                continue
            # ensure the pivot divides the remaining block
            stray = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                          if a[i][j] % a[t][t] != 0), None)
            if stray is None:
                break
            row_combine(t, stray[0], 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    check = _mat_mul_int(_mat_mul_int(u, [list(r) for r in mat]), v)
    d = [[a[i][j] for j in range(n)] for i in range(m)]
    assert check == d, "SNF transform certificate failed"
    return (tuple(tuple(r) for r in u),
            tuple(tuple(r) for r in d),
            tuple(tuple(r) for r in v))


def _mat_mul_int(a, b):
    if not a or not b:
        return [list(r) for r in a]
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def smith_invariants(mat) -> list[int]:
    """Diagonal of the Smith normal form with zeros trimmed."""
    rows = [list(r) for r in mat]
    if not rows or not rows[0]:
        return []
    _, d, _ = smith_normal_form(rows)
    out = [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i] != 0]
    return out


def right_kernel(mat, width: int) -> tuple[tuple[int, ...], ...]:
    """Basis rows for {x in Z^width : mat @ x = 0} (a saturated lattice)."""
    rows = [list(r) for r in mat]
    if not rows:
        return tuple(tuple(1 if i == j else 0 for j in range(width))
                     for i in range(width))
    _, d, v = smith_normal_form(rows)
    rank = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i] != 0)
    return tuple(tuple(v[r][j] for r in range(width)) for j in range(rank, width))


# ---------------------------------------------------------------------------
# sublattices

@dataclass(frozen=True)
class Sublattice:
    """Sublattice of Z^ambient_rank spanned by the generator rows.

    Generators are kept verbatim (they round-trip through graph files);
    equality and hashing go through the canonical Hermite form.
    """

    ambient_rank: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in row) for row in self.generators)
        object.__setattr__(self, "generators", gens)
        for row in gens:
            if len(row) != self.ambient_rank:
                raise DimensionMismatch(
                    f"generator of length {len(row)} in ambient rank {self.ambient_rank}")
        object.__setattr__(self, "_hermite", hermite_form(gens, self.ambient_rank))

    @property
    def hermite(self) -> tuple[tuple[int, ...], ...]:
        return self._hermite

    @property
    def rank(self) -> int:
        return len(self._hermite)

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return (self.ambient_rank == other.ambient_rank
                and self._hermite == other._hermite)

    def __hash__(self):
        return hash((self.ambient_rank, self._hermite))

    def contains_vector(self, vec) -> bool:
        if len(vec) != self.ambient_rank:
            raise DimensionMismatch("vector dimension does not match lattice")
        v = list(vec)
        for row in self._hermite:
            pcol = next(c for c, x in enumerate(row) if x != 0)
            if v[pcol] % row[pcol] == 0:
                q = v[pcol] // row[pcol]
                if q:
                    v = [a - q * b for a, b in zip(v, row)]
        return not any(v)

    def contains(self, other: "Sublattice") -> bool:
        if self.ambient_rank != other.ambient_rank:
            raise DimensionMismatch("lattices of different ambient rank")
        return all(self.contains_vector(row) for row in other.generators)


def zero_lattice(ambient_rank: int) -> Sublattice:
    return Sublattice(ambient_rank, ())


def full_lattice(ambient_rank: int) -> Sublattice:
    return Sublattice(ambient_rank, tuple(
        tuple(1 if i == j else 0 for j in range(ambient_rank))
        for i in range(ambient_rank)))


def transport(w, lat: Sublattice) -> Sublattice:
    """Image lattice under a Weyl element (or any integer matrix acting on
    column vectors).  Rank is preserved."""
    matrix = getattr(w, "matrix", w)
    if len(matrix[0]) != lat.ambient_rank:
        raise DimensionMismatch("element and lattice ambient ranks differ")
    gens = tuple(tuple(sum(row[j] * g[j] for j in range(lat.ambient_rank))
                       for row in matrix) for g in lat.generators)
    return Sublattice(lat.ambient_rank, gens)


def lattice_sum(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_rank != b.ambient_rank:
        raise DimensionMismatch("lattices of different ambient rank")
    return Sublattice(a.ambient_rank,
                      hermite_form(a.generators + b.generators, a.ambient_rank))


def lattice_intersection(a: Sublattice, b: Sublattice) -> Sublattice:
    if a.ambient_rank != b.ambient_rank:
        raise DimensionMismatch("lattices of different ambient rank")
    ga, gb = a.hermite, b.hermite
    if not ga or not gb:
        return zero_lattice(a.ambient_rank)
    stacked = [list(r) for r in ga] + [[-x for x in r] for r in gb]
    # left kernel rows (c_a | c_b) with c_a*ga = c_b*gb
    kernel = right_kernel(list(zip(*stacked)), len(stacked))
    gens = []
    for coeffs in kernel:
        vec = [0] * a.ambient_rank
        for c, row in zip(coeffs[:len(ga)], ga):
            for j in range(a.ambient_rank):
                vec[j] += c * row[j]
        gens.append(tuple(vec))
    return Sublattice(a.ambient_rank, hermite_form(gens, a.ambient_rank))


def saturation(lat: Sublattice) -> Sublattice:
    """Largest sublattice with the same rational span: (span_Q L) cap Z^n."""
    orth = right_kernel(lat.hermite, lat.ambient_rank)
    sat = right_kernel(orth, lat.ambient_rank)
    return Sublattice(lat.ambient_rank, sat)


# ---------------------------------------------------------------------------
# finite abelian invariants and local fields

@dataclass(frozen=True)
class FiniteAbelianInvariants:
    """Invariant factors d_1 | d_2 | ... | d_k, each >= 2."""

    factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", factors)
        for d in factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} below 2")
        for a, b in zip(factors, factors[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain broken at {a} | {b}")

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class LocalFieldParams:
    """Residue field order q = p^k and residue characteristic p."""

    q: int
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"residue characteristic {self.p} is not prime")
        q = self.q
        if q < 2:
            raise ValueError(f"residue field order {q} below 2")
        while q % self.p == 0:
            q //= self.p
        if q != 1:
            raise ValueError(f"{self.q} is not a power of {self.p}")


def quotient_invariants(ambient_rank: int, lat: Sublattice):
    """Structure of Z^n / L as (free rank, torsion invariant factors)."""
    if lat.ambient_rank != ambient_rank:
        raise DimensionMismatch("ambient rank does not match the lattice")
    if not lat.generators:
        return ambient_rank, FiniteAbelianInvariants(())
    inv = smith_invariants(lat.generators)
    free = ambient_rank - len(inv)
    torsion = tuple(d for d in inv if d >= 2)
    return free, FiniteAbelianInvariants(torsion)


def h1_order(torsion, field: LocalFieldParams) -> int:
    """Order of H^1(k, .) for the split finite diagonalizable group with the
    given invariant factors: the product of |k*/(k*)^m| = m*gcd(m, q-1).

    Raises WildCaseUnsupported when p divides a factor.
    """
    factors = torsion.factors if isinstance(torsion, FiniteAbelianInvariants) \
        else tuple(int(d) for d in torsion)
    out = 1
    for d in factors:
        if d % field.p == 0:
            raise WildCaseUnsupported(
                f"residue characteristic {field.p} divides the factor {d}")
        out *= d * gcd(d, field.q - 1)
    return out
