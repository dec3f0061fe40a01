"""Root data on an ambient character lattice.

A :class:`RootDatum` fixes the lattice X(A) = Z^n together with simple roots
(vectors) and simple coroots (covectors, paired by the dot product).  The
Weyl group is realized as integer matrices acting on Z^n; elements carry one
reduced word but compare by matrix.  Everything is exact: integers for the
group, :class:`fractions.Fraction` for rho and for coefficient extraction.

>>> datum = build_root_datum("A2")
>>> len(datum.positive_roots)
3
>>> [w.length for w in enumerate_weyl(datum)]
[0, 1, 1, 2, 2, 3]
>>> rho(datum)
(Fraction(1, 1), Fraction(1, 1))
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, GroupTooLarge, NonFiniteType, RankMismatch

DEFAULT_GROUP_CAP = 10**6

_TYPE_TOKEN = re.compile(r"^([A-G])(\d+)$")


# ---------------------------------------------------------------------------
# small exact linear algebra helpers (tuples of ints / Fractions)

def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _mat_vec(m, v):
    return tuple(_dot(row, v) for row in m)


def _mat_mul(a, b):
    cols = tuple(zip(*b))
    return tuple(tuple(_dot(row, col) for col in cols) for row in a)


def _identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _solve_fraction_system(rows, rhs):
    """Solve rows^T-free square/overdetermined system sum_j x_j*rows[j] = rhs.

    Returns the coefficient tuple or None when rhs is outside the span.  The
    rows need not be independent; any exact solution is returned.
    """
    if not rows:
        return () if not any(rhs) else None
    width = len(rows[0])
    aug = [[Fraction(rows[j][c]) for j in range(len(rows))] + [Fraction(rhs[c])]
           for c in range(width)]
    ncols = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return tuple(sol)


# ---------------------------------------------------------------------------
# Cartan matrices of finite type

def _chain(rank):
    m = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        m[i][i] = 2
        if i + 1 < rank:
            m[i][i + 1] = -1
            m[i + 1][i] = -1
    return m


def cartan_matrix(letter: str, rank: int) -> list[list[int]]:
    """Standard Cartan matrix for one simple type, Bourbaki-style numbering."""
    if letter == "A" and rank >= 1:
        return _chain(rank)
    if letter == "B" and rank >= 2:
        m = _chain(rank)
        m[rank - 2][rank - 1] = -2
        return m
    if letter == "C" and rank >= 2:
        m = _chain(rank)
        m[rank - 1][rank - 2] = -2
        return m
    if letter == "D" and rank >= 3:
        m = _chain(rank - 1)
        for row in m:
            row.append(0)
        m.append([0] * rank)
        m[rank - 1][rank - 1] = 2
        m[rank - 2][rank - 1] = 0
        m[rank - 1][rank - 2] = 0
        m[rank - 3][rank - 1] = -1
        m[rank - 1][rank - 3] = -1
        return m
    if letter == "E" and rank in (6, 7, 8):
        # chain 1-3-4-5-6(-7-8) with node 2 hanging off node 4 (1-based)
        m = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
        chain = [0, 2, 3, 4, 5, 6, 7][: rank - 1]
        for a, b in zip(chain, chain[1:]):
            m[a][b] = m[b][a] = -1
        m[1][3] = m[3][1] = -1
        return m
    if letter == "F" and rank == 4:
        m = _chain(4)
        m[1][2] = -2
        return m
    if letter == "G" and rank == 2:
        return [[2, -1], [-3, 2]]
    raise ValueError(f"unknown Cartan type {letter}{rank}")


def named_cartan(name: str) -> list[list[int]]:
    """Cartan matrix for a type name, products joined by 'x' ("A2xA1")."""
    blocks = []
    for token in name.split("x"):
        m = _TYPE_TOKEN.match(token.strip())
        if not m:
            raise ValueError(f"cannot parse Cartan type token {token!r}")
        blocks.append(cartan_matrix(m.group(1), int(m.group(2))))
    total = sum(len(b) for b in blocks)
    out = [[0] * total for _ in range(total)]
    offset = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[offset + i][offset:offset + len(b)] = row
        offset += len(b)
    return out


def _check_cartan(c) -> None:
    n = len(c)
    for i in range(n):
        if len(c[i]) != n:
            raise NonFiniteType("pairing matrix is not square")
        for j in range(n):
            v = c[i][j]
            if not isinstance(v, int):
                raise NonFiniteType("pairing matrix must be integral")
            if i == j and v != 2:
                raise NonFiniteType("pairing matrix diagonal must be 2")
            if i != j and v > 0:
                raise NonFiniteType("pairing matrix off-diagonal must be <= 0")
            if i != j and (v == 0) != (c[j][i] == 0):
                raise NonFiniteType("pairing matrix zero pattern not symmetric")
    # symmetrizer by graph traversal, one scale per connected component
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i == j or c[i][j] == 0:
                    continue
                want = d[i] * c[i][j] / c[j][i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    raise NonFiniteType("pairing matrix is not symmetrizable")
    sym = [[d[i] * c[i][j] for j in range(n)] for i in range(n)]
    # positive definiteness via leading principal minors
    work = [row[:] for row in sym]
    for k in range(n):
        if work[k][k] <= 0:
            raise NonFiniteType("symmetrized pairing matrix is not positive definite")
        for i in range(k + 1, n):
            f = work[i][k] / work[k][k]
            for j in range(k, n):
                work[i][j] -= f * work[k][j]


# ---------------------------------------------------------------------------
# root datum

@dataclass(frozen=True)
class RootDatum:
    """Simple roots/coroots on the ambient lattice Z^ambient_rank.

    The pairing matrix <alpha_j, coroot_i> must be a finite-type Cartan
    matrix; the ambient rank may exceed the number of simple roots (central
    torus directions).
    """

    ambient_rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.ambient_rank
        roots = tuple(tuple(int(x) for x in r) for r in self.simple_roots)
        coroots = tuple(tuple(int(x) for x in r) for r in self.simple_coroots)
        object.__setattr__(self, "simple_roots", roots)
        object.__setattr__(self, "simple_coroots", coroots)
        if len(roots) != len(coroots):
            raise RankMismatch("roots and coroots must come in equal numbers")
        if len(roots) > n:
            raise RankMismatch("more simple roots than the ambient rank")
        if any(len(v) != n for v in roots + coroots):
            raise RankMismatch("root or coroot of wrong ambient dimension")
        pairing = tuple(tuple(_dot(cr, rt) for rt in roots) for cr in coroots)
        object.__setattr__(self, "_pairing", pairing)
        _check_cartan([list(r) for r in pairing])
        if roots and _rational_rank(coroots) != len(coroots):
            raise RankMismatch("simple coroots are linearly dependent")
        if roots and _rational_rank(roots) != len(roots):
            raise RankMismatch("simple roots are linearly dependent")
        object.__setattr__(self, "_cache", {})

    # -- basic structure ---------------------------------------------------

    @property
    def num_simple(self) -> int:
        return len(self.simple_roots)

    @property
    def pairing(self) -> tuple[tuple[int, ...], ...]:
        """Matrix with entry [i][j] = <alpha_j, coroot_i>."""
        return self._pairing

    def pair(self, v, i: int):
        """Pairing <v, coroot_i> of an ambient vector with a simple coroot."""
        return _dot(self.simple_coroots[i], v)

    def simple_reflection_matrix(self, i: int) -> tuple[tuple[int, ...], ...]:
        key = ("refl", i)
        if key not in self._cache:
            alpha = self.simple_roots[i]
            cor = self.simple_coroots[i]
            n = self.ambient_rank
            m = tuple(tuple((1 if r == c else 0) - alpha[r] * cor[c]
                            for c in range(n)) for r in range(n))
            self._cache[key] = m
        return self._cache[key]

    # -- derived data --------------------------------------------------------

    def root_coefficients(self, v) -> tuple[Fraction, ...]:
        """Coefficients of v in the simple-root basis (v must lie in the span)."""
        pair_vec = tuple(self.pair(v, i) for i in range(self.num_simple))
        # solve pairing @ m = pair_vec; the solver combines rows, so transpose
        sol = _solve_fraction_system(tuple(zip(*self.pairing)), pair_vec)
        # pairing is invertible in finite type, so sol is never None
        return sol

    def is_positive_root(self, v) -> bool:
        coeffs = self.root_coefficients(v)
        return any(c != 0 for c in coeffs) and all(c >= 0 for c in coeffs)

    @property
    def root_coroot_pairs(self) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
        """All roots with their coroots, closed under simple reflections."""
        if "pairs" not in self._cache:
            pairs = {r: c for r, c in zip(self.simple_roots, self.simple_coroots)}
            frontier = list(pairs)
            while frontier:
                nxt = []
                for root in frontier:
                    cor = pairs[root]
                    for i in range(self.num_simple):
                        r2 = tuple(a - self.pair(root, i) * b
                                   for a, b in zip(root, self.simple_roots[i]))
                        if r2 not in pairs:
                            c2 = tuple(a - _dot(cor, self.simple_roots[i]) * b
                                       for a, b in zip(cor, self.simple_coroots[i]))
                            pairs[r2] = c2
                            nxt.append(r2)
                frontier = nxt
            self._cache["pairs"] = tuple(sorted(pairs.items()))
        return self._cache["pairs"]

    @property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        if "pos" not in self._cache:
            self._cache["pos"] = tuple(
                r for r, _ in self.root_coroot_pairs if self.is_positive_root(r))
        return self._cache["pos"]

    @property
    def positive_root_coroot_pairs(self):
        return tuple((r, c) for r, c in self.root_coroot_pairs
                     if self.is_positive_root(r))

    @property
    def rho(self) -> tuple[Fraction, ...]:
        """The vector in the span of the simple roots with <rho, coroot_i> = 1."""
        if "rho" not in self._cache:
            ones = tuple(Fraction(1) for _ in range(self.num_simple))
            coeffs = _solve_fraction_system(tuple(zip(*self.pairing)), ones)
            if coeffs is None:
                coeffs = ()
            vec = [Fraction(0)] * self.ambient_rank
            for c, alpha in zip(coeffs or (), self.simple_roots):
                for k in range(self.ambient_rank):
                    vec[k] += c * alpha[k]
            self._cache["rho"] = tuple(vec)
        return self._cache["rho"]


def _rational_rank(rows) -> int:
    work = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for c in range(cols):
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


def build_root_datum(spec, ambient_rank: int | None = None) -> RootDatum:
    """Root datum from a type name ("A2", "A2xA1") or an explicit Cartan matrix.

    Uses the canonical realization: simple roots are the first basis vectors
    of Z^n, simple coroots are the Cartan-matrix rows (padded by zeros when
    the ambient rank exceeds the semisimple rank).
    """
    if isinstance(spec, str):
        cartan = named_cartan(spec)
    else:
        cartan = [list(int(x) for x in row) for row in spec]
    rank = len(cartan)
    n = rank if ambient_rank is None else int(ambient_rank)
    if n < rank:
        raise RankMismatch(f"ambient rank {n} below the number of simple roots {rank}")
    roots = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(rank))
    coroots = tuple(tuple(cartan[i][j] if j < rank else 0 for j in range(n))
                    for i in range(rank))
    return RootDatum(n, roots, coroots)


# ---------------------------------------------------------------------------
# Weyl elements and the enumerated group

def word_str(word) -> str:
    return "e" if not word else ",".join(f"s{i + 1}" for i in word)


def parse_word(text: str) -> tuple[int, ...]:
    """Inverse of :func:`word_str`: "s1,s2" -> (0, 1)."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    out = []
    for token in text.split(","):
        token = token.strip()
        if not token.startswith("s") or not token[1:].isdigit() or int(token[1:]) < 1:
            raise ValueError(f"bad reflection token {token!r}")
        out.append(int(token[1:]) - 1)
    return tuple(out)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: integer matrix plus one stored reduced word.

    Equality and hashing use the matrix only; words are non-canonical.
    """

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[int, ...] = field(compare=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def __repr__(self):
        return f"WeylElement({word_str(self.word)})"


def apply(w: WeylElement, v):
    """Matrix action of a Weyl element on an ambient (rational) vector."""
    matrix = w.matrix if isinstance(w, WeylElement) else w
    if len(v) != len(matrix[0]):
        raise DimensionMismatch(
            f"vector of dimension {len(v)} under rank-{len(matrix[0])} element")
    return _mat_vec(matrix, v)


class WeylGroup:
    """Full enumeration of the Weyl group of a datum, with product lookup.

    Elements are discovered breadth first from the identity, so each carries
    a reduced word; the public order is by (length, word).
    """

    def __init__(self, datum: RootDatum, cap: int = DEFAULT_GROUP_CAP):
        self.datum = datum
        self.cap = cap
        n = datum.ambient_rank
        ident = WeylElement(_identity(n), ())
        by_matrix = {ident.matrix: ident}
        refl = [datum.simple_reflection_matrix(i) for i in range(datum.num_simple)]
        frontier = [ident]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(datum.num_simple):
                    m2 = _mat_mul(w.matrix, refl[i])
                    if m2 not in by_matrix:
                        if len(by_matrix) >= cap:
                            raise GroupTooLarge(
                                f"Weyl group exceeds the cap of {cap} elements")
                        elem = WeylElement(m2, w.word + (i,))
                        by_matrix[m2] = elem
                        nxt.append(elem)
            frontier = nxt
        self._by_matrix = by_matrix
        self.elements = tuple(sorted(by_matrix.values(),
                                     key=lambda w: (w.length, w.word)))
        self.identity = ident

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def simple(self, i: int) -> WeylElement:
        return self._by_matrix[self.datum.simple_reflection_matrix(i)]

    def lookup(self, matrix) -> WeylElement:
        return self._by_matrix[tuple(tuple(row) for row in matrix)]

    def multiply(self, a: WeylElement, b: WeylElement) -> WeylElement:
        return self._by_matrix[_mat_mul(a.matrix, b.matrix)]

    def inverse(self, a: WeylElement) -> WeylElement:
        m = _identity(self.datum.ambient_rank)
        for i in reversed(a.word):
            m = _mat_mul(m, self.datum.simple_reflection_matrix(i))
        return self._by_matrix[m]

    def from_word(self, word) -> WeylElement:
        m = _identity(self.datum.ambient_rank)
        for i in word:
            m = _mat_mul(m, self.datum.simple_reflection_matrix(i))
        return self._by_matrix[m]

    def longest(self) -> WeylElement:
        return self.elements[-1]

    def subgroup(self, generators) -> tuple[WeylElement, ...]:
        """Closure of a generator list, sorted by (length, word)."""
        seen = {self.identity.matrix: self.identity}
        frontier = [self.identity]
        gens = list(generators)
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    p = self.multiply(w, g)
                    if p.matrix not in seen:
                        seen[p.matrix] = p
                        nxt.append(p)
            frontier = nxt
        return tuple(sorted(seen.values(), key=lambda w: (w.length, w.word)))

    def reduced_words(self, w: WeylElement):
        """Yield every reduced word of w (tuples of indices)."""
        if w.length == 0:
            yield ()
            return
        for i in range(self.datum.num_simple):
            shorter = self.multiply(self.simple(i), w)
            if shorter.length < w.length:
                for rest in self.reduced_words(shorter):
                    yield (i,) + rest


def enumerate_weyl(datum: RootDatum, cap: int = DEFAULT_GROUP_CAP):
    """All Weyl elements, deterministically ordered by (length, word)."""
    return list(WeylGroup(datum, cap).elements)


def min_coset_reps(datum_or_group, subset, side: str = "left",
                   cap: int = DEFAULT_GROUP_CAP):
    """Minimal-length representatives of W/W_P ("left") or W_P\\W ("right").

    Left representatives are the w with w(alpha) > 0 for every alpha in the
    subset; right representatives are characterized via w^-1.
    """
    group = (datum_or_group if isinstance(datum_or_group, WeylGroup)
             else WeylGroup(datum_or_group, cap))
    datum = group.datum
    subset = sorted(set(subset))
    for j in subset:
        if not 0 <= j < datum.num_simple:
            raise ValueError(f"subset index {j} out of range")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    reps = []
    for w in group.elements:
        probe = w if side == "left" else group.inverse(w)
        if all(datum.is_positive_root(apply(probe, datum.simple_roots[j]))
               for j in subset):
            reps.append(w)
    order_p = len(group.subgroup([group.simple(j) for j in subset]))
    assert len(reps) * order_p == len(group)
    return reps


def rho(datum: RootDatum) -> tuple[Fraction, ...]:
    """Half-sum-of-positive-roots vector, fixed inside the simple-root span."""
    return datum.rho
