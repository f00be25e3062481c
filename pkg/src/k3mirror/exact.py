"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`, so there
is no overflow and no rounding. Matrices are small (rank <= 22 for the K3
lattice), so straightforward elimination is fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

Rational = Fraction
IntVector = tuple  # tuple[int, ...]
RatVector = tuple  # tuple[Fraction, ...]


class IntMatrix:
    """Immutable integer matrix stored row-major.

    ``ncols`` is kept explicitly so that matrices with zero rows still know
    their width (a rank-0 kernel basis of a 22-column problem, say).
    """

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence[int]] = (), ncols: int | None = None):
        data = tuple(tuple(int(a) for a in row) for row in rows)
        if ncols is None:
            ncols = len(data[0]) if data else 0
        for row in data:
            if len(row) != ncols:
                raise ValueError(f"ragged matrix: expected {ncols} columns, got {len(row)}")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(([0] * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls(([entries[i] if i == j else 0 for j in range(n)] for i in range(n)), ncols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self._rows), ncols=self.nrows) if self.nrows else IntMatrix.zeros(self.ncols, 0)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._rows)

    def __len__(self) -> int:
        return self.nrows

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self._rows]!r}, ncols={self.ncols})"

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-a for a in row] for row in self._rows), ncols=self.ncols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._rows)) if other.nrows else [()] * other.ncols
        return IntMatrix(
            ([sum(a * b for a, b in zip(row, col)) for col in cols] for row in self._rows),
            ncols=other.ncols,
        )

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column mismatch in vstack")
        return IntMatrix(self._rows + other._rows, ncols=self.ncols)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    def det(self) -> int:
        return determinant(self)


def as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def vector_gcd(v: Iterable[int]) -> int:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g


def determinant(m: IntMatrix) -> int:
    """Fraction-free Bareiss elimination."""
    m = as_matrix(m)
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def _row_combine(rows, i, j, a, b, c, d):
    """rows[i], rows[j] <- a*rows[i] + b*rows[j], c*rows[i] + d*rows[j]."""
    ri, rj = rows[i], rows[j]
    rows[i] = [a * x + b * y for x, y in zip(ri, rj)]
    rows[j] = [c * x + d * y for x, y in zip(ri, rj)]


def hermite_normal_form(m) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF: return ``(hnf, transform)`` with ``hnf == transform @ m``.

    Pivots are positive, entries above each pivot lie in ``[0, pivot)``, and
    zero rows sit at the bottom. ``transform`` is unimodular.
    """
    m = as_matrix(m)
    nr, nc = m.shape
    a = m.tolist()
    u = IntMatrix.identity(nr).tolist()
    r = 0
    for col in range(nc):
        if r == nr:
            break
        # fold every entry below row r into row r with extended-gcd steps
        for i in range(r + 1, nr):
            if a[i][col] == 0:
                continue
            p, q = a[r][col], a[i][col]
            g, x, y = xgcd(p, q)
            pg, qg = p // g, q // g
            _row_combine(a, r, i, x, y, -qg, pg)
            _row_combine(u, r, i, x, y, -qg, pg)
        if a[r][col] == 0:
            continue
        if a[r][col] < 0:
            a[r] = [-v for v in a[r]]
            u[r] = [-v for v in u[r]]
        piv = a[r][col]
        for i in range(r):
            q = a[i][col] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return IntMatrix(a, ncols=nc), IntMatrix(u, ncols=nr)


def hnf_rows(m) -> IntMatrix:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    h, _ = hermite_normal_form(m)
    return IntMatrix([row for row in h if any(row)], ncols=h.ncols)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(m) -> tuple[list[int], IntMatrix, IntMatrix]:
    """Return ``(divisors, left, right)`` with ``left @ m @ right`` diagonal.

    The diagonal holds ``divisors`` (length ``min(rows, cols)``), nonnegative,
    each dividing the next, zeros trailing.
    """
    m = as_matrix(m)
    nr, nc = m.shape
    a = m.tolist()
    left = IntMatrix.identity(nr).tolist()
    right = IntMatrix.identity(nc).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + k * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    for t in range(min(nr, nc)):
        while True:
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
            if not nonzero:
                break
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                q = a[i][t] // piv
                if q:
                    add_row(i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, nc):
                q = a[t][j] // piv
                if q:
                    add_col(j, t, -q)
                if a[t][j]:
                    clean = False
            if not clean:
                continue
            # pivot must divide the whole remaining block
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    divisors = [a[i][i] for i in range(min(nr, nc))]
    return divisors, IntMatrix(left, ncols=nr), IntMatrix(right, ncols=nc)


def invariant_factors(m) -> list[int]:
    return smith_normal_form(m)[0]


# ---------------------------------------------------------------------------
# Kernels, rank and rational solving
# ---------------------------------------------------------------------------

def integer_kernel(m) -> IntMatrix:
    """Saturated Z-basis (HNF rows) of the left kernel ``{v : v @ m == 0}``."""
    m = as_matrix(m)
    h, u = hermite_normal_form(m)
    rows = [u[i] for i in range(h.nrows) if not any(h[i])]
    if not rows:
        return IntMatrix.zeros(0, m.nrows)
    return hnf_rows(IntMatrix(rows, ncols=m.nrows))


def rank(m) -> int:
    return len(hnf_rows(m))


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of ``v`` with integer entries."""
    den = 1
    for q in v:
        den = den * Fraction(q).denominator // gcd(den, Fraction(q).denominator)
    return tuple(int(Fraction(q) * den) for q in v)


def solve_rational(basis: Sequence[Sequence], target: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients ``c`` with ``sum c[i]*basis[i] == target``, or ``None``.

    ``basis`` rows must be linearly independent.
    """
    k = len(basis)
    n = len(target)
    # columns are basis vectors; augmented system of n equations in k unknowns
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for col in range(k):
        p = next((i for i in range(r, n) if a[i][col] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(col)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    if len(piv_cols) != k:
        raise ValueError("basis rows are linearly dependent")
    coeffs = [Fraction(0)] * k
    for i, col in enumerate(piv_cols):
        coeffs[col] = a[i][k]
    return tuple(coeffs)


def solve_integer(basis: Sequence[Sequence[int]], target: Sequence) -> tuple[int, ...] | None:
    """Integer coefficients expressing ``target`` in ``basis``, if they exist."""
    c = solve_rational(basis, target)
    if c is None or any(q.denominator != 1 for q in c):
        return None
    return tuple(int(q) for q in c)


def rational_rank(vectors: Sequence[Sequence]) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    if not rows:
        return 0
    n = len(rows[0])
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col] / rows[r][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


# ---------------------------------------------------------------------------
# Quadratic forms
# ---------------------------------------------------------------------------

def rational_congruent_diagonalization(g) -> list[Fraction]:
    """Diagonal entries of ``Q^T g Q`` for some invertible rational ``Q``.

    Symmetric elimination. When every remaining diagonal entry vanishes but
    an off-diagonal one does not, basis vector ``e_i`` is replaced by
    ``e_i + e_j`` which has norm ``2 g_ij != 0``.
    """
    g = as_matrix(g)
    if not g.is_symmetric():
        raise ValueError("form is not symmetric")
    n = g.nrows
    a = [[Fraction(x) for x in row] for row in g]
    out: list[Fraction] = []
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is not None:
                    # e_k <- e_k + e_j
                    a[k] = [x + y for x, y in zip(a[k], a[j])]
                    for row in a:
                        row[k] += row[j]
        piv = a[k][k]
        out.append(piv)
        if piv == 0:
            continue
        for i in range(k + 1, n):
            f = a[i][k] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
                for row in a:
                    row[i] -= f * row[k]
    return out


def sparse_rows(g: IntMatrix) -> tuple:
    """Nonzero entries of each row as ``((j, g_ij), ...)``."""
    return tuple(tuple((j, a) for j, a in enumerate(row) if a) for row in g)


def _common_denominator(v: Sequence) -> tuple[list[int], int]:
    den = 1
    for a in v:
        if isinstance(a, Fraction) and a.denominator != 1:
            den = den * a.denominator // gcd(den, a.denominator)
    if den == 1:
        return [int(a) for a in v], 1
    return [a.numerator * (den // a.denominator) for a in map(Fraction, v)], den


def bilinear(u: Sequence, g, v: Sequence):
    """``u g v^T`` for int or Fraction vectors.

    ``g`` may be an :class:`IntMatrix` or the output of :func:`sparse_rows`.
    Rational inputs are scaled to integers first, so the inner loops stay in
    machine-friendly int arithmetic.
    """
    rows = g if isinstance(g, tuple) else sparse_rows(g)
    un, ud = _common_denominator(u)
    vn, vd = _common_denominator(v)
    total = 0
    for i, ui in enumerate(un):
        if ui:
            total += ui * sum(gij * vn[j] for j, gij in rows[i])
    if ud == 1 and vd == 1:
        return total
    return Fraction(total, ud * vd)


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vec_comb(*terms) -> tuple:
    """Linear combination from ``(coefficient, vector)`` pairs."""
    n = len(terms[0][1])
    out = [0] * n
    for c, v in terms:
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] += c * a
    return tuple(out)


def to_fractions(v: Iterable) -> tuple[Fraction, ...]:
    out = []
    for a in v:
        if isinstance(a, float):
            raise TypeError(f"float {a!r} in exact computation")
        out.append(Fraction(a))
    return tuple(out)


def is_integral(v: Iterable) -> bool:
    return all(Fraction(a).denominator == 1 for a in v)


def row_to_coords(coeffs: Sequence, basis: IntMatrix) -> tuple:
    """``coeffs @ basis``: coordinates of a combination of basis rows."""
    return tuple(sum(c * basis[i][j] for i, c in enumerate(coeffs) if c) for j in range(basis.ncols))


def inverse_unimodular(m) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +-1."""
    m = as_matrix(m)
    n = m.nrows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        p = next((i for i in range(col, n) if a[i][col] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[col], a[p] = a[p], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = [row[n:] for row in a]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return IntMatrix(([int(x) for x in row] for row in out), ncols=n)
