"""Dense matrices over a :class:`~msrsearch.galois.FieldSpec`.

Matrices hold canonical integers.  The public functions take and return
:class:`FieldMatrix`; the underscore-prefixed kernels work on plain lists of
int lists and are what the search loop calls directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, FieldMismatch, NotSquare, Singular
from .galois import FieldElement, FieldSpec


@dataclass(frozen=True)
class FieldMatrix:
    """Immutable row-major matrix over ``field``.

    A matrix may have zero rows (an empty basis, e.g. the nullspace of an
    invertible matrix) but always records its column count.
    """

    field: FieldSpec
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        q = self.field.q
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionMismatch("ragged matrix rows")
            for v in row:
                if not 0 <= v < q:
                    raise ValueError(f"entry {v} is not an element of {self.field}")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable[int]], ncols: int | None = None) -> FieldMatrix:
        """Build from integer rows; prime-field entries are reduced mod p, so -1 is fine."""
        conv = tuple(tuple(field.element(int(v)) for v in row) for row in rows)
        if ncols is None:
            if not conv:
                raise DimensionMismatch("ncols is required for a matrix with no rows")
            ncols = len(conv[0])
        return cls(field, conv, ncols)

    @classmethod
    def _trusted(cls, field: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> FieldMatrix:
        # skips entry validation; for kernel output only
        m = object.__new__(cls)
        object.__setattr__(m, "field", field)
        object.__setattr__(m, "rows", tuple(tuple(r) for r in rows))
        object.__setattr__(m, "ncols", ncols)
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> FieldMatrix:
        return cls._trusted(field, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> FieldMatrix:
        return cls._trusted(field, [[0] * ncols for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, idx: tuple[int, int]) -> FieldElement:
        i, j = idx
        return FieldElement(self.field, self.rows[i][j])

    def row(self, i: int) -> FieldMatrix:
        return FieldMatrix._trusted(self.field, [self.rows[i]], self.ncols)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> FieldMatrix:
        return FieldMatrix._trusted(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [], len(self.rows))

    def __matmul__(self, other: FieldMatrix) -> FieldMatrix:
        return matmul(self, other)

    def __add__(self, other: FieldMatrix) -> FieldMatrix:
        _same_field(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.field.add_table
        return FieldMatrix._trusted(
            self.field, [[add[a][b] for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols
        )

    def scale(self, c: int) -> FieldMatrix:
        m = self.field.mul_table[self.field.element(c)]
        return FieldMatrix._trusted(self.field, [[m[v] for v in r] for r in self.rows], self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(v) for v in r) for r in self.rows)


def _same_field(*mats: FieldMatrix) -> FieldSpec:
    f = mats[0].field
    for m in mats[1:]:
        if m.field != f:
            raise FieldMismatch(f"{f} vs {m.field}")
    return f


def vstack(mats: Sequence[FieldMatrix]) -> FieldMatrix:
    f = _same_field(*mats)
    ncols = mats[0].ncols
    if any(m.ncols != ncols for m in mats):
        raise DimensionMismatch("vstack of matrices with different column counts")
    return FieldMatrix._trusted(f, [r for m in mats for r in m.rows], ncols)


# ---------------------------------------------------------------------------
# list kernels


def _matmul(f: FieldSpec, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], bcols: int) -> list[list[int]]:
    mul, add = f.mul_table, f.add_table
    out = []
    for row in a:
        acc = [0] * bcols
        for x, brow in zip(row, b):
            if x:
                mx = mul[x]
                acc = [add[s][mx[y]] for s, y in zip(acc, brow)]
        out.append(acc)
    return out


def _rref_inplace(f: FieldSpec, m: list[list[int]], ncols: int, pivot_limit: int | None = None) -> list[int]:
    """Reduce ``m`` to RREF in place; returns pivot columns.

    Pivots are only searched in columns ``< pivot_limit`` (used to solve
    augmented systems); the remaining columns are carried along.
    """
    mul, add, neg, inv = f.mul_table, f.add_table, f.neg_table, f.inv_table
    nrows = len(m)
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == nrows:
            break
        piv = r
        while piv < nrows and not m[piv][c]:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        lead = prow[c]
        if lead != 1:
            s = mul[inv[lead]]
            prow = [s[v] for v in prow]
            m[r] = prow
        for i in range(nrows):
            if i != r:
                x = m[i][c]
                if x:
                    fac = mul[neg[x]]
                    m[i] = [add[u][fac[v]] for u, v in zip(m[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def _rank(f: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> int:
    """Row-echelon rank without back substitution."""
    mul, add, neg, inv = f.mul_table, f.add_table, f.neg_table, f.inv_table
    m = [list(r) for r in rows]
    nrows = len(m)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = r
        while piv < nrows and not m[piv][c]:
            piv += 1
        if piv == nrows:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        s = inv[prow[c]]
        for i in range(r + 1, nrows):
            x = m[i][c]
            if x:
                fac = mul[neg[mul[x][s]]]
                m[i] = [add[u][fac[v]] for u, v in zip(m[i], prow)]
        r += 1
    return r


def _det(f: FieldSpec, rows: Sequence[Sequence[int]]) -> int:
    mul, add, neg, inv = f.mul_table, f.add_table, f.neg_table, f.inv_table
    m = [list(r) for r in rows]
    n = len(m)
    det = 1
    for c in range(n):
        piv = c
        while piv < n and not m[piv][c]:
            piv += 1
        if piv == n:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = neg[det]
        prow = m[c]
        lead = prow[c]
        det = mul[det][lead]
        s = inv[lead]
        for i in range(c + 1, n):
            x = m[i][c]
            if x:
                fac = mul[neg[mul[x][s]]]
                m[i] = [add[u][fac[v]] for u, v in zip(m[i], prow)]
    return det


def _nullspace(f: FieldSpec, rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    m = [list(r) for r in rows]
    pivots = _rref_inplace(f, m, ncols)
    neg = f.neg_table
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = neg[m[i][free]]
        basis.append(v)
    return basis


def _in_rowspan(f: FieldSpec, gens: Sequence[Sequence[int]], targets: Sequence[Sequence[int]], ncols: int) -> bool:
    return _rank(f, list(gens) + list(targets), ncols) == _rank(f, gens, ncols)


# ---------------------------------------------------------------------------
# public operations


def matmul(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    f = _same_field(a, b)
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return FieldMatrix._trusted(f, _matmul(f, a.rows, b.rows, b.ncols), b.ncols)


def mat_pow(a: FieldMatrix, e: int) -> FieldMatrix:
    if a.nrows != a.ncols:
        raise NotSquare(f"power of non-square {a.shape} matrix")
    if e < 0:
        a, e = invert(a), -e
    result = FieldMatrix.identity(a.field, a.nrows)
    base = a
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def det(a: FieldMatrix) -> FieldElement:
    if a.nrows != a.ncols:
        raise NotSquare(f"determinant of non-square {a.shape} matrix")
    return FieldElement(a.field, _det(a.field, a.rows))


def rank(a: FieldMatrix) -> int:
    return _rank(a.field, a.rows, a.ncols)


def rref(a: FieldMatrix) -> tuple[FieldMatrix, list[int]]:
    """Reduced row echelon form (zero rows kept at the bottom) and pivot columns."""
    m = [list(r) for r in a.rows]
    pivots = _rref_inplace(a.field, m, a.ncols)
    return FieldMatrix._trusted(a.field, m, a.ncols), pivots


def row_basis(a: FieldMatrix) -> FieldMatrix:
    """The nonzero rows of rref(a): the canonical basis of the row space."""
    m = [list(r) for r in a.rows]
    pivots = _rref_inplace(a.field, m, a.ncols)
    return FieldMatrix._trusted(a.field, m[: len(pivots)], a.ncols)


def invert(a: FieldMatrix) -> FieldMatrix:
    f = a.field
    n = a.nrows
    if n != a.ncols:
        raise NotSquare(f"inverse of non-square {a.shape} matrix")
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(a.rows)]
    pivots = _rref_inplace(f, aug, 2 * n, pivot_limit=n)
    if len(pivots) < n:
        raise Singular("matrix is singular")
    return FieldMatrix._trusted(f, [r[n:] for r in aug], n)


def nullspace(a: FieldMatrix) -> FieldMatrix:
    """Basis (as rows) of the right nullspace ``{v : a v^T = 0}``."""
    return FieldMatrix._trusted(a.field, _nullspace(a.field, a.rows, a.ncols), a.ncols)


def left_nullspace(a: FieldMatrix) -> FieldMatrix:
    """Basis (as rows) of ``{v : v a = 0}``."""
    return nullspace(a.T)


def solve_left(target: FieldMatrix, generators: FieldMatrix) -> FieldMatrix | None:
    """Some C with ``C @ generators == target``, or None if no such C exists.

    Each target row is solved independently with free coordinates set to zero,
    so the answer is deterministic.
    """
    f = _same_field(target, generators)
    if target.ncols != generators.ncols:
        raise DimensionMismatch(f"target has {target.ncols} columns, generators {generators.ncols}")
    g = generators.nrows
    t = target.nrows
    # generators^T x = target_row^T for every target row at once
    aug = [[generators.rows[i][c] for i in range(g)] + [target.rows[j][c] for j in range(t)]
           for c in range(generators.ncols)]
    pivots = _rref_inplace(f, aug, g + t, pivot_limit=g)
    for r in aug[len(pivots):]:
        if any(r[g:]):
            return None
    sol = [[0] * g for _ in range(t)]
    for i, pc in enumerate(pivots):
        row = aug[i]
        for j in range(t):
            sol[j][pc] = row[g + j]
    return FieldMatrix._trusted(f, sol, g)


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _free_positions(pivots: Sequence[int], cols: int) -> list[tuple[int, int]]:
    pivot_set = set(pivots)
    return [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, cols) if c not in pivot_set]


def _rref_blocks(rows: int, cols: int):
    for pivots in combinations(range(cols), rows):
        yield pivots, _free_positions(pivots, cols)


def _fill(pivots, free, values, rows, cols) -> list[list[int]]:
    m = [[0] * cols for _ in range(rows)]
    for i, pc in enumerate(pivots):
        m[i][pc] = 1
    for (i, c), v in zip(free, values):
        m[i][c] = v
    return m


def _iter_rref_lists(q: int, rows: int, cols: int, start: int = 0, stop: int | None = None) -> Iterator[list[list[int]]]:
    """Full-row-rank RREF matrices as int lists, in the documented total order.

    Pivot-column sets are visited in lexicographic order; within a pivot set
    the free entries (row-major) run as an odometer with the last entry
    fastest.  ``start``/``stop`` select a slice of that order.
    """
    if rows == 0:
        if start == 0 and (stop is None or stop > 0):
            yield []
        return
    pos = 0
    for pivots, free in _rref_blocks(rows, cols):
        size = q ** len(free)
        if stop is not None and pos >= stop:
            return
        if pos + size <= start:
            pos += size
            continue
        lo = max(start - pos, 0)
        hi = size if stop is None else min(stop - pos, size)
        for values in islice(product(range(q), repeat=len(free)), lo, hi):
            yield _fill(pivots, free, values, rows, cols)
        pos += size


def enumerate_rref(field: FieldSpec, rows: int, cols: int, start: int = 0, stop: int | None = None) -> Iterator[FieldMatrix]:
    """Every full-row-rank RREF matrix of shape ``rows x cols``, exactly once.

    There are ``gaussian_binomial(cols, rows, q)`` of them.  ``start``/``stop``
    restrict the stream to an index range, for sharding.
    """
    if rows > cols:
        raise DimensionMismatch(f"no full-row-rank {rows}x{cols} matrices")
    for m in _iter_rref_lists(field.q, rows, cols, start, stop):
        yield FieldMatrix._trusted(field, m, cols)


def rref_at(field: FieldSpec, rows: int, cols: int, index: int) -> FieldMatrix:
    """The ``index``-th matrix of :func:`enumerate_rref`, without iterating."""
    q = field.q
    total = gaussian_binomial(cols, rows, q)
    if not 0 <= index < total:
        raise IndexError(f"index {index} outside [0, {total})")
    pos = 0
    for pivots, free in _rref_blocks(rows, cols):
        size = q ** len(free)
        if index < pos + size:
            off = index - pos
            values = []
            for _ in free:
                values.append(off % q)
                off //= q
            return FieldMatrix._trusted(field, _fill(pivots, free, reversed(values), rows, cols), cols)
        pos += size
    raise AssertionError("unreachable")  # pragma: no cover


def projective_points(basis: FieldMatrix) -> list[FieldMatrix]:
    """One representative (1-row matrix) per 1-dimensional subspace of rowspan(basis).

    Representatives are the combinations whose first nonzero coefficient is 1.
    """
    f = basis.field
    d = basis.nrows
    out = []
    for coeffs in _iter_rref_lists(f.q, 1, d):
        out.append(FieldMatrix._trusted(f, _matmul(f, coeffs, basis.rows, basis.ncols), basis.ncols))
    return out
