"""Regenerating-code data model, repair-bandwidth formulas and code transformations.

Node indices are 1-based throughout, matching the usual ``A_1 .. A_n``
labelling.  A :class:`SymmetricSeed` stores node 1's storage matrix as
``base``; node ``i`` stores ``base @ R^(i-1)``, so ``A_n @ R == A_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DimensionMismatch, FieldMismatch, InvalidParameters, NoValidRotation, Singular
from .galois import FieldSpec
from .linalg import FieldMatrix, _matmul, invert, mat_pow, vstack


@dataclass(frozen=True)
class CodeParameters:
    n: int
    k: int

    def __post_init__(self):
        if not (2 <= self.k < self.n):
            raise InvalidParameters(f"need 2 <= k < n, got n={self.n}, k={self.k}")

    @property
    def d(self) -> int:
        return self.n - 1

    @property
    def alpha(self) -> int:
        """Packets stored per node."""
        return self.n - self.k

    @property
    def total_cols(self) -> int:
        """Source packets, k(n-k)."""
        return self.k * (self.n - self.k)

    @property
    def unrecovered_dim(self) -> int:
        """Dimension of the complement of the span recovered during one repair."""
        return (self.k - 1) * (self.n - self.k - 1)

    @property
    def nullity_bound(self) -> int:
        """Lower bound on each helper's choice space for its transmission vector."""
        return self.alpha - self.unrecovered_dim


@dataclass(frozen=True)
class RegeneratingCode:
    """Explicit code: all ``n`` storage matrices and every ``B_{i,j}``, i != j.

    ``storage[i - 1]`` is ``A_i``; ``transmissions[(i, j)]`` is the row vector
    node ``i`` applies to its packets when node ``j`` is being repaired.
    """

    params: CodeParameters
    field: FieldSpec
    storage: tuple[FieldMatrix, ...]
    transmissions: Mapping[tuple[int, int], FieldMatrix]

    def __post_init__(self):
        p = self.params
        if len(self.storage) != p.n:
            raise DimensionMismatch(f"expected {p.n} storage matrices, got {len(self.storage)}")
        for i, a in enumerate(self.storage, 1):
            if a.field != self.field:
                raise FieldMismatch(f"A{i} is over {a.field}, code is over {self.field}")
            if a.shape != (p.alpha, p.total_cols):
                raise DimensionMismatch(f"A{i} has shape {a.shape}, expected {(p.alpha, p.total_cols)}")
        expected = {(i, j) for i in range(1, p.n + 1) for j in range(1, p.n + 1) if i != j}
        if set(self.transmissions) != expected:
            raise DimensionMismatch("transmissions must cover every ordered pair (i, j) with i != j")
        for key, b in self.transmissions.items():
            if b.field != self.field:
                raise FieldMismatch(f"B{key} is over {b.field}")
            if b.shape != (1, p.alpha):
                raise DimensionMismatch(f"B{key} has shape {b.shape}, expected (1, {p.alpha})")
            if b.is_zero():
                raise InvalidParameters(f"B{key} is the zero vector")

    def A(self, i: int) -> FieldMatrix:
        return self.storage[i - 1]

    def B(self, i: int, j: int) -> FieldMatrix:
        return self.transmissions[(i, j)]

    def transmitted_stack(self, j: int) -> FieldMatrix:
        """Rows ``B_{i,j} A_i`` for helpers i != j in ascending order."""
        return vstack([self.B(i, j) @ self.A(i) for i in range(1, self.params.n + 1) if i != j])


@dataclass(frozen=True)
class SymmetricSeed:
    """Rotationally symmetric code in compact form.

    ``b_vectors[t - 1]`` is ``B_t``, used by node ``i`` to help node ``j``
    whenever ``(i - j) mod n == t``.
    """

    params: CodeParameters
    field: FieldSpec
    base: FieldMatrix
    rotation: FieldMatrix
    b_vectors: tuple[FieldMatrix, ...]

    def __post_init__(self):
        p = self.params
        if self.base.shape != (p.alpha, p.total_cols):
            raise DimensionMismatch(f"base has shape {self.base.shape}, expected {(p.alpha, p.total_cols)}")
        if self.rotation.shape != (p.total_cols, p.total_cols):
            raise DimensionMismatch(f"rotation has shape {self.rotation.shape}")
        if len(self.b_vectors) != p.n - 1:
            raise DimensionMismatch(f"expected {p.n - 1} B vectors, got {len(self.b_vectors)}")
        for m in (self.base, self.rotation, *self.b_vectors):
            if m.field != self.field:
                raise FieldMismatch(f"seed component over {m.field}, seed over {self.field}")
        for t, b in enumerate(self.b_vectors, 1):
            if b.shape != (1, p.alpha):
                raise DimensionMismatch(f"B{t} has shape {b.shape}")
            if b.is_zero():
                raise InvalidParameters(f"B{t} is the zero vector")
        if rotation_period(self.rotation, p.n) != p.n:
            raise NoValidRotation(f"rotation does not have period exactly {p.n}")

    def storage(self) -> list[FieldMatrix]:
        """``[A_1, ..., A_n]`` with ``A_{i+1} = A_i @ R``."""
        f = self.field
        out = [self.base]
        cur = self.base.rows
        rot = self.rotation.rows
        for _ in range(self.params.n - 1):
            cur = _matmul(f, cur, rot, self.params.total_cols)
            out.append(FieldMatrix._trusted(f, cur, self.params.total_cols))
        return out


def rotation_period(r: FieldMatrix, n: int) -> int | None:
    """Smallest t in 1..n with r^t = I, or None."""
    ident = FieldMatrix.identity(r.field, r.nrows)
    cur = r
    for t in range(1, n + 1):
        if cur == ident:
            return t
        cur = cur @ r
    return None


# ---------------------------------------------------------------------------
# repair bandwidth


@dataclass(frozen=True)
class RateParameters:
    M: Fraction
    n: int
    k: int
    gamma_msr: Fraction
    gamma_ia: Fraction
    subpacket_size: Fraction

    @property
    def gamma_naive(self) -> Fraction:
        return self.M

    @property
    def equal(self) -> bool:
        return self.gamma_msr == self.gamma_ia


def rates(n: int, k: int, M: Fraction | int | str = 1) -> RateParameters:
    """Cut-set repair bandwidth at the MSR point and the alignment-scheme rate, with d = n-1."""
    if not (2 <= k < n):
        raise InvalidParameters(f"need 2 <= k < n, got n={n}, k={k}")
    M = Fraction(M)
    if M <= 0:
        raise InvalidParameters(f"file size must be positive, got {M}")
    alpha = n - k
    gamma_msr = M / k * Fraction(n - 1, alpha)
    gamma_ia = M / k * Fraction((k - 1) * alpha + 1, alpha)
    return RateParameters(M, n, k, gamma_msr, gamma_ia, M / (k * alpha))


# ---------------------------------------------------------------------------
# rotation and expansion


def rotation_matrix(params: CodeParameters, field: FieldSpec) -> FieldMatrix:
    """Column rotation of period n: an n-cycle on the first n coordinates, identity after.

    ``x @ R`` moves coordinate c to c+1 for c < n-1 and wraps n-1 back to 0.
    """
    dim = params.total_cols
    n = params.n
    if dim < n:
        raise NoValidRotation(f"dimension {dim} is too small for an {n}-cycle")
    rows = [[0] * dim for _ in range(dim)]
    for c in range(n):
        rows[c][(c + 1) % n] = 1
    for c in range(n, dim):
        rows[c][c] = 1
    return FieldMatrix._trusted(field, rows, dim)


def fixed_points(params: CodeParameters) -> int:
    return params.total_cols - params.n


def expand(seed: SymmetricSeed) -> RegeneratingCode:
    n = seed.params.n
    trans = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                trans[(i, j)] = seed.b_vectors[(i - j) % n - 1]
    return RegeneratingCode(seed.params, seed.field, tuple(seed.storage()), trans)


def infer_rotation(code: RegeneratingCode) -> FieldMatrix | None:
    """A rotation R with A_{i+1} = A_i R for every i (cyclically), or None.

    Only codes whose first k storage matrices stack to an invertible matrix
    are handled; then R is determined by A_2..A_{k+1}.
    """
    p = code.params
    first = vstack(list(code.storage[: p.k]))
    try:
        inv_first = invert(first)
    except Singular:
        return None
    r = inv_first @ vstack(list(code.storage[1 : p.k + 1]))
    for i in range(p.n):
        if code.storage[i] @ r != code.storage[(i + 1) % p.n]:
            return None
    return r


def collapse(code: RegeneratingCode, rotation: FieldMatrix | None = None) -> SymmetricSeed | None:
    """Recover the compact form of an explicit rotationally symmetric code, if it is one."""
    p = code.params
    if rotation is None:
        rotation = infer_rotation(code)
        if rotation is None:
            return None
    try:
        seed_b = tuple(code.B(1 + t, 1) for t in range(1, p.n))
        seed = SymmetricSeed(p, code.field, code.A(1), rotation, seed_b)
    except (NoValidRotation, DimensionMismatch):
        return None
    return seed if expand(seed) == code else None


# ---------------------------------------------------------------------------
# equivalence transformations


def row_transform(code: RegeneratingCode, t: FieldMatrix) -> RegeneratingCode:
    """``A_i -> T A_i`` and ``B_{i,j} -> B_{i,j} T^-1``."""
    a = code.params.alpha
    if t.shape != (a, a):
        raise DimensionMismatch(f"row transform must be {a}x{a}, got {t.shape}")
    t_inv = invert(t)
    storage = tuple(t @ m for m in code.storage)
    trans = {key: b @ t_inv for key, b in code.transmissions.items()}
    return RegeneratingCode(code.params, code.field, storage, trans)


def column_transform(code: RegeneratingCode, t: FieldMatrix) -> RegeneratingCode:
    """``A_i -> A_i T``; transmissions unchanged."""
    c = code.params.total_cols
    if t.shape != (c, c):
        raise DimensionMismatch(f"column transform must be {c}x{c}, got {t.shape}")
    invert(t)  # raises Singular
    return RegeneratingCode(code.params, code.field, tuple(m @ t for m in code.storage), dict(code.transmissions))


def seed_row_transform(seed: SymmetricSeed, t: FieldMatrix) -> SymmetricSeed:
    t_inv = invert(t)
    return SymmetricSeed(seed.params, seed.field, t @ seed.base, seed.rotation,
                         tuple(b @ t_inv for b in seed.b_vectors))


def seed_column_transform(seed: SymmetricSeed, t: FieldMatrix) -> SymmetricSeed:
    """Same code as ``column_transform(expand(seed), t)``, with rotation ``T^-1 R T``."""
    t_inv = invert(t)
    return SymmetricSeed(seed.params, seed.field, seed.base @ t, t_inv @ seed.rotation @ t, seed.b_vectors)


def systematic_transform(storage: Sequence[FieldMatrix], k: int) -> FieldMatrix:
    """Inverse of the stack of the first k storage matrices (raises Singular)."""
    return invert(vstack(list(storage[:k])))


def to_systematic(code: RegeneratingCode) -> tuple[RegeneratingCode, FieldMatrix]:
    t = systematic_transform(code.storage, code.params.k)
    return column_transform(code, t), t


def seed_to_systematic(seed: SymmetricSeed) -> tuple[SymmetricSeed, FieldMatrix]:
    t = systematic_transform(seed.storage(), seed.params.k)
    return seed_column_transform(seed, t), t
