"""Independence (MDS) and exact-repair checks, plus the unrecovered-subspace machinery.

Repair of node j is decided by row-span membership: node j is recoverable
exactly when every row of ``A_j`` lies in the span of the transmitted rows
``B_{i,j} A_i``.  Transmission vectors are derived from a choice of
unrecovered subspace ``Y`` through ``B A_i Y^T = 0``; no projection matrices
are formed, since ``X X^T`` can be singular over a finite field.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Iterator, Sequence

from .errors import DimensionMismatch
from .galois import FieldSpec
from .linalg import (
    FieldMatrix,
    _det,
    _iter_rref_lists,
    _matmul,
    _nullspace,
    _rank,
    _rref_inplace,
    gaussian_binomial,
    nullspace,
    rank,
    row_basis,
    solve_left,
    vstack,
)
from .model import CodeParameters, RegeneratingCode, SymmetricSeed


@dataclass(frozen=True)
class RecoverySubspace:
    """What a repair of node ``node`` recovers.

    ``extra_rows`` (Z) extends ``A_j`` to a basis ``full_stack`` (X) of the
    recovered span; ``complement`` (Y) is a basis of its annihilator.
    """

    node: int
    extra_rows: FieldMatrix
    full_stack: FieldMatrix
    complement: FieldMatrix


@dataclass
class VerificationVerdict:
    independent: bool
    recoverable: bool
    failures: list[tuple[str, tuple[int, ...]]] = dc_field(default_factory=list)
    rebuild_matrices: dict[int, FieldMatrix] = dc_field(default_factory=dict)
    general_position: bool | None = None

    @property
    def ok(self) -> bool:
        return self.independent and self.recoverable

    def render(self, n: int) -> str:
        """One line per condition: ``OK`` or ``FAIL <witness>``."""
        lines = []
        bad_subset = next((w for c, w in self.failures if c == "independence"), None)
        lines.append("independence OK" if self.independent else
                     "independence FAIL " + ",".join(map(str, bad_subset)))
        failed_nodes = {w[0] for c, w in self.failures if c == "recovery"}
        for j in range(1, n + 1):
            lines.append(f"recovery node {j} " + ("FAIL" if j in failed_nodes else "OK"))
        if self.general_position is not None:
            if self.general_position:
                lines.append("general-position OK")
            else:
                witness = next((w for c, w in self.failures if c == "general-position"), ())
                lines.append("general-position FAIL " + ",".join(map(str, witness)))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# independence


def _stack_rows(mats: Sequence[FieldMatrix]) -> list[tuple[int, ...]]:
    return [r for m in mats for r in m.rows]


def check_independence(code: RegeneratingCode) -> tuple[bool, tuple[int, ...] | None]:
    """Every k-subset of nodes stacks to a nonsingular matrix.

    Returns ``(True, None)`` or ``(False, subset)`` for the first failing
    1-based subset in lexicographic order.
    """
    p = code.params
    f = code.field
    for subset in combinations(range(1, p.n + 1), p.k):
        if _det(f, _stack_rows([code.A(i) for i in subset])) == 0:
            return False, subset
    return True, None


def _independent_symmetric(f: FieldSpec, storage_rows: Sequence[Sequence[Sequence[int]]], n: int, k: int, dim: int) -> tuple[bool, tuple[int, ...] | None]:
    # subsets not containing node 1 are rotations of ones that do
    for rest in combinations(range(1, n), k - 1):
        rows = list(storage_rows[0])
        for i in rest:
            rows.extend(storage_rows[i])
        if _rank(f, rows, dim) < dim:
            return False, (1,) + tuple(i + 1 for i in rest)
    return True, None


def check_independence_symmetric(seed: SymmetricSeed) -> tuple[bool, tuple[int, ...] | None]:
    """Independence evaluated on the C(n-1, k-1) subsets containing node 1 only."""
    p = seed.params
    storage = [m.rows for m in seed.storage()]
    return _independent_symmetric(seed.field, storage, p.n, p.k, p.total_cols)


def check_general_position(code: RegeneratingCode) -> bool:
    return general_position_witness(code) is None


def general_position_witness(code: RegeneratingCode) -> tuple[int, ...] | None:
    """First k(n-k)-subset of storage rows (1-based, node-major) that is singular."""
    p = code.params
    f = code.field
    rows = _stack_rows(code.storage)
    dim = p.total_cols
    for subset in combinations(range(len(rows)), dim):
        if _det(f, [rows[i] for i in subset]) == 0:
            return tuple(i + 1 for i in subset)
    return None


# ---------------------------------------------------------------------------
# recovery


def check_recovery(code: RegeneratingCode, j: int) -> FieldMatrix | None:
    """C_j with ``C_j @ stack == A_j`` where stack holds ``B_{i,j} A_i`` for i != j ascending."""
    return solve_left(code.A(j), code.transmitted_stack(j))


def symmetric_stack(seed: SymmetricSeed) -> FieldMatrix:
    """Rows ``B_t A_{1+t}`` for t = 1..n-1: what node 1 receives."""
    storage = seed.storage()
    return vstack([b @ storage[t] for t, b in enumerate(seed.b_vectors, 1)])


def check_recovery_symmetric(seed: SymmetricSeed) -> FieldMatrix | None:
    """The single repair equation ``A_1 = C @ stack`` that stands for every node."""
    return solve_left(seed.base, symmetric_stack(seed))


def verify(code: RegeneratingCode, general_position: bool = False) -> VerificationVerdict:
    independent, witness = check_independence(code)
    verdict = VerificationVerdict(independent=independent, recoverable=True)
    if not independent:
        verdict.failures.append(("independence", witness))
    for j in range(1, code.params.n + 1):
        c = check_recovery(code, j)
        if c is None:
            verdict.recoverable = False
            verdict.failures.append(("recovery", (j,)))
        else:
            verdict.rebuild_matrices[j] = c
    if general_position:
        gp = general_position_witness(code)
        verdict.general_position = gp is None
        if gp is not None:
            verdict.failures.append(("general-position", gp))
    return verdict


def recovery_subspace(code: RegeneratingCode, j: int) -> RecoverySubspace | None:
    """Z_j, X_j and Y_j for a repair of node j, or None if node j is not recoverable."""
    stack = code.transmitted_stack(j)
    a_j = code.A(j)
    if solve_left(a_j, stack) is None:
        return None
    f = code.field
    dim = code.params.total_cols
    extra: list[Sequence[int]] = []
    cur = list(a_j.rows)
    r = _rank(f, cur, dim)
    for row in row_basis(stack).rows:
        if _rank(f, cur + [row], dim) > r:
            cur.append(row)
            extra.append(row)
            r += 1
    z = FieldMatrix._trusted(f, extra, dim)
    x = vstack([z, a_j])
    return RecoverySubspace(j, z, x, nullspace(x))


# ---------------------------------------------------------------------------
# unrecovered subspaces and transmission vectors


def _y_from_coeffs(f: FieldSpec, coeffs: list[list[int]], null_rows, dim: int) -> list[list[int]]:
    y = _matmul(f, coeffs, null_rows, dim)
    _rref_inplace(f, y, dim)
    return y


def enumerate_y_subspaces(a1: FieldMatrix, params: CodeParameters) -> Iterator[FieldMatrix]:
    """Every (k-1)(n-k-1)-dimensional subspace of nullspace(a1), as its RREF basis.

    Subspaces are produced in the order of their coordinates relative to the
    (RREF-derived) nullspace basis of ``a1``.
    """
    if rank(a1) != a1.nrows:
        raise DimensionMismatch("A_1 must have full row rank")
    f = a1.field
    dim = a1.ncols
    null_rows = _nullspace(f, a1.rows, dim)
    for coeffs in _iter_rref_lists(f.q, params.unrecovered_dim, len(null_rows)):
        yield FieldMatrix._trusted(f, _y_from_coeffs(f, coeffs, null_rows, dim), dim)


def count_y_subspaces(params: CodeParameters, q: int) -> int:
    return gaussian_binomial((params.k - 1) * params.alpha, params.unrecovered_dim, q)


def derive_b_vectors(storage: Sequence[FieldMatrix], y: FieldMatrix, j: int) -> list[FieldMatrix] | None:
    """Per helper i != j (ascending), a basis of ``{B : B A_i Y^T = 0}``.

    Returns None as soon as some helper has only the zero solution.
    """
    f = y.field
    out = []
    for i, a in enumerate(storage, 1):
        if i == j:
            continue
        basis = _helper_b_basis(f, a.rows, y.rows, a.nrows)
        if not basis:
            return None
        out.append(FieldMatrix._trusted(f, basis, a.nrows))
    return out


def _helper_b_basis(f: FieldSpec, a_rows, y_rows, alpha: int) -> list[list[int]]:
    # (A Y^T)^T = Y A^T, and B (A Y^T) = 0  <=>  (Y A^T) B^T = 0
    mul, add = f.mul_table, f.add_table
    m = []
    for yr in y_rows:
        row = []
        for ar in a_rows:
            s = 0
            for u, v in zip(yr, ar):
                if u and v:
                    s = add[s][mul[u][v]]
            row.append(s)
        m.append(row)
    return _nullspace(f, m, alpha)


def helper_nullities(storage: Sequence[FieldMatrix], y: FieldMatrix, j: int) -> list[int]:
    """Dimension of each helper's solution space for B (no early exit)."""
    f = y.field
    return [len(_helper_b_basis(f, a.rows, y.rows, a.nrows))
            for i, a in enumerate(storage, 1) if i != j]
