"""Search for rotationally symmetric exact-repair MSR codes.

For each canonical storage matrix A (an RREF representative of its
row-transformation class) the driver:

1. builds A_i = A R^(i-1) with the canonical column rotation R;
2. rejects A unless every k-subset containing node 1 is nonsingular;
3. walks every unrecovered subspace Y inside nullspace(A);
4. derives each helper's admissible transmission vectors from ``B A_i Y^T = 0``;
5. tries every combination of (projective) transmission vectors until A lies
   in the span of the transmitted rows.

A Y counts as a code when some combination repairs node 1; rotational
symmetry then repairs every node.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from itertools import product
from typing import Sequence

from .conditions import (
    _helper_b_basis,
    _independent_symmetric,
    _y_from_coeffs,
    check_general_position,
    check_independence_symmetric,
    check_recovery_symmetric,
)
from .errors import InvalidConfig, MixedConfigs
from .galois import FieldSpec
from .linalg import (
    FieldMatrix,
    _iter_rref_lists,
    _matmul,
    _nullspace,
    _rank,
    gaussian_binomial,
    rref_at,
)
from .model import CodeParameters, SymmetricSeed, expand, rotation_matrix

log = logging.getLogger(__name__)

EXHAUSTIVE = "exhaustive"
RANDOM = "random"


@dataclass(frozen=True)
class SearchConfig:
    params: CodeParameters
    field: FieldSpec
    mode: str = EXHAUSTIVE
    seed: int | None = None
    limit: int = 10
    a_range: tuple[int, int] | None = None
    require_general_position: bool = False
    # random mode: number of A matrices drawn
    samples: int = 1000
    # stop once this many codes are found (0 = never)
    stop_after: int = 0

    def __post_init__(self):
        if self.mode not in (EXHAUSTIVE, RANDOM):
            raise InvalidConfig(f"unknown mode {self.mode!r}")
        if self.mode == RANDOM and self.seed is None:
            raise InvalidConfig("random mode requires a seed")
        if self.limit < 0 or self.stop_after < 0 or self.samples < 0:
            raise InvalidConfig("limit, stop_after and samples must be non-negative")
        if self.a_range is not None:
            lo, hi = self.a_range
            if not 0 <= lo <= hi <= self.a_total:
                raise InvalidConfig(f"a_range {self.a_range} outside [0, {self.a_total}]")
        if self.params.total_cols < self.params.n:
            raise InvalidConfig(f"no period-{self.params.n} rotation in dimension {self.params.total_cols}")

    @property
    def a_total(self) -> int:
        """Number of canonical A matrices, the Gaussian binomial [k(n-k), n-k]_q."""
        return gaussian_binomial(self.params.total_cols, self.params.alpha, self.field.q)

    @property
    def bounds(self) -> tuple[int, int]:
        return self.a_range if self.a_range is not None else (0, self.a_total)


@dataclass
class SearchReport:
    params: CodeParameters
    field: FieldSpec
    mode: str
    seed: int | None = None
    a_candidates: int = 0
    a_independent: int = 0
    a_with_code: int = 0
    y_candidates: int = 0
    y_nullity_zero: int = 0
    b_assignments: int = 0
    codes_found: int = 0
    elapsed: float = 0.0
    stopped_early: bool = False
    emitted: list[SymmetricSeed] = dc_field(default_factory=list)

    @property
    def independence_fraction(self) -> Fraction:
        """Independent A matrices over all canonical A matrices visited."""
        return Fraction(self.a_independent, self.a_candidates) if self.a_candidates else Fraction(0)

    @property
    def recovery_fraction(self) -> Fraction:
        """Y subspaces (over independent A) that yield a repairable code."""
        return Fraction(self.codes_found, self.y_candidates) if self.y_candidates else Fraction(0)

    @property
    def a_recovery_fraction(self) -> Fraction:
        """Independent A matrices that admit at least one repairable choice of Y."""
        return Fraction(self.a_with_code, self.a_independent) if self.a_independent else Fraction(0)


class _Run:
    """Mutable search state for one configuration."""

    def __init__(self, config: SearchConfig):
        self.config = config
        p = config.params
        f = config.field
        self.f = f
        self.n, self.k = p.n, p.k
        self.alpha = p.alpha
        self.dim = p.total_cols
        self.ydim = p.unrecovered_dim
        self.rotation = rotation_matrix(p, f)
        self.rot_rows = self.rotation.rows
        self.report = SearchReport(p, f, config.mode, config.seed)
        # projective representatives of each possible nullity, as coefficient rows
        self._proj_cache: dict[int, list[list[int]]] = {}

    def done(self) -> bool:
        stop = self.config.stop_after
        return bool(stop) and self.report.codes_found >= stop

    def storage_rows(self, a_rows):
        out = [a_rows]
        for _ in range(self.n - 1):
            out.append(_matmul(self.f, out[-1], self.rot_rows, self.dim))
        return out

    def _proj(self, d: int) -> list[list[int]]:
        if d not in self._proj_cache:
            self._proj_cache[d] = [row[0] for row in _iter_rref_lists(self.f.q, 1, d)]
        return self._proj_cache[d]

    def visit_a(self, a_rows, y_coeff_iter=None) -> None:
        """Test one canonical A.  ``y_coeff_iter`` overrides the Y enumeration (random mode)."""
        rep = self.report
        f = self.f
        rep.a_candidates += 1
        storage = self.storage_rows(a_rows)
        ok, _ = _independent_symmetric(f, storage, self.n, self.k, self.dim)
        if not ok:
            return
        rep.a_independent += 1
        null_rows = _nullspace(f, a_rows, self.dim)
        if y_coeff_iter is None:
            y_coeff_iter = _iter_rref_lists(f.q, self.ydim, len(null_rows))
        found_for_a = False
        for coeffs in y_coeff_iter:
            y = _y_from_coeffs(f, coeffs, null_rows, self.dim)
            rep.y_candidates += 1
            b = self.solve_y(storage, y, a_rows)
            if b is not None:
                rep.codes_found += 1
                if not found_for_a:
                    found_for_a = True
                    rep.a_with_code += 1
                self.emit(a_rows, b)
                if self.done():
                    rep.stopped_early = True
                    return

    def solve_y(self, storage, y, a_rows) -> list[list[int]] | None:
        """First B assignment (depth-first over helpers 2..n) that repairs node 1."""
        f = self.f
        options = []
        for t in range(1, self.n):
            basis = _helper_b_basis(f, storage[t], y, self.alpha)
            if not basis:
                self.report.y_nullity_zero += 1
                return None
            cands = []
            for coeffs in self._proj(len(basis)):
                bvec = _matmul(f, [coeffs], basis, self.alpha)[0]
                cands.append((bvec, _matmul(f, [bvec], storage[t], self.dim)[0]))
            options.append(cands)
        for combo in product(*options):
            self.report.b_assignments += 1
            rows = [sent for _, sent in combo]
            if _rank(f, rows + a_rows, self.dim) != _rank(f, rows, self.dim):
                continue
            if self.config.require_general_position and not self._general_position(a_rows, combo):
                continue
            return [bvec for bvec, _ in combo]
        return None

    def _seed(self, a_rows, b_rows) -> SymmetricSeed:
        f = self.f
        return SymmetricSeed(
            self.config.params, f,
            FieldMatrix._trusted(f, a_rows, self.dim),
            self.rotation,
            tuple(FieldMatrix._trusted(f, [b], self.alpha) for b in b_rows),
        )

    def _general_position(self, a_rows, combo) -> bool:
        return check_general_position(expand(self._seed(a_rows, [b for b, _ in combo])))

    def emit(self, a_rows, b_rows) -> None:
        if self.config.limit and len(self.report.emitted) >= self.config.limit:
            return
        seed = self._seed(a_rows, b_rows)
        # every emission is re-verified through the matrix-level checkers
        if not check_independence_symmetric(seed)[0] or check_recovery_symmetric(seed) is None:
            raise AssertionError("emitted seed does not re-verify")
        self.report.emitted.append(seed)


def run_search(config: SearchConfig) -> SearchReport:
    """Run the configured search and return its statistics and emitted seeds."""
    run = _Run(config)
    p = config.params
    q = config.field.q
    t0 = time.perf_counter()
    if config.mode == EXHAUSTIVE:
        lo, hi = config.bounds
        log.info("exhaustive search n=%d k=%d over %s, A indices [%d, %d)", p.n, p.k, config.field, lo, hi)
        for a_rows in _iter_rref_lists(q, p.alpha, p.total_cols, lo, hi):
            run.visit_a(a_rows)
            if run.report.stopped_early:
                break
    else:
        rng = random.Random(config.seed)
        total = config.a_total
        null_dim = (p.k - 1) * p.alpha
        y_total = gaussian_binomial(null_dim, p.unrecovered_dim, q)
        log.info("random search n=%d k=%d over %s, %d samples, seed %s", p.n, p.k, config.field, config.samples, config.seed)
        for _ in range(config.samples):
            a = rref_at(config.field, p.alpha, p.total_cols, rng.randrange(total))
            y_index = rng.randrange(y_total)
            y_coeffs = [list(r) for r in rref_at(config.field, p.unrecovered_dim, null_dim, y_index).rows] \
                if p.unrecovered_dim else []
            run.visit_a([list(r) for r in a.rows], iter([y_coeffs]))
            if run.report.stopped_early:
                break
    run.report.elapsed = time.perf_counter() - t0
    return run.report


def shard(config: SearchConfig, parts: int) -> list[SearchConfig]:
    """Split the exhaustive A range into ``parts`` contiguous pieces (earlier pieces take the remainder)."""
    if parts < 1:
        raise InvalidConfig(f"parts must be >= 1, got {parts}")
    if config.mode != EXHAUSTIVE:
        raise InvalidConfig("only exhaustive searches can be sharded")
    if parts == 1:
        return [config]
    lo, hi = config.bounds
    size, extra = divmod(hi - lo, parts)
    out = []
    start = lo
    for i in range(parts):
        stop = start + size + (1 if i < extra else 0)
        out.append(replace(config, a_range=(start, stop)))
        start = stop
    return out


def shard_index(config: SearchConfig, index: int, parts: int) -> SearchConfig:
    """The ``index``-th (0-based) of ``parts`` shards."""
    if not 0 <= index < parts:
        raise InvalidConfig(f"shard {index} outside 0..{parts - 1}")
    return shard(config, parts)[index]


def merge_reports(reports: Sequence[SearchReport]) -> SearchReport:
    if not reports:
        raise MixedConfigs("nothing to merge")
    first = reports[0]
    for r in reports[1:]:
        if (r.params, r.field, r.mode) != (first.params, first.field, first.mode):
            raise MixedConfigs("reports come from different parameters, fields or modes")
    out = SearchReport(first.params, first.field, first.mode, first.seed)
    for r in reports:
        out.a_candidates += r.a_candidates
        out.a_independent += r.a_independent
        out.a_with_code += r.a_with_code
        out.y_candidates += r.y_candidates
        out.y_nullity_zero += r.y_nullity_zero
        out.b_assignments += r.b_assignments
        out.codes_found += r.codes_found
        out.elapsed += r.elapsed
        out.stopped_early = out.stopped_early or r.stopped_early
        out.emitted.extend(r.emitted)
    return out
