"""Text formats: code files and search reports.

A code file is line oriented::

    msrcode 1
    field 3 1
    params 5 3
    form symmetric
    matrix A 2 6
    1 0 1 0 0 0
    0 1 1 0 0 1
    matrix R 6 6
    ...
    matrix B1 1 2
    2 1
    ...

``field <p> <m>`` is followed by the m+1 modulus coefficients (constant term
first) when m > 1.  Symmetric documents carry ``A`` (node 1's storage), ``R``
and ``B1 .. B<n-1>``; explicit documents carry ``A1 .. A<n>`` and
``B<i>_<j>`` for every i != j.  Blank lines and ``#`` comments are ignored.
Several documents may be concatenated in one file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .errors import MSRError, ParseError
from .galois import FieldSpec, make_field
from .linalg import FieldMatrix
from .model import CodeParameters, RegeneratingCode, SymmetricSeed, expand
from .search import SearchReport

FORMAT_VERSION = 1
SYMMETRIC = "symmetric"
EXPLICIT = "explicit"

_B_EXPLICIT = re.compile(r"^B(\d+)_(\d+)$")


@dataclass
class CodeDocument:
    field: FieldSpec
    params: CodeParameters
    form: str
    matrices: dict[str, FieldMatrix] = dc_field(default_factory=dict)
    version: int = FORMAT_VERSION

    @classmethod
    def from_seed(cls, seed: SymmetricSeed) -> CodeDocument:
        mats = {"A": seed.base, "R": seed.rotation}
        for t, b in enumerate(seed.b_vectors, 1):
            mats[f"B{t}"] = b
        return cls(seed.field, seed.params, SYMMETRIC, mats)

    @classmethod
    def from_code(cls, code: RegeneratingCode) -> CodeDocument:
        mats = {f"A{i}": a for i, a in enumerate(code.storage, 1)}
        for (i, j) in sorted(code.transmissions):
            mats[f"B{i}_{j}"] = code.transmissions[(i, j)]
        return cls(code.field, code.params, EXPLICIT, mats)

    def to_seed(self) -> SymmetricSeed:
        if self.form != SYMMETRIC:
            raise ValueError("document is in explicit form")
        n = self.params.n
        return SymmetricSeed(self.params, self.field, self.matrices["A"], self.matrices["R"],
                             tuple(self.matrices[f"B{t}"] for t in range(1, n)))

    def to_code(self) -> RegeneratingCode:
        """The explicit code, expanding a symmetric document if needed."""
        if self.form == SYMMETRIC:
            return expand(self.to_seed())
        n = self.params.n
        storage = tuple(self.matrices[f"A{i}"] for i in range(1, n + 1))
        trans = {}
        for name, m in self.matrices.items():
            hit = _B_EXPLICIT.match(name)
            if hit:
                trans[(int(hit.group(1)), int(hit.group(2)))] = m
        return RegeneratingCode(self.params, self.field, storage, trans)


def _matrix_lines(name: str, m: FieldMatrix) -> list[str]:
    lines = [f"matrix {name} {m.nrows} {m.ncols}"]
    lines.extend(" ".join(str(v) for v in row) for row in m.rows)
    return lines


def field_line(f: FieldSpec) -> str:
    if f.m == 1:
        return f"field {f.p} 1"
    return f"field {f.p} {f.m} " + " ".join(str(c) for c in f.modulus)


def serialize(doc: CodeDocument | SymmetricSeed | RegeneratingCode) -> str:
    if isinstance(doc, SymmetricSeed):
        doc = CodeDocument.from_seed(doc)
    elif isinstance(doc, RegeneratingCode):
        doc = CodeDocument.from_code(doc)
    lines = [
        f"msrcode {doc.version}",
        field_line(doc.field),
        f"params {doc.params.n} {doc.params.k}",
        f"form {doc.form}",
    ]
    for name, m in doc.matrices.items():
        lines.extend(_matrix_lines(name, m))
    return "\n".join(lines) + "\n"


def serialize_many(docs: Iterable[CodeDocument | SymmetricSeed | RegeneratingCode]) -> str:
    return "\n".join(serialize(d) for d in docs)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _expected_names(params: CodeParameters, form: str) -> list[str]:
    n = params.n
    if form == SYMMETRIC:
        return ["A", "R"] + [f"B{t}" for t in range(1, n)]
    names = [f"A{i}" for i in range(1, n + 1)]
    names += [f"B{i}_{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    return names


def parse_many(text: str) -> list[CodeDocument]:
    """Parse one or more concatenated code documents."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((lineno, stripped.split()))
    if not lines:
        raise ParseError("empty document")
    docs = []
    pos = 0
    while pos < len(lines):
        doc, pos = _parse_one(lines, pos)
        docs.append(doc)
    return docs


def parse(text: str) -> CodeDocument:
    docs = parse_many(text)
    if len(docs) != 1:
        raise ParseError(f"expected one document, found {len(docs)}")
    return docs[0]


def _take(lines, pos, keyword):
    if pos >= len(lines):
        raise ParseError(f"unexpected end of input, expected '{keyword}'", lines[-1][0] if lines else None)
    lineno, toks = lines[pos]
    if toks[0] != keyword:
        raise ParseError(f"expected '{keyword}', got '{toks[0]}'", lineno)
    return lineno, toks[1:]


def _parse_one(lines, pos):
    lineno, rest = _take(lines, pos, "msrcode")
    version = _ints(rest, lineno)
    if version != [FORMAT_VERSION]:
        raise ParseError(f"unsupported format version {' '.join(rest)}", lineno)
    pos += 1

    lineno, rest = _take(lines, pos, "field")
    nums = _ints(rest, lineno)
    if len(nums) < 2:
        raise ParseError("field line needs <p> <m>", lineno)
    p, m, modulus = nums[0], nums[1], nums[2:]
    if m == 1 and modulus:
        raise ParseError("prime field takes no modulus", lineno)
    if m > 1 and len(modulus) != m + 1:
        raise ParseError(f"GF({p}^{m}) needs {m + 1} modulus coefficients", lineno)
    try:
        f = make_field(p, m, modulus or None)
    except MSRError as exc:
        raise ParseError(str(exc), lineno) from None
    pos += 1

    lineno, rest = _take(lines, pos, "params")
    nums = _ints(rest, lineno)
    if len(nums) != 2:
        raise ParseError("params line needs <n> <k>", lineno)
    try:
        params = CodeParameters(*nums)
    except MSRError as exc:
        raise ParseError(str(exc), lineno) from None
    pos += 1

    lineno, rest = _take(lines, pos, "form")
    if rest not in ([SYMMETRIC], [EXPLICIT]):
        raise ParseError(f"form must be '{SYMMETRIC}' or '{EXPLICIT}'", lineno)
    form = rest[0]
    pos += 1

    matrices: dict[str, FieldMatrix] = {}
    while pos < len(lines) and lines[pos][1][0] == "matrix":
        lineno, toks = lines[pos]
        if len(toks) != 4:
            raise ParseError("matrix header is 'matrix <name> <rows> <cols>'", lineno)
        name = toks[1]
        rows, cols = _ints(toks[2:], lineno)
        if rows < 1 or cols < 1:
            raise ParseError("matrix dimensions must be positive", lineno)
        if name in matrices:
            raise ParseError(f"duplicate matrix {name}", lineno)
        pos += 1
        data = []
        for _ in range(rows):
            if pos >= len(lines):
                raise ParseError(f"matrix {name} ends early", lineno)
            rlineno, rtoks = lines[pos]
            vals = _ints(rtoks, rlineno)
            if len(vals) != cols:
                raise ParseError(f"matrix {name} row has {len(vals)} entries, expected {cols}", rlineno)
            bad = [v for v in vals if not 0 <= v < f.q]
            if bad:
                raise ParseError(f"entry {bad[0]} is not an element of {f}", rlineno)
            data.append(vals)
            pos += 1
        matrices[name] = FieldMatrix(f, tuple(tuple(r) for r in data), cols)

    expected = _expected_names(params, form)
    missing = [x for x in expected if x not in matrices]
    extra = [x for x in matrices if x not in expected]
    where = lines[pos][0] if pos < len(lines) else lines[-1][0]
    if missing:
        raise ParseError(f"missing matrices: {', '.join(missing)}", where)
    if extra:
        raise ParseError(f"unexpected matrices: {', '.join(extra)}", where)
    if pos < len(lines) and lines[pos][1][0] != "msrcode":
        raise ParseError(f"unexpected '{lines[pos][1][0]}'", lines[pos][0])

    doc = CodeDocument(f, params, form, {x: matrices[x] for x in expected}, version[0])
    try:
        doc.to_code()
    except MSRError as exc:
        raise ParseError(str(exc), where) from None
    return doc, pos


def load(path: str | Path) -> list[CodeDocument]:
    return parse_many(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# reports


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def format_report(report: SearchReport, a_range: tuple[int, int] | None = None, include_codes: bool = False) -> str:
    f = report.field
    lines = [
        f"n={report.params.n}",
        f"k={report.params.k}",
        f"field={f}",
        f"p={f.p}",
        f"m={f.m}",
    ]
    if f.m > 1:
        lines.append("modulus=" + " ".join(str(c) for c in f.modulus))
    lines += [
        f"mode={report.mode}",
        f"seed={'' if report.seed is None else report.seed}",
    ]
    if a_range is not None:
        lines.append(f"a_range={a_range[0]}:{a_range[1]}")
    lines += [
        f"a_candidates={report.a_candidates}",
        f"a_independent={report.a_independent}",
        f"a_with_code={report.a_with_code}",
        f"y_candidates={report.y_candidates}",
        f"y_nullity_zero={report.y_nullity_zero}",
        f"b_assignments={report.b_assignments}",
        f"codes_found={report.codes_found}",
        f"independence_fraction={_frac(report.independence_fraction)}",
        f"independence_percent={float(report.independence_fraction) * 100:.2f}",
        f"recovery_fraction={_frac(report.recovery_fraction)}",
        f"recovery_percent={float(report.recovery_fraction) * 100:.2f}",
        f"a_recovery_fraction={_frac(report.a_recovery_fraction)}",
        f"stopped_early={'yes' if report.stopped_early else 'no'}",
        f"elapsed={report.elapsed:.3f}",
        f"emitted={len(report.emitted)}",
    ]
    text = "\n".join(lines) + "\n"
    if include_codes:
        for idx, seed in enumerate(report.emitted, 1):
            text += f"code: {idx}\n" + serialize(seed)
    return text


_COUNT_KEYS = ("a_candidates", "a_independent", "a_with_code", "y_candidates",
               "y_nullity_zero", "b_assignments", "codes_found")


def parse_report(text: str) -> SearchReport:
    """Inverse of :func:`format_report` (derived fields are recomputed, not read)."""
    kv: dict[str, str] = {}
    lines = text.splitlines()
    code_start = None
    for idx, line in enumerate(lines):
        if line.startswith("code:"):
            code_start = idx
            break
        if "=" in line:
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
    try:
        modulus = [int(c) for c in kv["modulus"].split()] if "modulus" in kv else None
        field = make_field(int(kv["p"]), int(kv["m"]), modulus)
        params = CodeParameters(int(kv["n"]), int(kv["k"]))
        report = SearchReport(params, field, kv["mode"], int(kv["seed"]) if kv.get("seed") else None)
        for key in _COUNT_KEYS:
            setattr(report, key, int(kv[key]))
        report.elapsed = float(kv.get("elapsed", 0))
        report.stopped_early = kv.get("stopped_early") == "yes"
    except KeyError as exc:
        raise ParseError(f"report is missing key {exc.args[0]}") from None
    if code_start is not None:
        body = "\n".join(l for l in lines[code_start:] if not l.startswith("code:"))
        report.emitted = [d.to_seed() for d in parse_many(body)]
    return report
