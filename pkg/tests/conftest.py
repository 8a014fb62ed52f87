from __future__ import annotations

from pathlib import Path

import pytest

from msrsearch.galois import make_field
from msrsearch.linalg import FieldMatrix
from msrsearch.model import CodeParameters, RegeneratingCode, SymmetricSeed, rotation_matrix

FIXTURES = Path(__file__).resolve().parent / "fixtures"


def mat(field, rows):
    return FieldMatrix.from_rows(field, rows)


def make_seed(q, n, k, base, bs):
    f = make_field(q)
    params = CodeParameters(n, k)
    return SymmetricSeed(params, f, mat(f, base), rotation_matrix(params, f),
                         tuple(mat(f, [b]) for b in bs))


def worked_seed(q=3):
    """The (4,2) worked example: A1 = (1 0 0 0; 0 1 1 0), B = (1 0), (1 0), (0 1)."""
    return make_seed(q, 4, 2, [[1, 0, 0, 0], [0, 1, 1, 0]], [(1, 0), (1, 0), (0, 1)])


def systematic_5_3(q, a4, a5, bs):
    f = make_field(q)
    ident = [[int(i == j) for j in range(6)] for i in range(6)]
    storage = (mat(f, ident[0:2]), mat(f, ident[2:4]), mat(f, ident[4:6]), mat(f, a4), mat(f, a5))
    trans = {(i, j): mat(f, [bs[(i - j) % 5 - 1]])
             for i in range(1, 6) for j in range(1, 6) if i != j}
    return RegeneratingCode(CodeParameters(5, 3), f, storage, trans)


APPENDIX_GF3 = dict(
    q=3,
    a4=[[1, 1, 2, 0, 1, 2], [1, 2, 1, 2, 1, 0]],
    a5=[[0, 2, 2, 2, 2, 2], [1, 1, 0, 2, 2, 1]],
    bs=[(2, 1), (1, 0), (0, 1), (1, 1)],
    stack=[[0, 0, 2, 1, 0, 0], [0, 0, 0, 0, 1, 0], [1, 2, 1, 2, 1, 0], [1, 0, 2, 1, 1, 0]],
    c=[[2, 2, 0, 1], [1, 0, 2, 1]],
)

APPENDIX_GF7 = dict(
    q=7,
    a4=[[2, 0, 5, 6, 1, 1], [6, 4, 3, 4, 5, 0]],
    a5=[[1, 4, 3, 3, 4, 0], [3, 0, 3, 6, 1, 2]],
    bs=[(0, 1), (2, 1), (5, 1), (6, 1)],
    stack=[[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 2, 1], [2, 4, 0, 6, 3, 5], [2, 3, 0, 3, 4, 2]],
    c=[[3, 0, 2, 2], [4, 4, 1, 6]],
)


def appendix_code(data):
    return systematic_5_3(data["q"], data["a4"], data["a5"], data["bs"])


# non-systematic (5,3) seeds under the canonical rotation
SEED_GF3 = (3, [[1, 0, 1, 0, 0, 0], [0, 1, 1, 0, 0, 1]], [(2, 1), (1, 0), (0, 1), (1, 1)])
SEED_GF7 = (7, [[1, 0, 0, 0, 0, 1], [0, 1, 0, 0, 2, 0]], [(0, 1), (2, 1), (5, 1), (6, 1)])
SEED_GF17 = (17, [[1, 11, 0, 13, 9, 16], [15, 1, 6, 1, 5, 11]], [(1, 1), (9, 1), (12, 1), (4, 1)])


def seed_5_3(entry):
    q, base, bs = entry
    return make_seed(q, 5, 3, base, bs)


@pytest.fixture(scope="session")
def gf3():
    return make_field(3)


@pytest.fixture(scope="session")
def gf4():
    return make_field(2, 2)


@pytest.fixture(scope="session")
def gf7():
    return make_field(7)
