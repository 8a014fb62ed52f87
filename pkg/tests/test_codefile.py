import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msrsearch.codefile import CodeDocument, load, parse, parse_many, serialize, serialize_many
from msrsearch.conditions import verify
from msrsearch.errors import ParseError
from msrsearch.galois import make_field
from msrsearch.linalg import FieldMatrix
from msrsearch.model import CodeParameters, SymmetricSeed, expand, rotation_matrix
from msrsearch.search import SearchConfig, run_search

from conftest import APPENDIX_GF3, FIXTURES, appendix_code, worked_seed

WORKED = (FIXTURES / "worked_4_2_gf3.msr").read_text()


def _normalize(text):
    return [" ".join(line.split("#")[0].split()) for line in text.splitlines() if line.split("#")[0].strip()]


def test_seed_round_trip():
    seed = worked_seed()
    text = serialize(seed)
    doc = parse(text)
    assert doc.to_seed() == seed
    assert serialize(doc) == text


def test_explicit_round_trip():
    code = appendix_code(APPENDIX_GF3)
    doc = parse(serialize(code))
    assert doc.form == "explicit" and doc.to_code() == code


def test_fixture_matches_serializer_up_to_whitespace():
    for path in sorted(FIXTURES.glob("*.msr")):
        text = path.read_text()
        docs = load(path)
        assert _normalize(serialize_many(docs)) == _normalize(text), path.name


def test_symmetric_and_explicit_files_agree():
    seed = worked_seed()
    sym = parse(serialize(seed)).to_code()
    exp = parse(serialize(expand(seed))).to_code()
    assert sym == exp
    assert verify(sym).render(4) == verify(exp).render(4)


def test_extension_field_header():
    gf4 = make_field(2, 2)
    params = CodeParameters(5, 3)
    rng = random.Random(0)
    base = FieldMatrix.from_rows(gf4, [[rng.randrange(4) for _ in range(6)] for _ in range(2)])
    seed = SymmetricSeed(params, gf4, base, rotation_matrix(params, gf4),
                         tuple(FieldMatrix.from_rows(gf4, [[1, 2]]) for _ in range(4)))
    text = serialize(seed)
    assert "field 2 2 1 1 1" in text
    assert parse(text).to_seed() == seed


def test_multi_document_and_comments():
    text = "# leading comment\n\n" + serialize_many([worked_seed(), worked_seed(5)]).replace(
        "params 4 2", "params 4 2   # trailing")
    docs = parse_many(text)
    assert [d.field.q for d in docs] == [3, 5]
    with pytest.raises(ParseError):
        parse(text)


def test_every_emitted_search_result_round_trips():
    report = run_search(SearchConfig(CodeParameters(4, 2), make_field(5), limit=0))
    assert report.emitted
    for seed in report.emitted:
        assert parse(serialize(seed)).to_seed() == seed


def _broken(old, new, count=1):
    text = WORKED.replace(old, new, count)
    assert text != WORKED
    return text


@pytest.mark.parametrize("text,line,fragment", [
    (_broken("msrcode 1", "msrcode 2"), 2, "version"),
    (_broken("field 3 1", "field 4 1"), 3, "prime"),
    (_broken("field 3 1", "field 3"), 3, "field line"),
    (_broken("params 4 2", "params 4 4"), 4, "k < n"),
    (_broken("form symmetric", "form other"), 5, "form"),
    (_broken("1 0 0 0\n0 1 1 0", "1 0 0 0\n0 1 3 0"), 8, "not an element"),
    (_broken("1 0 0 0\n0 1 1 0", "1 0 0 0\n0 1 1"), 8, "expected 4"),
    (_broken("\n0 1 1 0\n", "\n0 x 1 0\n"), 8, "integer"),
    (_broken("matrix B3 1 2\n0 1", "matrix B3 1 2\n0 0"), 19, "B3 is the zero vector"),
    (WORKED + "junk\n", 20, "unexpected"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}: ")
    assert fragment in str(info.value)


def test_missing_matrix():
    text = WORKED.split("matrix B3")[0]
    with pytest.raises(ParseError, match="missing matrices: B3"):
        parse(text)


@settings(max_examples=100, deadline=None)
@given(q=st.sampled_from([2, 3, 5, 7]), data=st.data())
def test_random_seed_round_trip(q, data):
    f = make_field(q)
    params = CodeParameters(5, 3)
    entry = st.integers(0, q - 1)
    base = data.draw(st.lists(st.lists(entry, min_size=6, max_size=6), min_size=2, max_size=2))
    nonzero = st.lists(entry, min_size=2, max_size=2).filter(any)
    bs = [data.draw(nonzero) for _ in range(4)]
    seed = SymmetricSeed(params, f, FieldMatrix.from_rows(f, base), rotation_matrix(params, f),
                         tuple(FieldMatrix.from_rows(f, [b]) for b in bs))
    doc = parse(serialize(seed))
    assert doc.to_seed() == seed
    assert CodeDocument.from_seed(seed) == doc
