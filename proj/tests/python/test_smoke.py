from fractions import Fraction
import json

import pytest

import copekit


def test_spekkens_is_noncontextual():
    c = copekit.spekkens()
    assert copekit.rank(c) == 4
    assert c.rows()[0][2] == Fraction(1, 2)
    cert = copekit.certify(c)
    assert cert.verdict == "Noncontextual"
    assert cert.evidence_kind == "EnmfModel"
    assert cert.verify()


def test_boxworld_vertex_forcing():
    cert = copekit.certify(copekit.boxworld())
    assert cert.verdict == "Contextual"
    assert cert.evidence_kind == "VertexForcing"
    doc = json.loads(cert.to_json())
    assert doc["evidence"]["forced_rank"] == 4
    assert copekit.Certificate.from_json(cert.to_json()).verdict == "Contextual"
    assert not copekit.exhaustive_exists(copekit.boxworld(), 3)


def test_matrix_from_rows():
    c = copekit.CopeMatrix([[1, "1/3"], [0, Fraction(2, 3)]], [2])
    assert c.is_exact
    assert copekit.validate(c) == []
    bad = copekit.CopeMatrix([[1, 1], [0, 1]], [2])
    assert len(copekit.validate(bad)) == 1
    f = copekit.CopeMatrix([[0.5, 1.0], [0.5, 0.0]], [2])
    assert not f.is_exact
    assert copekit.CopeMatrix.from_json(c.to_json()) == c


def test_models():
    c = copekit.spekkens()
    g = copekit.gpt(c)
    assert g.kind == "GPT" and g.inner_dim == 4
    q = copekit.quasi(g, [0, 2, 4, 1])
    assert q.unit() == [1, 1, 1, 1]
    assert "Quasiprobabilistic" in copekit.classify(c, q)["kinds"]
    m = copekit.nmf(c, 4)
    assert m is not None and copekit.classify(c, m)["nonnegative"]
    with pytest.raises(ValueError):
        copekit.quasi(g, [0, 1, 2, 3])
    for ref in copekit.reference_models("extended-boxworld"):
        assert ref.kind in copekit.classify(copekit.extended_boxworld(), ref)["kinds"]


def test_qubit_sperner():
    c = copekit.discrete_qubit(copekit.generic_directions(5))
    assert copekit.rank(c) == 4
    w = copekit.sperner_submatrix(c)
    assert w["m"] == 10 and w["factor_span_lower_bound"] == 5
    assert copekit.certify(c).verdict == "Contextual"


def test_errors():
    with pytest.raises(copekit.ParseError):
        copekit.CopeMatrix.from_json("{")
    with pytest.raises(copekit.GuardExceeded):
        copekit.exhaustive_exists(copekit.spekkens(), 4)
    with pytest.raises(ValueError):
        copekit.restrict(copekit.spekkens(), [7], [0])
