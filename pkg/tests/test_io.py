import json

import pytest

from slantsum import Monomial, SchemaError, builder_paper_examples
from slantsum.io import (half_from_json, half_to_json, load_point, load_theory,
                         monomial_from_json, monomial_to_json, point_from_json, point_to_json,
                         theory_from_json, theory_to_json)
from examples43 import build

A3 = {"vertices": ["1", "2", "3"], "arrows": [["1", "2"], ["2", "3"]],
      "v": {"1": 1, "2": 2, "3": 1}, "w": {"1": 0, "2": 1, "3": 0}, "theta": "+1"}


def test_theory_round_trip_is_identity_on_canonical_files():
    assert theory_to_json(theory_from_json(A3)) == A3
    mixed = dict(A3, theta={"1": 1, "2": -1, "3": 1})
    assert theory_to_json(theory_from_json(mixed)) == mixed


def test_point_round_trip(a3_point):
    obj = point_to_json(a3_point)
    assert point_to_json(point_from_json(obj)) == obj
    assert point_from_json(obj) == a3_point
    *_, pb = build()
    obj = point_to_json(pb)
    assert point_from_json(json.loads(json.dumps(obj))) == pb


def test_half_integers_serialize_as_strings():
    assert half_to_json(3) == "3/2" and half_to_json(4) == 2
    assert half_from_json("3/2") == 3 and half_from_json(2) == 4 and half_from_json("-1/2") == -1
    m = Monomial.h(3) * Monomial.a("1.2", 1)
    assert monomial_to_json(m) == {"a": {"1.2.1": 1}, "hbar": "3/2", "sign": 1}
    assert monomial_from_json(monomial_to_json(m)) == m


def test_dotted_vertex_labels_split_on_last_dot():
    m = monomial_from_json({"a": {"1.2.1": 1}, "hbar": 0})
    assert m == Monomial.a("1.2", 1)


@pytest.mark.parametrize("bad", [
    dict(A3, v={"9": 1}),
    dict(A3, arrows=[["1", "1"]]),
    dict(A3, theta="+2"),
    {k: v for k, v in A3.items() if k != "w"},
    dict(A3, extra=1),
    dict(A3, v={"1": -1}),
])
def test_schema_errors(bad):
    with pytest.raises(SchemaError):
        theory_from_json(bad)


def test_point_errors(a3_point):
    obj = point_to_json(a3_point)
    wrong = json.loads(json.dumps(obj))
    wrong["characters"]["2"][0]["a"] = {"7.1": 1}
    with pytest.raises(SchemaError):
        point_from_json(wrong)
    short = json.loads(json.dumps(obj))
    short["characters"]["2"].pop()
    with pytest.raises(SchemaError):
        point_from_json(short)
    neg = json.loads(json.dumps(obj))
    neg["characters"]["1"][0]["hbar"] = -1
    with pytest.raises(SchemaError):
        point_from_json(neg)
    with pytest.raises(SchemaError):
        monomial_from_json({"a": {"1.1": 1}, "hbar": "1/3"})


def test_files_with_relative_theory_paths(tmp_path, a3_point):
    (tmp_path / "a3.json").write_text(json.dumps(A3))
    (tmp_path / "pt.json").write_text(json.dumps(point_to_json(a3_point, "a3.json")))
    assert load_theory(tmp_path / "a3.json") == a3_point.theory
    assert load_point(tmp_path / "pt.json") == a3_point
    (tmp_path / "broken.json").write_text("{")
    with pytest.raises(SchemaError):
        load_theory(tmp_path / "broken.json")


def test_slant_sum_point_survives_serialization():
    p = builder_paper_examples("D4")
    assert point_from_json(point_to_json(p)) == p
