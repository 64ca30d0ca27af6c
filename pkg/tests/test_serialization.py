from fractions import Fraction as F

import pytest

from boxworld.serialization import (
    SpecError,
    dump_system_spec,
    functional_from_json,
    functional_to_json,
    map_from_json,
    map_to_json,
    parse_system_spec,
    state_from_json,
    state_to_json,
    table_from_json,
    table_to_json,
    vrep_to_csv,
)
from boxworld.bell import chsh_functional
from boxworld.states import pr_box_state, pr_box_table
from boxworld.transforms import build_hybrid_cnot

from conftest import HYBRID, ONE_GBIT, TRIT_PAIR


@pytest.mark.parametrize(
    "text, expected",
    [
        ('{"sites":[{"outcomes":[2,2]}]}', ONE_GBIT),
        ('{"sites":[{"outcomes":[2,2]},{"outcomes":[2]}]}', HYBRID),
        ('{"sites":[{"outcomes":[3,3]}]}', TRIT_PAIR),
    ],
)
def test_parse_examples(text, expected):
    assert parse_system_spec(text) == expected
    assert parse_system_spec(dump_system_spec(expected)) == expected


@pytest.mark.parametrize(
    "text, field, line",
    [
        ('{"sites":[{"outcomes":[2,1]}]}', "sites[0].outcomes[1]", None),
        ('{"sites":[{"outcomes":[]}]}', "sites[0].outcomes", None),
        ('{"sites":[]}', "sites", None),
        ('{"sites":[{"outcomes":[2, "x"]}]}', "sites[0].outcomes[1]", None),
        ('{"sites":\n[{"outcomes":[2,2]},\n]}', None, 3),
    ],
)
def test_parse_errors_locate_the_problem(text, field, line):
    with pytest.raises(SpecError) as info:
        parse_system_spec(text)
    assert info.value.field == field
    assert info.value.line == line


def test_table_round_trip():
    T = pr_box_table()
    assert table_from_json(table_to_json(T)) == T


def test_functional_round_trip():
    c = chsh_functional().coefficients
    assert functional_from_json(functional_to_json(c)) == c


def test_state_round_trip():
    s = pr_box_state()
    data = state_to_json(s)
    assert data["basis"] == "canonical-v1"
    assert all(isinstance(x, str) for x in data["values"])
    assert state_from_json(data) == s
    with pytest.raises(SpecError):
        state_from_json({"vals": []})


def test_map_round_trip():
    T = build_hybrid_cnot()
    assert map_from_json(map_to_json(T)) == T
    with pytest.raises(SpecError):
        map_from_json({"matrix": [[1]], "basis": "other"})


def test_csv(two_gbit_vertices):
    rows = vrep_to_csv(two_gbit_vertices).splitlines()
    assert rows[0].split(",")[:3] == ["index", "class", "v0"]
    assert len(rows) == 25
    assert sum(r.split(",")[1] == "pure-product" for r in rows[1:]) == 16
    assert F(rows[1].split(",")[2]) in (0, 1, F(1, 2))
