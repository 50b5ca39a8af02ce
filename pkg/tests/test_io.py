import json
import math

import pytest

from domcore.errors import InputError, ParseError
from domcore.io import (
    dump_json,
    read_communities,
    read_relations,
    write_communities,
    write_removals,
)


def test_communities_round_trip(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("# comment\n3 1 2\n\n10\t9\n")
    cs = read_communities(path)
    assert cs.sets == [frozenset({1, 2, 3}), frozenset({9, 10})]
    out = tmp_path / "out.txt"
    write_communities(out, cs.sets)
    assert out.read_text() == "1\t2\t3\n9\t10\n"


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        read_communities(tmp_path / "nope.txt")


def test_relations(tmp_path):
    path = tmp_path / "r.txt"
    path.write_text("1\tA\n2\tA\n")
    assert read_relations(path) == [(1, "A"), (2, "A")]
    path.write_text("1\tA\n2\n")
    with pytest.raises(ParseError) as exc:
        read_relations(path)
    assert exc.value.line == 2


def test_removals_csv(tmp_path):
    path = tmp_path / "r.csv"
    write_removals(path, [(5, 1, 1), ("x", 2, 3)])
    assert path.read_text() == "removed_id,dominator_id,iteration\n5,1,1\nx,2,3\n"


def test_json_is_stable_and_finite():
    text = dump_json({"b": math.inf, "a": [1.5, math.nan], "c": {2: 1}})
    assert json.loads(text) == {"a": [1.5, None], "b": None, "c": {"2": 1}}
    assert text == dump_json({"c": {2: 1}, "a": [1.5, math.nan], "b": math.inf})
