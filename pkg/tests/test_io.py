import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knapga import Instance, ParseError, format_instance, parse_instance, parse_instances
from knapga.io import bundled_path, format_instances, read_instance, read_instances

MINIMAL = "2 1 0  10 6  2 3  4"


def test_minimal_instance():
    inst = parse_instance(MINIMAL, name="mini")
    assert (inst.n, inst.m) == (2, 1)
    assert inst.profits.tolist() == [10, 6]
    assert inst.weights.tolist() == [[2, 3]]
    assert inst.capacities.tolist() == [4]
    assert inst.best_known is None
    assert inst.name == "mini"


def test_round_trip_minimal():
    inst = parse_instance(MINIMAL, name="mini")
    assert parse_instance(format_instance(inst), name="mini").same_data(inst)


def test_best_known_header():
    inst = parse_instance("2 1 16\n10 6\n2 3\n4\n")
    assert inst.best_known == 16


def test_multi_instance_file():
    text = "2\n" + MINIMAL + "\n" + "3 2 7\n1 2 3\n1 1 1\n2 0 1\n2 2\n"
    insts = parse_instances(text, name="set")
    assert [i.name for i in insts] == ["set-00", "set-01"]
    assert insts[1].weights.tolist() == [[1, 1, 1], [2, 0, 1]]
    assert insts[1].best_known == 7
    assert parse_instance(text, name="set", index=1).same_data(insts[1])
    with pytest.raises(ValueError):
        parse_instance(text)


def test_bundled_multi_instance_round_trip():
    path = bundled_path("small20x5.txt")
    insts = read_instances(path)
    assert len(insts) == 3
    assert all((i.n, i.m) == (20, 5) and i.best_known for i in insts)
    text = path.read_text()
    assert format_instances(insts) == text
    again = parse_instances(format_instances(insts), name="small20x5")
    assert all(a.same_data(b) for a, b in zip(insts, again))


def test_bundled_single_instance():
    inst = read_instance(bundled_path("gen30x100.txt"))
    assert (inst.n, inst.m) == (100, 30)
    assert inst.name == "gen30x100"
    assert format_instance(inst) == bundled_path("gen30x100.txt").read_text()


@pytest.mark.parametrize(
    "text, line, column, fragment",
    [
        ("", 1, 1, "empty"),
        ("2 1 0\n10 x\n2 3\n4", 2, 4, "expected integer profit"),
        ("2 1 0\n10 6\n2 3\n4 9", 4, 3, "trailing"),
        ("2 1 0\n0 6\n2 3\n4", 2, 1, "profit"),
        ("2 1 0\n10 6\n2 -3\n4", 3, 3, "weight"),
        ("0 1 0\n", 1, 1, "item count"),
        ("100000 100000 0\n1", 1, 1, "exceed"),
        ("2 1 0\n10 6\n2 3\n", 4, 1, "end of input"),
    ],
)
def test_parse_errors_are_positioned(text, line, column, fragment):
    with pytest.raises(ParseError) as err:
        parse_instances(text)
    assert (err.value.line, err.value.column) == (line, column)
    assert fragment in str(err.value)


@pytest.mark.parametrize("name", ["small20x5.txt", "gen30x100.txt"])
def test_every_truncation_fails_cleanly(name):
    text = bundled_path(name).read_text()
    # Character offsets just after each token.
    ends = [i for i in range(1, len(text)) if not text[i - 1].isspace() and text[i].isspace()]
    assert len(ends) > 50
    for end in ends[:-1]:
        with pytest.raises(ParseError):
            parse_instances(text[:end])


def test_truncation_of_minimal():
    tokens = MINIMAL.split()
    for k in range(len(tokens)):
        with pytest.raises(ParseError):
            parse_instances(" ".join(tokens[:k]))


instances = st.tuples(st.integers(1, 8), st.integers(1, 4)).flatmap(
    lambda nm: st.tuples(
        st.lists(st.integers(1, 10**6), min_size=nm[0], max_size=nm[0]),
        st.lists(
            st.lists(st.integers(0, 10**6), min_size=nm[0], max_size=nm[0]),
            min_size=nm[1], max_size=nm[1],
        ),
        st.lists(st.integers(0, 10**7), min_size=nm[1], max_size=nm[1]),
        st.integers(0, 10**6),
    )
)


@settings(max_examples=200)
@given(instances)
def test_round_trip_property(data):
    profits, weights, caps, best = data
    inst = Instance(profits, weights, caps, name="x", best_known=best or None)
    again = parse_instance(format_instance(inst), name="x")
    assert again.same_data(inst)
    assert np.array_equal(again.weights_t, inst.weights_t)
