import pytest

from projlens.diagram import (
    Diagram,
    DiagramError,
    classify_shape,
    components,
    induced,
    is_diagram_automorphism,
    make_diagram,
    parse_family,
)
from projlens.roots import highest_root, longest_element, opposition, polar_type, positive_roots

ADE = [("A", r) for r in range(1, 10)] + [("D", r) for r in range(4, 10)] + [("E", r) for r in (6, 7, 8)]
N_POSITIVE = {"E": {6: 36, 7: 63, 8: 120}}


def n_pos(fam, r):
    if fam == "A":
        return r * (r + 1) // 2
    if fam == "D":
        return r * (r - 1)
    return N_POSITIVE["E"][r]


@pytest.mark.parametrize("fam,r", ADE)
def test_positive_root_count_and_longest_length(fam, r):
    d = make_diagram(fam, r)
    assert len(positive_roots(d)) == n_pos(fam, r)
    assert len(longest_element(d)) == n_pos(fam, r)


@pytest.mark.parametrize("fam,r", ADE)
def test_opposition_is_involutive_automorphism(fam, r):
    d = make_diagram(fam, r)
    op = opposition(d)
    assert all(op[op[i]] == i for i in d.nodes)
    assert is_diagram_automorphism(d, op)


def test_opposition_values():
    assert opposition(make_diagram("A", 5)) == {1: 5, 2: 4, 3: 3, 4: 2, 5: 1}
    assert opposition(make_diagram("D", 5))[4] == 5
    assert all(k == v for k, v in opposition(make_diagram("D", 6)).items())
    e6 = opposition(make_diagram("E", 6))
    assert (e6[1], e6[3], e6[2], e6[4]) == (6, 5, 2, 4)
    for r in (7, 8):
        assert all(k == v for k, v in opposition(make_diagram("E", r)).items())


def test_highest_root_e8():
    # coefficients in Bourbaki labelling
    assert highest_root(make_diagram("E", 8)) == (2, 3, 4, 6, 5, 4, 3, 2)


def test_polar_types():
    for r in range(2, 10):
        assert polar_type(make_diagram("A", r)) == {1, r}
    for r in range(4, 10):
        assert polar_type(make_diagram("D", r)) == {2}
    assert [polar_type(make_diagram("E", r)) for r in (6, 7, 8)] == [{2}, {1}, {8}]


def test_reducible_opposition_componentwise():
    e7 = make_diagram("E", 7)
    sub = induced(e7, [1, 3, 5, 6, 7])
    assert [sorted(c) for c in components(sub)] == [[1, 3], [5, 6, 7]]
    assert opposition(sub) == {1: 3, 3: 1, 5: 7, 6: 6, 7: 5}


def test_classify_shape_of_residues():
    fam, r, _ = classify_shape(induced(make_diagram("E", 8), [1, 2, 3, 4, 5]))
    assert (fam, r) == ("D", 5)
    fam, r, _ = classify_shape(induced(make_diagram("D", 6), [3, 4, 5, 6]))
    assert (fam, r) == ("D", 4)


def test_json_round_trip():
    d = make_diagram("E", 7)
    assert Diagram.from_json(d.to_json()) == d


def test_parse_family_and_errors():
    assert parse_family("e7") == ("E", 7)
    assert parse_family("D", 5) == ("D", 5)
    for bad in [("E", 9), ("D", 3), ("X", 4), ("A", 0)]:
        with pytest.raises(DiagramError):
            make_diagram(*bad)
    with pytest.raises(DiagramError):
        parse_family("E")
    with pytest.raises(DiagramError):
        Diagram((1, 2), frozenset({(1, 3)}))
