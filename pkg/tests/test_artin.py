from itertools import combinations

import pytest

from artin import (LabeledGraph, abelianization_structure, artin_relator, classify_finite_type,
                   derived_generators_bound, finite_type_graph, free_quotient_obstruction,
                   free_quotient_partition, generalized_artin_certificate, inverted_relator_check,
                   odd_dihedral_derived, odd_spanning_tree, perfectness_structural_certificate,
                   standard_presentation)
from errors import InputError
from freegroup import FreeWord
from models import CoxeterFamily, TypeTag
from utils import load_graph, parse_word

FINITE_TYPES = ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8",
                "B2", "B3", "B4", "B5", "B6", "B7", "B8",
                "D4", "D5", "D6", "D7", "D8", "E6", "E7", "E8", "F4", "H3", "H4"]


def word(text):
    return parse_word(text, ["x", "y"])[0]


def test_graph_validation():
    with pytest.raises(InputError):
        LabeledGraph(["a"], [(0, 0, 3)])
    with pytest.raises(InputError):
        LabeledGraph(["a", "b"], [(0, 1, 2)])
    with pytest.raises(InputError):
        LabeledGraph(["a", "b"], [(0, 1, 3), (1, 0, 5)])
    with pytest.raises(InputError):
        LabeledGraph(["a", "a"])


def test_absent_pairs_carry_label_two():
    g = LabeledGraph(["a", "b", "c"], [(0, 1, 5)])
    assert g.label(1, 0) == 5
    assert g.label(0, 2) == 2


def test_artin_relator():
    assert artin_relator(0, 1, 3) == word("x y x y^-1 x^-1 y^-1")
    assert artin_relator(0, 1, 2) == word("x y x^-1 y^-1")


def test_standard_presentation(graph_path):
    g = load_graph(graph_path("A3"))
    assert len(standard_presentation(g, free_product=False).relators) == 3
    assert len(standard_presentation(g, free_product=True).relators) == 2
    assert standard_presentation(g, free_product=False).render()[0] == "s1 s2 s1 s2^-1 s1^-1 s2^-1"


@pytest.mark.parametrize("label", range(2, 10))
def test_inverting_generators_preserves_relators(label):
    assert inverted_relator_check(artin_relator(0, 1, label))


@pytest.mark.parametrize("name", FINITE_TYPES)
def test_classify_finite_type_fixtures(graph_path, name):
    tags = classify_finite_type(load_graph(graph_path(name)))
    assert [str(t) for t in tags] == [name]


@pytest.mark.parametrize("label, expected", [(3, "A2"), (4, "B2"), (5, "I2(5)"), (12, "I2(12)")])
def test_classify_dihedral(graph_path, label, expected):
    tags = classify_finite_type(load_graph(graph_path(f"I2_{label}")))
    assert [str(t) for t in tags] == [expected]


def test_classification_ignores_vertex_order(rng):
    for name in ("D6", "E7", "F4", "H4"):
        tag = TypeTag(family=CoxeterFamily(name[0]), parameter=int(name[1:]))
        g = finite_type_graph(tag)
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert classify_finite_type(g.permuted(perm)) == [tag]


def test_reducible_and_infinite_types(graph_path):
    g = LabeledGraph(["a", "b", "c", "d"], [(0, 1, 3), (2, 3, 5)])
    assert [str(t) for t in classify_finite_type(g)] == ["A2", "I2(5)"]
    assert classify_finite_type(load_graph(graph_path("triangle"))) is None
    assert classify_finite_type(LabeledGraph(["a", "b", "c"], [(0, 1, 4), (1, 2, 4)])) is None


@pytest.mark.parametrize("name, rank", [("A4", 1), ("B3", 2), ("F4", 2), ("B2", 2), ("I2_5", 1),
                                        ("two_isolated", 2), ("triangle", 1)])
def test_abelianization_rank(graph_path, name, rank):
    assert abelianization_structure(load_graph(graph_path(name))).rank == rank


def test_abelianization_images_share_odd_components(graph_path):
    m = abelianization_structure(load_graph(graph_path("B3")))
    assert m.images == ((1, 0), (1, 0), (0, 1))


@pytest.mark.parametrize("name, bound", [("A4", 6), ("I2_5", 4), ("H3", 6), ("triangle", 4), ("B3", None)])
def test_derived_generators_bound(graph_path, name, bound):
    assert derived_generators_bound(load_graph(graph_path(name))) == bound


def test_odd_spanning_tree_prefers_small_labels():
    g = LabeledGraph(["a", "b", "c"], [(0, 1, 3), (1, 2, 3), (0, 2, 9)])
    tree = odd_spanning_tree(g)
    assert sorted(tuple(sorted(e)) for e in tree.edges()) == [(0, 1), (1, 2)]


@pytest.mark.parametrize("name, kind", [("A4", "A4"), ("H3", "H3"), ("A5", "A4"), ("A6", "A4"),
                                        ("A7", "A4"), ("A8", "A4"), ("D5", "A4"), ("D6", "A4"),
                                        ("D7", "A4"), ("D8", "A4"), ("E6", "A4"), ("E7", "A4"),
                                        ("E8", "A4"), ("H4", "H3"),
                                        ("odd_segment_3_5_7", "H3"), ("odd_segment_5_5_5", "odd-segment"),
                                        ("odd_segment_9_3_9", "odd-segment"), ("odd_segment_7_9_5", "odd-segment")])
def test_perfectness_certificate(graph_path, name, kind):
    certificate = perfectness_structural_certificate(load_graph(graph_path(name)), free_product=False)
    assert certificate is not None
    assert certificate.witness_kind == kind


@pytest.mark.parametrize("name", ["A3", "B3", "triangle", "I2_5", "A1"])
def test_no_perfectness_certificate(graph_path, name):
    assert perfectness_structural_certificate(load_graph(graph_path(name)), free_product=False) is None


def test_certificate_needs_commuting_non_edges(graph_path):
    assert perfectness_structural_certificate(load_graph(graph_path("A4")), free_product=True) is None


def test_certificate_render(graph_path):
    g = load_graph(graph_path("H3"))
    text = perfectness_structural_certificate(g, free_product=False).render(g.names)
    assert text == "tree [s1-s2, s2-s3], H3 witness s1-s2-s3"


def test_free_quotient_obstruction(graph_path):
    assert free_quotient_obstruction(load_graph(graph_path("star_5")), free_product=False) == 4
    assert free_quotient_obstruction(load_graph(graph_path("I2_7")), free_product=False) == 6
    assert free_quotient_obstruction(load_graph(graph_path("A3")), free_product=False) == 2
    # s1 and s4 commute at odd distance
    assert free_quotient_obstruction(load_graph(graph_path("A4")), free_product=False) is None
    assert free_quotient_obstruction(load_graph(graph_path("A4")), free_product=True) == 2
    assert free_quotient_obstruction(load_graph(graph_path("H3")), free_product=False) is None


def test_free_quotient_partition(graph_path):
    assert free_quotient_partition(load_graph(graph_path("star_5"))) == (["s1"], ["s2", "s3", "s4"])
    assert free_quotient_partition(load_graph(graph_path("B3"))) is None


def test_generalized_artin_certificate():
    assert generalized_artin_certificate(word("x y x"), word("y x y")) == 2
    assert generalized_artin_certificate(word("x y x y x"), word("y x y x y")) == 4


@pytest.mark.parametrize("v1, v2, message", [
    ("x y^-1 x", "y x y", "positive"),
    ("x y x", "y x", "lengths differ"),
    ("x y", "y x", "odd"),
    ("x y x", "x y x", "initial letters equal"),
    ("x y y", "y x y", "terminal letters equal"),
    ("x y y y y", "y x x x x", r"m\+1 times"),
])
def test_generalized_artin_certificate_rejects(v1, v2, message):
    with pytest.raises(InputError, match=message):
        generalized_artin_certificate(word(v1), word(v2))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_odd_dihedral_derived(m):
    dihedral = odd_dihedral_derived(m)
    assert dihedral.rank == 2 * m
    assert dihedral.left == list(range(1, 2 * m + 1, 2))
    assert dihedral.right == list(range(0, 2 * m + 1, 2))
    assert set(dihedral.relator.generators()) == set(range(2 * m + 1))


def test_odd_dihedral_rejects_small_m():
    with pytest.raises(InputError):
        odd_dihedral_derived(0)


def test_random_presentations_are_inversion_symmetric(rng):
    for _ in range(50):
        n = rng.randint(2, 5)
        edges = [(u, v, rng.choice([3, 4, 5, 6, 7])) for u, v in combinations(range(n), 2) if rng.random() < 0.5]
        g = LabeledGraph([f"v{k}" for k in range(n)], edges)
        assert all(inverted_relator_check(r) for r in standard_presentation(g, free_product=False).relators)
