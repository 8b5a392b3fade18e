from dataclasses import replace
from itertools import combinations

import pytest

from artin import LabeledGraph, abelianization_structure, standard_presentation
from errors import InputError, UnsupportedError
from homology import (build_chain, combine, derived_abelianization, format_vector, interreduce, kernel_basis_d1,
                      kernel_coordinates, membership_search, quotient_structure, tower_rank)
from laurent import LaurentPoly
from utils import load_graph, parse_poly
from zlinalg import IntegerMatrix, cokernel_structure


def poly(text, variables=("s",)):
    return parse_poly(text, list(variables))


def run_fixture(graph_path, name, free_product=False, window=None):
    g = load_graph(graph_path(name))
    return derived_abelianization(standard_presentation(g, free_product), abelianization_structure(g), window)


def random_graph(rng):
    n = rng.randint(2, 4)
    edges = [(u, v, rng.choice([3, 4, 5, 6, 7])) for u, v in combinations(range(n), 2) if rng.random() < 0.6]
    return LabeledGraph([f"v{k}" for k in range(n)], edges)


def test_chain_condition_and_kernel_on_random_graphs(rng):
    checked = 0
    while checked < 200:
        g = random_graph(rng)
        m = abelianization_structure(g)
        if m.rank > 2:
            continue
        chain = build_chain(standard_presentation(g, free_product=False), m)
        zero = LaurentPoly.zero(chain.rank)
        for row in chain.d2:
            assert sum((a * b for a, b in zip(row, chain.d1)), zero).is_zero
        kernel = kernel_basis_d1(chain)
        assert len(kernel) == g.n - 1
        for vector in kernel:
            assert sum((a * b for a, b in zip(vector, chain.d1)), zero).is_zero
        for row in chain.d2:
            assert combine(kernel_coordinates(row, kernel), kernel) == row
        checked += 1


def test_chain_rejects_mismatched_map(graph_path):
    g = load_graph(graph_path("A3"))
    other = abelianization_structure(load_graph(graph_path("A4")))
    with pytest.raises(InputError):
        build_chain(standard_presentation(g, free_product=False), other)


def test_kernel_needs_rank_two_or_less():
    g = LabeledGraph(["a", "b", "c"])
    chain = build_chain(standard_presentation(g, free_product=False), abelianization_structure(g))
    with pytest.raises(UnsupportedError):
        kernel_basis_d1(chain)


def test_membership_search_finds_monomial_multiplier():
    found = membership_search([LaurentPoly.one(1)], [[poly("s^2")]], window=3)
    assert found == [poly("s^-2")]


def test_membership_search_is_inconclusive_outside_window():
    assert membership_search([LaurentPoly.one(1)], [[poly("s^8")]], window=6) is None
    assert membership_search([LaurentPoly.one(1)], [[poly("s^8")]], window=8) == [poly("s^-8")]


def test_membership_search_respects_integrality():
    assert membership_search([LaurentPoly.one(1)], [[poly("2")]], window=2) is None


def test_membership_search_combines_rows():
    rows = [[poly("1 - s"), poly("0")], [poly("s"), poly("1 - s + s^2")]]
    target = [poly("1 + s - s^2"), poly("1 - s + s^2")]
    found = membership_search(target, rows, window=2)
    assert found is not None
    assert combine(found, rows) == target


def test_membership_search_rejects_negative_window():
    with pytest.raises(InputError):
        membership_search([LaurentPoly.one(1)], [[LaurentPoly.one(1)]], window=-1)


@pytest.mark.parametrize("name", ["A4", "H3"])
def test_kernel_generators_lie_in_image_within_default_window(graph_path, name):
    run = run_fixture(graph_path, name)
    for j in range(len(run.kernel)):
        target = [LaurentPoly.one(1) if k == j else LaurentPoly.zero(1) for k in range(len(run.kernel))]
        assert membership_search(target, run.relations, window=6) is not None


@pytest.mark.parametrize("coeffs, rank", [({0: 1, 1: -2, 3: 1}, 3), ({0: -1, 2: 5, 4: 1}, 4),
                                           ({-1: 1, 0: 1, 1: 1}, 2)])
def test_tower_rank_of_unit_extremal_polynomial(coeffs, rank):
    structure = tower_rank([LaurentPoly.univariate(coeffs, 0, 1)], 1)
    assert structure.is_free_finite
    assert structure.rank == rank
    assert structure.torsion == []


def windowed_quotient(f, width):
    """Z^[-width, width] modulo the shifts of f that stay inside the window"""
    lo, hi = f.degree_bounds(0)
    shifts = range(-width - lo, width - hi + 1)
    matrix = IntegerMatrix(2 * width + 1, len(shifts))
    for column, e in enumerate(shifts):
        for (k,), c in f.terms.items():
            matrix[k + e + width, column] = c
    return cokernel_structure(matrix)


def test_tower_rank_random_unit_extremal(rng):
    for _ in range(100):
        span = rng.randint(1, 6)
        coeffs = {k: rng.randint(-4, 4) for k in range(1, span)}
        coeffs[0], coeffs[span] = rng.choice([1, -1]), rng.choice([1, -1])
        f = LaurentPoly.univariate(coeffs, 0, 1)
        structure = tower_rank([f], 1)
        assert (structure.kind, structure.rank, structure.torsion) == ("free_finite", span, [])
        windowed = windowed_quotient(f, 4 * span)
        assert (windowed.rank, windowed.torsion) == (structure.rank, structure.torsion)


def test_interreduce_recovers_simple_generators():
    st = ("s", "t")
    rows = [[poly("1 + s^2 - s*t", st)], [poly("1 + s^2*t - s*t^2", st)]]
    assert interreduce(rows, [0], 10) == [[poly("1 - s + s^2", st)], [poly("1 - t", st)]]


def test_tower_rank_interreduces_mixed_generators():
    st = ("s", "t")
    structure = tower_rank([poly("1 + s^2 - s*t", st), poly("1 + s^2*t - s*t^2", st)], 2)
    assert (structure.kind, structure.rank) == ("free_finite", 2)
    assert "ideal generators interreduced by monomial multiples" in structure.certificate


def test_tower_rank_special_cases():
    assert tower_rank([poly("2 - 3*s")], 1).is_countably_infinite
    assert tower_rank([poly("2")], 1).is_countably_infinite
    assert tower_rank([], 2).is_countably_infinite
    assert tower_rank([poly("-s^3")], 1).is_trivial
    torsion = tower_rank([poly("1 - s"), poly("3")], 1)
    assert (torsion.rank, torsion.torsion) == (0, [3])


def test_tower_rank_two_variables():
    st = ("s", "t")
    structure = tower_rank([poly("1 - s + s^2", st), poly("1 - t", st)], 2)
    assert (structure.kind, structure.rank) == ("free_finite", 2)


def test_tower_rank_needs_rank_two_or_less():
    with pytest.raises(UnsupportedError):
        tower_rank([LaurentPoly.one(3)], 3)


@pytest.mark.parametrize("name, kind, rank", [
    ("A1", "trivial", 0),
    ("A3", "free_finite", 2),
    ("A4", "trivial", 0),
    ("B3", "free_finite", 4),
    ("I2_5", "free_finite", 4),
    ("I2_6", "countably_infinite", 0),
    ("two_isolated", "trivial", 0),
])
def test_small_corpus(graph_path, name, kind, rank):
    structure = run_fixture(graph_path, name).structure
    assert (structure.kind, structure.rank) == (kind, rank)
    assert structure.torsion == []


def test_free_product_convention_changes_isolated_pair(graph_path):
    assert run_fixture(graph_path, "two_isolated", free_product=True).structure.is_countably_infinite


def test_structure_certificate_records_reduction(graph_path):
    structure = run_fixture(graph_path, "A3").structure
    assert structure.certificate[0] == "3 relations on 2 kernel generators"
    assert any("R/(" in line for line in structure.certificate)


@pytest.mark.parametrize("name", ["A3", "A4", "B3", "F4", "D4", "B4"])
def test_quotient_structure_survives_row_operations(graph_path, rng, name):
    g = load_graph(graph_path(name))
    chain = build_chain(standard_presentation(g, free_product=False), abelianization_structure(g))
    kernel = kernel_basis_d1(chain)
    baseline = quotient_structure(chain, kernel)
    assert not baseline.is_unknown
    for _ in range(3):
        rows = [list(row) for row in chain.d2]
        rng.shuffle(rows)
        for _ in range(5):
            i, j = rng.sample(range(len(rows)), 2)
            exps = [0] * chain.rank
            exps[rng.randrange(chain.rank)] = rng.randint(-2, 2)
            shift = LaurentPoly.monomial(exps)
            rows[i] = [a + shift * b for a, b in zip(rows[i], rows[j])]
        mixed = quotient_structure(replace(chain, d2=rows), kernel)
        assert (mixed.kind, mixed.rank, mixed.torsion) == (baseline.kind, baseline.rank, baseline.torsion)


def test_format_vector():
    vector = [poly("1"), poly("0"), poly("-1"), poly("1 - s")]
    assert format_vector(vector, ["u1", "u2", "u3", "u4"], 1) == "u1 + -u3 + (1 - s)*u4"
