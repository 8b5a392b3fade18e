from math import gcd

import pytest

from errors import InputError
from freegroup import (AbMap, FreeWord, GroupRingElem, abelianize, abelianized_fox, exponent_sums,
                       fox_derivative, nielsen_normalize, normalize_two_gen_basis, word_ops)


def random_word(rng, ngens=2, syllables=12):
    return FreeWord((rng.randrange(ngens), rng.choice([-3, -2, -1, 1, 2, 3]))
                    for _ in range(rng.randint(0, syllables)))


def x(e=1):
    return FreeWord.generator(0, e)


def y(e=1):
    return FreeWord.generator(1, e)


def test_free_reduction():
    assert (x() * y() * y(-1) * x(-1)).is_identity
    w = FreeWord([(0, 2), (0, -1), (1, 1)])
    assert w.syllables == ((0, 1), (1, 1))
    assert len(FreeWord([(0, -3), (1, 2)])) == 5
    assert FreeWord([(0, -2)]).letters() == [(0, -1), (0, -1)]


def test_cyclic_reduction_and_conjugacy():
    assert (x() * y(2) * x(-1)).cyclic_reduce() == y(2)
    w = x() * y() * x(-1) * y(-1)
    assert w.is_cyclic_conjugate(y() * x(-1) * y(-1) * x())
    assert not w.is_cyclic_conjugate(w.inverse())


def test_word_ops():
    assert word_ops(x(), y(), "concat") == x() * y()
    assert word_ops(x() * y(), None, "invert") == y(-1) * x(-1)
    with pytest.raises(InputError):
        word_ops(x(), None, "rotate")


def test_exponent_sums():
    w = x(3) * y(-1) * x(-1)
    assert exponent_sums(w, 2) == [2, -1]
    with pytest.raises(InputError):
        w.exponent_sums(1)


def test_fox_derivative_of_commutator():
    w = x() * y() * x(-1) * y(-1)
    expected = GroupRingElem.one() - GroupRingElem.from_word(x() * y() * x(-1))
    assert fox_derivative(w, 0) == expected


def test_fox_product_rule(rng):
    for _ in range(1000):
        u, v = random_word(rng), random_word(rng)
        gen = rng.randrange(2)
        assert fox_derivative(u * v, gen) == fox_derivative(u, gen) + u * fox_derivative(v, gen)


def test_fundamental_identity(rng):
    for _ in range(1000):
        w = random_word(rng, ngens=3)
        total = GroupRingElem.zero()
        for gen in range(3):
            total = total + fox_derivative(w, gen) * (GroupRingElem.from_word(FreeWord.generator(gen))
                                                      - GroupRingElem.one())
        assert total == GroupRingElem.from_word(w) - GroupRingElem.one()


def test_abelianized_fox_matches_group_ring(rng):
    m = AbMap(rank=2, images=((1, 0), (0, 1), (1, 0)))
    for _ in range(200):
        w = random_word(rng, ngens=3)
        for gen in range(3):
            assert abelianized_fox(w, gen, m) == abelianize(fox_derivative(w, gen), m)


def test_ab_map_rejects_bad_images():
    with pytest.raises(InputError):
        AbMap(rank=2, images=((1, 0), (1,)))
    with pytest.raises(InputError):
        AbMap(rank=1, images=((1,),)).image(3)


def test_nielsen_normalize_random(rng):
    for _ in range(300):
        w = random_word(rng)
        change = nielsen_normalize(w)
        s0, s1 = w.exponent_sums(2)
        assert change.divisor == gcd(s0, s1)
        assert change.relator.exponent_sums(2) == [change.divisor, 0]
        basis = list(change.basis)
        assert [word.substitute(basis) for word in change.old_in_new] == [x(), y()]
        assert change.relator.substitute(basis) == w


def test_normalize_two_gen_basis():
    w = FreeWord([(1, 1), (0, 2), (1, 2), (0, 1), (1, -3), (0, -2)])
    (a, t), relator = normalize_two_gen_basis(w)
    assert relator.exponent_sums(2) == [1, 0]
    assert relator == w
    with pytest.raises(InputError):
        normalize_two_gen_basis(x(2) * y(4))
    with pytest.raises(InputError):
        normalize_two_gen_basis(FreeWord.generator(2))
