import itertools

import numpy as np
import pytest

from hypothesis import given

from source.misc.errors import CapExceeded, DomainError, LengthMismatch, NotBijective
from source.model.permutation import (CCF, Cycle, Parity, Permutation, compose_cycles, cycle_product, cycles_of,
                                      extend_with_line, from_images, parity, to_ccf)

from strategies import permutations


def test_from_images_identity():
    p = from_images(2, [0, 1, 2, 3])
    assert p.is_identity()
    assert p == Permutation.identity(2)


def test_from_images_swap():
    p = from_images(2, [0, 1, 3, 2])
    assert p(2) == 3 and p(3) == 2
    assert p.moved_points() == 2


@pytest.mark.parametrize('images', [[0, 0, 1, 2], [0, 1, 2, 4], [0, 1, 2, -1]])
def test_from_images_not_bijective(images):
    with pytest.raises(NotBijective):
        from_images(2, images)


def test_from_images_length_mismatch():
    with pytest.raises(LengthMismatch):
        from_images(2, [0, 1, 2])


def test_from_images_cap():
    with pytest.raises(CapExceeded):
        from_images(4, list(range(16)), cap=3)


def test_images_are_read_only():
    p = from_images(2, [0, 1, 3, 2])
    with pytest.raises(ValueError):
        p.images[0] = 1


def test_to_ccf_examples():
    assert len(to_ccf(Permutation.identity(3))) == 0
    assert str(to_ccf(Permutation.identity(3))) == '()'
    assert to_ccf(from_images(2, [0, 1, 3, 2])).cycles == (Cycle((2, 3)),)
    assert to_ccf(from_images(2, [1, 2, 0, 3])).cycles == (Cycle((0, 1, 2)),)


def test_parity_examples():
    assert parity(Permutation.identity(2)) is Parity.EVEN
    assert parity(from_images(2, [0, 1, 3, 2])) is Parity.ODD
    assert parity(from_images(2, [1, 2, 0, 3])) is Parity.EVEN


def test_cycle_product_two_transpositions():
    p = cycle_product([Cycle((1, 2)), Cycle((1, 4))], 3)
    assert to_ccf(p).cycles == (Cycle((1, 2, 4)),)


def test_cycle_product_five_cycle_from_three_factors():
    p = cycle_product([Cycle((1, 2)), Cycle((1, 3)), Cycle((1, 4, 5))], 3)
    assert to_ccf(p).cycles == (Cycle((1, 2, 3, 4, 5)),)


def test_cycle_product_single_factor():
    assert cycle_product([Cycle((0, 1, 2))], 2).tolist() == [1, 2, 0, 3]


def test_compose_cycles_matches_dense_product():
    factors = [Cycle((1, 2)), Cycle((1, 4))]
    assert compose_cycles(factors) == {1: 2, 2: 4, 4: 1}
    assert cycles_of(compose_cycles(factors)) == [Cycle((1, 2, 4))]


def test_extend_with_line_examples():
    assert extend_with_line(Permutation.identity(2)) == Permutation.identity(3)

    swap = extend_with_line(from_images(2, [0, 1, 3, 2]))
    assert swap.n == 3
    assert to_ccf(swap).cycles == (Cycle((2, 3)), Cycle((6, 7)))
    assert parity(swap) is Parity.EVEN

    rot = extend_with_line(from_images(2, [1, 2, 0, 3]))
    assert to_ccf(rot).cycles == (Cycle((0, 1, 2)), Cycle((4, 5, 6)))


def test_extend_with_line_cap():
    with pytest.raises(CapExceeded):
        extend_with_line(Permutation.identity(3), cap=3)


def test_cycle_validation():
    with pytest.raises(DomainError):
        Cycle((1,))
    with pytest.raises(DomainError):
        Cycle((1, 2, 1))
    with pytest.raises(DomainError):
        Cycle((-1, 2))


def test_cycle_canonical_forms():
    c = Cycle((3, 1, 2))
    assert c.canonical() == Cycle((1, 2, 3))
    assert c.same_as(Cycle((2, 3, 1)))
    assert not c.same_as(Cycle((1, 3, 2)))
    assert c.image(3) == 1 and c.image(9) == 9
    assert c.inverse().same_as(Cycle((1, 3, 2)))


def test_ccf_rejects_overlap():
    with pytest.raises(DomainError):
        CCF.from_cycles(3, [Cycle((0, 1)), Cycle((1, 2))])


@given(permutations(max_n=7))
def test_ccf_reproduces_permutation(p):
    ccf = to_ccf(p)
    assert cycle_product(ccf.cycles, p.n) == p
    assert ccf.to_permutation() == p


@given(permutations(max_n=7))
def test_ccf_is_canonical(p):
    ccf = to_ccf(p)
    seen = set()
    for c in ccf.cycles:
        assert c.elems[0] == min(c.elems)
        assert seen.isdisjoint(c.elems)
        assert all(p(a) != a for a in c.elems)
        seen.update(c.elems)
    assert [c.elems[0] for c in ccf.cycles] == sorted(c.elems[0] for c in ccf.cycles)
    assert CCF.from_cycles(p.n, ccf.cycles) == ccf


@given(permutations(max_n=7))
def test_extension_is_even(p):
    assert parity(extend_with_line(p, cap=None)) is Parity.EVEN


@given(permutations(max_n=6))
def test_parity_matches_inversion_count(p):
    images = p.tolist()
    inversions = sum(1 for i, j in itertools.combinations(range(p.size), 2) if images[i] > images[j])
    expected = Parity.ODD if inversions % 2 else Parity.EVEN
    assert parity(p) is expected


@given(permutations(max_n=6))
def test_inverse_composition(p):
    assert p.then(p.inverse()).is_identity()
    assert p.inverse().then(p) == Permutation.identity(p.n)


def test_permutation_hash_and_equality():
    a = Permutation(2, np.array([0, 1, 3, 2]))
    b = from_images(2, [0, 1, 3, 2])
    assert a == b and hash(a) == hash(b)
    assert a != Permutation.identity(2)
