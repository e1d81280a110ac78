from fractions import Fraction

import pytest

from src.core.errors import InputError
from src.services.signspace import (
    conj,
    conj_index,
    eval_product,
    from_row,
    index_of,
    positive_half,
    signvec,
    times,
)


def test_index_encoding():
    assert signvec(9, 106).coords == (1, 1, -1, -1, 1, -1, 1, -1, 1)
    assert str(signvec(9, 106)) == "ε106=(+,+,-,-,+,-,+,-,+)"
    assert signvec(9, 255).coords == (1,) + (-1,) * 8
    assert signvec(9, 0).coords == (1,) * 9


def test_index_of_inverts_coordinates():
    for index in (0, 21, 106, 255, 300, 511):
        epsilon = signvec(9, index)
        assert index_of(epsilon.coords) == index
        assert from_row(epsilon.as_row()) == epsilon


def test_positive_half():
    half = positive_half(9)
    assert len(half) == 256
    assert all(signvec(9, i).in_positive_half for i in half)
    assert not signvec(9, 256).in_positive_half


def test_conjugate_keeps_first_coordinate():
    assert conj(signvec(9, 0)).index == 255
    assert conj_index(9, 21) == 234
    for index in (3, 94, 200):
        epsilon = signvec(9, index)
        partner = conj(epsilon)
        assert partner.coords[0] == epsilon.coords[0]
        assert all(x == -y for x, y in zip(partner.coords[1:], epsilon.coords[1:]))
        assert conj(partner) == epsilon


def test_group_product_is_xor():
    x, y = signvec(9, 106), signvec(9, 21)
    assert times(x, y).index == 106 ^ 21
    assert (x * x).index == 0
    assert all(a * b == c for a, b, c in zip(x.coords, y.coords, (x * y).coords))


def test_negation():
    assert (-signvec(9, 0)).index == 511
    assert (-signvec(9, 21)).coords == tuple(-c for c in signvec(9, 21).coords)


def test_eval_product():
    assert eval_product(signvec(3, 0), [1, 2, 3]) == 6
    assert eval_product(signvec(3, 1), [1, 2, 3]) == 0
    assert eval_product(signvec(2, 1), [Fraction(1, 2), Fraction(1, 3)]) == Fraction(1, 6)


def test_invalid_sign_vectors():
    with pytest.raises(InputError):
        signvec(9, 512)
    with pytest.raises(InputError):
        signvec(0, 0)
    with pytest.raises(InputError):
        signvec(17, 0)
    with pytest.raises(InputError):
        times(signvec(9, 1), signvec(8, 1))
    with pytest.raises(InputError):
        index_of([1, 0])
    with pytest.raises(InputError):
        eval_product(signvec(3, 0), [1, 2])


@pytest.mark.parametrize("n,index", [(9, 256), (9, 300), (9, -1), (3, 4), (0, 0)])
def test_conj_index_rejects_indices_outside_positive_half(n, index):
    with pytest.raises(InputError):
        conj_index(n, index)


def test_conj_index_edges():
    assert conj_index(9, 0) == 255
    assert conj_index(9, 255) == 0
    assert conj_index(1, 0) == 0
