import pytest
from hypothesis import given
from hypothesis import strategies as st

from parity_descents import sieve
from parity_descents.exactalg import ONE, ZERO, V, q_factorial
from parity_descents.sieve import Composition, PositionSubset, alpha_A, alpha_B_plus, code, decode, sieve_poly

x, q = V("x"), V("q")


def test_code_examples():
    assert code(PositionSubset(3, (1,))).parts == (1, 2)
    assert code(PositionSubset(5)).parts == (5,)
    assert code(PositionSubset(4, (2, 3))).parts == (2, 1, 1)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=6))
def test_code_decode_bijection(parts):
    comp = Composition(tuple(parts))
    assert code(decode(comp)) == comp


@pytest.mark.parametrize("n", range(1, 7))
def test_decode_code_identity(n):
    for S in sieve.subsets(n):
        assert decode(code(S)) == S


def test_subset_validation():
    with pytest.raises(ValueError):
        PositionSubset(3, (2, 1))
    with pytest.raises(ValueError):
        PositionSubset(3, (3,))
    with pytest.raises(ValueError):
        Composition((2, 0))


def test_alpha_examples():
    assert alpha_A(PositionSubset(3, (1,)), "brute") == ONE + q + q**2
    assert alpha_A(PositionSubset(3, (1,)), "closed") == ONE + q + q**2
    assert alpha_A(PositionSubset(5), "brute") == ONE
    assert alpha_A(PositionSubset(3, (1, 2)), "brute") == q_factorial(3)
    assert alpha_B_plus(PositionSubset(2, (1,)), "brute") == 4
    assert alpha_B_plus(PositionSubset(2), "brute") == 1
    for n in range(1, 6):
        assert alpha_B_plus(PositionSubset(n), "closed") == 1


@pytest.mark.parametrize("n", range(1, 8))
def test_alpha_brute_matches_closed(n):
    for S in sieve.subsets(n):
        assert alpha_A(S, "brute") == alpha_A(S, "closed")
        assert alpha_B_plus(S, "brute") == alpha_B_plus(S, "closed")


def test_alpha_bad_mode():
    with pytest.raises(ValueError):
        alpha_A(PositionSubset(2), "fast")


def test_sieve_poly_examples():
    assert sieve_poly(2, "A") == ONE + (ONE + q) * x
    assert sieve_poly(2, "B_plus") == ONE + 4 * x
    assert sieve_poly(1, "A") == ONE
    with pytest.raises(ValueError):
        sieve_poly(2, "C")


def test_block_coefficients():
    h = sieve.block_lhs("H", 4, "one")
    assert h[2] == 4 + 8 * x  # t^2/2! coefficient; as a plain t^2 coefficient this is 2 + 4x
    assert sieve.block_lhs("L", 3, "one")[1] == ONE
    c = sieve.block_lhs("C", 3, "generic")
    assert c[3] == ONE + (ONE + q + q**2) * x
    assert c[3] == sieve_poly(3, "A").substitute_zero("y")


def test_block_series_errors():
    with pytest.raises(ValueError):
        sieve.block_series("G", 4, "generic")
    with pytest.raises(ValueError):
        sieve.block_series("B", 0, "one")
    with pytest.raises(ValueError):
        sieve.block_series("Q", 4, "one")


def test_hyperbolic_helpers():
    ch = sieve.cosh_alpha(x, 4, scale=2)
    assert [ch[n] for n in range(5)] == [ONE, ZERO, 4 * x, ZERO, 16 * x**2]
    sh = sieve.sinh_alpha_over_a(x, 3)
    assert [sh[n] for n in range(4)] == [ZERO, ONE, ZERO, x]


def test_frobenius_small():
    assert sieve.frobenius_rhs(3) == ONE + 4 * x + x**2
    assert [sieve.stirling2(4, k) for k in range(5)] == [0, 1, 7, 6, 1]
