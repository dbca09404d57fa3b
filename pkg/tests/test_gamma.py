import pytest

from parity_descents import gamma as G
from parity_descents.exactalg import ONE, V
from parity_descents.perm_core import FamilyId, SignedPermutation, distribution
from parity_descents.trees import andre_tables

x, y = V("x"), V("y")


def test_expand_examples():
    a3 = ONE + 2 * x + 2 * y + x * y
    assert distribution(3, FamilyId.ATILDE) == a3
    assert G.expand(a3, 1, "SYM").coeffs == (1, 2)
    assert G.expand(a3, 1, "GAMMA").coeffs == (1, 1)
    assert G.expand(ONE, 0, "SYM").coeffs == (1,)
    assert G.expand(ONE, 0, "GAMMA").coeffs == (1,)


def test_expand_not_representable():
    with pytest.raises(G.ExpansionError):
        G.expand(x, 1, "SYM")
    with pytest.raises(G.ExpansionError):
        G.expand(x**3, 1, "GAMMA")
    with pytest.raises(ValueError):
        G.expand(V("q") * x, 1, "SYM")
    with pytest.raises(ValueError):
        G.expand(x, 1, "BOTH")


def test_count_table_examples():
    assert G.count_table(3, "a").values == (1, 2)
    assert G.count_table(3, "abar").values == (2, 1)
    assert G.count_table(2, "g").values == (1, 1)
    assert G.count_table(2, "gbar").values == (3, 1)
    with pytest.raises(ValueError):
        G.count_table(3, "h")


def test_type_b_two_by_hand():
    assert distribution(2, FamilyId.BTILDE) == ONE + 3 * x + 3 * y + x * y
    assert distribution(2, FamilyId.BBAR) == 3 + x + y + 3 * x * y
    for identity in ("U_GAMMA", "V_GAMMA"):
        assert G.verify_gamma(identity, 2).status == "pass"
    assert G.verify_gamma("GAMMA_SUN", 3).status == "pass"


@pytest.mark.parametrize(
    "family,kind,nmax",
    [(FamilyId.ATILDE, "a", 9), (FamilyId.ABAR, "abar", 9), (FamilyId.BTILDE, "b", 7), (FamilyId.BBAR, "bbar", 7)],
)
def test_sym_expansions_match_brute_tables(family, kind, nmax):
    for n in range(1, nmax + 1):
        exp = G.expand(distribution(n, family), n // 2, "SYM")
        assert exp.coeffs == G.count_table(n, kind).values
        assert min(exp.coeffs) >= 0


@pytest.mark.parametrize("n", range(1, 10))
def test_gamma_expansions_type_a(n):
    t = andre_tables(n)
    assert G.expand(distribution(n, FamilyId.ATILDE), n // 2, "GAMMA").coeffs == t.d
    alt = tuple((-1) ** i * v for i, v in enumerate(t.dbar))
    assert G.expand(distribution(n, FamilyId.ABAR), n // 2, "GAMMA").coeffs == alt


@pytest.mark.parametrize("n", range(1, 8))
def test_gamma_expansions_type_b(n):
    g, gb = G.count_table(n, "g").values, G.count_table(n, "gbar").values
    assert G.expand(distribution(n, FamilyId.BTILDE), n // 2, "GAMMA").coeffs == tuple(v * 2**j for j, v in enumerate(g))
    assert G.expand(distribution(n, FamilyId.BBAR), n // 2, "GAMMA").coeffs == tuple(
        v * (-2) ** j for j, v in enumerate(gb)
    )


def test_abar_is_reversed_a():
    for n in range(1, 10):
        assert G.count_table(n, "abar").values == tuple(reversed(G.count_table(n, "a").values))


@pytest.mark.parametrize("identity", sorted(G.PAIR_BUILDERS))
def test_gamma_catalog(identity):
    from parity_descents.identities import default_nmax

    assert G.verify_gamma(identity, default_nmax(identity)).status == "pass"


def test_process_a_examples():
    imgs = {w.values for w in G.process_a_images((2, 1), 1)}
    assert imgs == {(2, 1), (2, -1)}
    assert G.process_a((1, 2), (), {1}) == SignedPermutation((1, -2))
    total = sum(len(G.process_a_images(u, 1)) for u in [(1, 2), (2, 1)])
    assert total == 3 == G.count_table(2, "b").values[1]


def test_process_a_preconditions():
    with pytest.raises(ValueError):
        G.process_a((2, 1), (), ())
    with pytest.raises(ValueError):
        G.process_a((1, 2), (), {2})
    with pytest.raises(ValueError):
        G.process_a((1, 3), (), ())


@pytest.mark.parametrize("n", range(1, 6))
def test_process_a_exhaustive(n):
    ok, why = G.check_process_a(n)
    assert ok, why


@pytest.mark.parametrize("n", range(1, 7))
def test_l1_bound(n):
    ok, why = G.check_l1(n)
    assert ok, why


def test_b_counts_from_gamma_counts():
    from math import comb

    for n in range(1, 8):
        m, g = n // 2, G.count_table(n, "g").values
        b = tuple(sum(comb(m - i, j - i) * g[i] * 2**i for i in range(j + 1)) for j in range(m + 1))
        assert b == G.count_table(n, "b").values


def test_triangle_csv():
    text = G.triangle_csv("g", 4)
    assert text.splitlines() == ["n,0,1,2", "1,1,,", "2,1,1,", "3,1,5,", "4,1,18,5"]
