from math import factorial

import pytest

from parity_descents import perm_core
from parity_descents.exactalg import ONE, V, parse
from parity_descents.perm_core import (
    FamilyId,
    Permutation,
    SignedPermutation,
    brute_distribution,
    distribution,
    enumerate_perms,
    euler_number,
    involution,
    stat_profile,
)

x, y, q = V("x"), V("y"), V("q")
x0, x1, y0, y1 = V("x0"), V("x1"), V("y0"), V("y1")


def test_enumerate_counts():
    assert len(list(enumerate_perms(3, "S"))) == 6
    for n in range(1, 6):
        assert len(list(enumerate_perms(n, "B"))) == 2**n * factorial(n)
        assert len(list(enumerate_perms(n, "B_plus"))) == 2 ** (n - 1) * factorial(n)
        assert len(list(enumerate_perms(n, "B_minus"))) == 2 ** (n - 1) * factorial(n)


def test_enumerate_b2_listing():
    got = {w.values for w in enumerate_perms(2, "B")}
    assert got == {(1, 2), (2, 1), (-1, 2), (-2, 1), (2, -1), (1, -2), (-1, -2), (-2, -1)}


def test_up_down_four():
    got = {str(w) for w in enumerate_perms(4, "UpDown")}
    assert got == {"1324", "1423", "2314", "2413", "3412"}


def test_enumerate_errors():
    with pytest.raises(ValueError):
        list(enumerate_perms(0, "S"))
    with pytest.raises(ValueError):
        list(enumerate_perms(3, "D"))


def test_type_invariants():
    with pytest.raises(ValueError):
        Permutation((1, 1))
    with pytest.raises(ValueError):
        SignedPermutation((1, -1))


def test_stat_examples():
    s = stat_profile(Permutation.of("21"))
    assert (s.des1, s.des0, s.asc1, s.inv, s.lpk) == (1, 0, 0, 1, 1)
    s = stat_profile(SignedPermutation((-1, 2)))
    assert (s.des0, s.asc1) == (1, 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_type_a_position_counts(n):
    for w in enumerate_perms(n, "S"):
        s = stat_profile(w)
        assert s.des0 + s.asc0 == (n - 1) // 2
        assert s.des1 + s.asc1 == n // 2
        assert s.altdes == s.des1 + s.asc0


@pytest.mark.parametrize("n", range(1, 8))
def test_type_b_position_counts(n):
    for w in enumerate_perms(n, "B"):
        s = stat_profile(w)
        assert s.des0 + s.asc0 == (n + 1) // 2
        assert s.des1 + s.asc1 == n // 2


def test_involutions():
    assert involution(Permutation.of("132"), "complement") == Permutation.of("312")
    assert involution(SignedPermutation((2, -1)), "negate") == SignedPermutation((-2, 1))
    for w in enumerate_perms(3, "B"):
        assert involution(involution(w, "negate"), "negate") == w
    with pytest.raises(ValueError):
        involution(SignedPermutation((1,)), "complement")
    with pytest.raises(ValueError):
        involution(Permutation.of("12"), "negate")


@pytest.mark.parametrize("n", range(1, 7))
def test_complement_swaps_descents(n):
    for w in enumerate_perms(n, "S"):
        s, c = stat_profile(w), stat_profile(involution(w, "complement"))
        assert (s.des0, s.des1) == (c.asc0, c.asc1)


@pytest.mark.parametrize("n", range(1, 6))
def test_negate_exchanges_signs(n):
    for w in enumerate_perms(n, "B_plus"):
        m = involution(w, "negate")
        assert m.values[0] < 0
        s, t = stat_profile(w), stat_profile(m)
        assert s.des1 + t.des1 == n // 2
        assert s.des0 + t.des0 == (n + 1) // 2


def test_distribution_examples():
    assert distribution(2, FamilyId.A) == ONE + q * x
    assert distribution(2, FamilyId.B) == ONE + 3 * x + 3 * y + x * y
    assert distribution(4, FamilyId.E) == q + 2 * q**2 + q**3 + q**4
    assert distribution(2, FamilyId.P_A) == x1 + q * y1


@pytest.mark.parametrize("family", list(FamilyId))
def test_kernel_distribution_matches_brute(family):
    for n in range(1, 6):
        assert distribution(n, family) == brute_distribution(n, family), (family, n)


@pytest.mark.parametrize("n", range(1, 9))
def test_updown_is_specialised_p(n):
    spec = distribution(n, FamilyId.P_A).subs(x0=0, x1=1, y0=1, y1=0)
    assert distribution(n, FamilyId.E) == spec
    assert distribution(n, FamilyId.E).subs(q=1).constant_term() == euler_number(n)
    assert euler_number(n) == sum(1 for _ in enumerate_perms(n, "UpDown"))


def test_euler_numbers():
    assert [euler_number(n) for n in range(1, 10)] == [1, 1, 2, 5, 16, 61, 272, 1385, 7936]


def test_unknown_family():
    with pytest.raises(ValueError):
        distribution(3, "Z")
    with pytest.raises(ValueError):
        distribution(0, FamilyId.A)


def test_disk_cache_round_trip(tmp_path):
    perm_core.set_cache_dir(tmp_path)
    try:
        p = distribution(4, FamilyId.B)
        path = tmp_path / "B" / "4.poly"
        assert path.exists()
        assert parse(path.read_text()) == p
        assert perm_core.cached_files() == [path]
        distribution.cache_clear()
        assert distribution(4, FamilyId.B) == p  # served from disk
    finally:
        perm_core.set_cache_dir(None)


def test_jobs_do_not_change_results():
    perm_core.set_cache_dir(None)
    for family in (FamilyId.P_A, FamilyId.PB):
        assert distribution(6, family, jobs=1) == distribution(6, family, jobs=3)
