import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parity_descents.exactalg import (
    ONE,
    VARIABLES,
    IdentityReport,
    InconsistencyError,
    Mismatch,
    MultiPoly,
    QSeries,
    V,
    cross_check,
    parse,
    q_binomial,
    q_factorial,
    q_multinomial,
    q_numbers,
    series_ops,
)

x, y, q = V("x"), V("y"), V("q")


# -- strategies ---------------------------------------------------------------

small_exps = st.lists(st.integers(0, 3), min_size=len(VARIABLES), max_size=len(VARIABLES))
polys = st.lists(st.tuples(small_exps, st.integers(-20, 20)), max_size=5).map(MultiPoly.from_exponents)
q_polys = st.lists(st.tuples(st.integers(0, 3), st.integers(-5, 5)), max_size=3).map(
    lambda items: sum((MultiPoly.monomial(c, x=e) for e, c in items), MultiPoly())
)


def series(order, qmode):
    return st.lists(q_polys, min_size=order + 1, max_size=order + 1).map(
        lambda cs: QSeries(order, tuple(cs), qmode)
    )


# -- polynomials ---------------------------------------------------------------

def test_poly_examples():
    assert (ONE + x) * (ONE - x) == ONE - x**2
    assert (ONE + 3 * x + 3 * y + x * y).substitute_zero("y") == ONE + 3 * x
    assert (ONE + q * x).coeff_of("q", 1) == x


def test_unknown_variable_rejected():
    with pytest.raises(ValueError):
        V("z")
    with pytest.raises(ValueError):
        x.substitute_zero("z")
    with pytest.raises(ValueError):
        x.coeff_of("w", 1)


def test_negative_power_rejected():
    with pytest.raises(ValueError):
        x ** -1


def test_no_stored_zeros():
    p = (x + y) - y
    assert p == x
    assert len(p) == 1


def test_render_format():
    assert (ONE + q * x).render() == "1 + 1*q*x"
    assert MultiPoly().render() == "0"
    assert (x - ONE).render() == "-1 + 1*x"
    assert (V("x0") ** 2 * V("y1")).render() == "1*x0^2*y1"


def test_parse_examples():
    assert parse("1 + 1*q*x") == ONE + q * x
    assert parse("0") == MultiPoly()
    assert parse("-3*x^2*y + 7") == 7 - 3 * x**2 * y


def test_subs_and_reflect():
    p = ONE + 2 * x * y + y**2
    assert p.subs(y=x) == ONE + 3 * x**2
    assert p.subs(y=1) == 2 + 2 * x
    assert p.reflect("y", 2) == y**2 + 2 * x * y + ONE


def test_reflect_degree_too_small():
    with pytest.raises(ValueError):
        (y**3).reflect("y", 2)


def test_divexact_tripwire():
    assert ((ONE + y) * (x + y)).divexact(ONE + y) == x + y
    with pytest.raises(InconsistencyError):
        (ONE + x + y).divexact(ONE + y)


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == MultiPoly()


@settings(max_examples=100, deadline=None)
@given(polys)
def test_text_round_trip(p):
    assert parse(p.render()) == p


# -- q-numbers ------------------------------------------------------------------

def test_q_number_examples():
    assert q_factorial(2) == ONE + q
    assert q_multinomial(3, (1, 2)) == ONE + q + q**2
    assert q_binomial(5, 0) == ONE
    assert q_numbers("factorial", 3) == (ONE + q) * (ONE + q + q**2)
    assert q_numbers("binomial", 4, 2) == ONE + q + 2 * q**2 + q**3 + q**4


def test_q_multinomial_bad_composition():
    with pytest.raises(ValueError):
        q_multinomial(3, (1, 1))
    with pytest.raises(ValueError):
        q_multinomial(3, (0, 3))


# -- series -------------------------------------------------------------------

def test_t_squared_generic():
    t = QSeries.build(2, "generic", lambda n: 1 if n == 1 else 0)
    assert (t * t)[2] == ONE + q


def test_scale_by_zero():
    f = QSeries.build(3, "generic", lambda n: x**n)
    assert f.scale(0) == QSeries.zero(3, "generic")


def test_mixed_qmode_rejected():
    f = QSeries.build(2, "generic", lambda n: 1)
    g = QSeries.build(2, "one", lambda n: 1)
    with pytest.raises(ValueError):
        f * g
    with pytest.raises(ValueError):
        series_ops(f, g, "add")


def test_q_forbidden_at_one():
    with pytest.raises(ValueError):
        QSeries.build(2, "one", lambda n: q)


@settings(max_examples=40, deadline=None)
@given(series(4, "generic"), series(4, "generic"), series(4, "generic"))
def test_series_product_laws(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)


@settings(max_examples=40, deadline=None)
@given(series(5, "one"), series(5, "one"))
def test_q_one_product_is_egf_product(f, g):
    from math import comb

    prod = f * g
    for n in range(6):
        assert prod[n] == sum((f[m] * g[n - m] * comb(n, m) for m in range(n + 1)), MultiPoly())


@settings(max_examples=40, deadline=None)
@given(series(4, "generic"), series(4, "generic"))
def test_generic_product_specialises_to_q_one(f, g):
    lift = lambda s: QSeries(s.order, tuple(c.subs(q=1) for c in s.coeffs), "one")
    assert lift(f * g) == lift(f) * lift(g)


@settings(max_examples=40, deadline=None)
@given(series(4, "generic"), series(4, "generic"))
def test_cross_check_trivial_identity(f, g):
    assert cross_check(f, f * g, g).status == "pass"


def test_cross_check_reports_first_mismatch():
    f = QSeries.build(3, "one", lambda n: 1)
    g = QSeries.constant(1, 3, "one")
    bad = QSeries.build(3, "one", lambda n: 1 if n < 2 else 2)
    r = cross_check(f, bad, g, "demo")
    assert r.status == "fail" and r.first_mismatch.n == 2


# -- reports -------------------------------------------------------------------

def test_report_invariant():
    with pytest.raises(ValueError):
        IdentityReport("X", 3, "one", "pass", Mismatch(1, ONE, x))
    with pytest.raises(ValueError):
        IdentityReport("X", 3, "one", "fail", None)


def test_report_json_round_trip():
    r = IdentityReport("X", 3, "generic", "fail", Mismatch(2, ONE + q * y, ONE + y), 1.5)
    obj = r.to_json()
    assert set(obj) == {"id", "nmax", "qmode", "status", "first_mismatch", "elapsed_ms"}
    assert obj["first_mismatch"] == {"n": 2, "lhs": "1 + 1*q*y", "rhs": "1 + 1*y"}
    assert IdentityReport.from_json(obj) == r
