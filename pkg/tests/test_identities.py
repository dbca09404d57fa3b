import pytest

from parity_descents import identities as I
from parity_descents.exactalg import ONE, ZERO, QSeries, V

x, y, q = V("x"), V("y"), V("q")


def test_catalog_ids_unique():
    ids = I.all_ids()
    assert len(ids) == len(set(ids))
    for identity in ids:
        assert I.get_spec(identity).id == identity


def test_rhs_examples():
    (num, _), = I.rhs_series("B1", 2)
    assert num[0] == ZERO
    (num, _), = I.rhs_series("CS_Q", 1, "generic")
    assert num[1] == ONE
    (_, den), = I.rhs_series("ANDRE_Q", 2, "generic")
    assert [den[n] for n in range(3)] == [ONE, ZERO, -ONE]


def test_lhs_examples():
    assert I.lhs_series("B1", 4)[0][2] == ONE + 3 * x + 3 * y + x * y
    assert I.lhs_series("ANDRE_Q", 4, "generic")[0][4] == q + 2 * q**2 + q**3 + q**4
    che = I.lhs_series("CHEBIKIN", 1)[0]
    assert (che[0], che[1]) == (ONE, x)


def test_verify_examples():
    assert I.verify("B1", 4, "one").status == "pass"
    assert I.verify("STANLEY_Q", 4, "generic").status == "pass"
    assert I.verify("CS_Q", 2, "one").status == "pass"


def test_cs_generic_record():
    r = I.verify("CS_Q", 2, "generic")
    assert r.status == "fail" and r.first_mismatch.n == 2
    x1, y1 = V("x1"), V("y1")
    assert r.first_mismatch.lhs == x1 + q * y1
    assert r.first_mismatch.rhs == x1 + y1


def test_stanley_c2_by_hand():
    lhs = I.lhs_series("STANLEY_Q", 2, "generic")[0]
    assert lhs[2] == x * (ONE + q * x)  # x * A_2(x, x, q)
    (num, den), = I.rhs_series("STANLEY_Q", 2, "generic")
    assert (lhs * den)[2] == num[2] == ZERO


@pytest.mark.parametrize("identity", sorted(I.SERIES_BUILDERS))
def test_series_check_is_sensitive(identity):
    """Perturbing one numerator coefficient must be caught at exactly that index."""
    qmode = I.SPECS[identity].required_qmode()
    N = 5
    eqs = I.SERIES_BUILDERS[identity](N, qmode)
    assert I._check_series(identity, eqs, N, qmode).status == "pass"
    lhs, num, den = eqs[0]
    bumped = QSeries(num.order, num.coeffs[:N] + (num.coeffs[N] + x * y,), num.qmode)
    r = I._check_series(identity, [(lhs, bumped, den), *eqs[1:]], N, qmode)
    assert r.status == "fail" and r.first_mismatch.n == N


def test_verify_errors():
    with pytest.raises(ValueError):
        I.verify("NOPE", 4)
    with pytest.raises(ValueError):
        I.verify("B1", 1)
    with pytest.raises(ValueError):
        I.verify("B1", 4, "generic")
    with pytest.raises(ValueError):
        I.verify("ANDRE_Q", 4, "q")
    with pytest.raises(ValueError):
        I.rhs_series("NOPE", 3)


def test_plan_has_required_and_recorded():
    tasks = I.plan(["CS_Q", "B1"])
    assert [(t.id, t.qmode, t.scope) for t in tasks] == [
        ("CS_Q", "one", "required"),
        ("CS_Q", "generic", "recorded"),
        ("B1", "one", "required"),
    ]
    assert I.plan(["B1"], nmax_b=5)[0].nmax == 5


def test_serial_parallel_agree():
    tasks = I.plan(["CS_Q", "KEY3", "SYM_U", "FIG1"], nmax_a=6, nmax_b=5)
    strip = lambda rs: [{k: v for k, v in r.to_json().items() if k != "elapsed_ms"} for r in rs]
    assert strip(I.run_catalog(tasks, jobs=1)) == strip(I.run_catalog(tasks, jobs=2))


def test_summarize_separates_scopes():
    reports = I.run_catalog(I.plan(["PZ1"], nmax_a=4))
    s = I.summarize(reports)
    assert [r["qmode"] for r in s["required"]] == ["one"]
    assert [r["qmode"] for r in s["recorded"]] == ["generic"]
    assert s["summary"]["all_required_pass"]
