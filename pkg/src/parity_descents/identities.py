"""Identity catalog: left sides from enumeration, right sides as numerator/denominator series.

Every rational generating-function identity ``lhs = num / den`` is checked in
the cleared form ``lhs * den == num`` coefficient by coefficient. Odd powers
of ``a = sqrt(alpha)`` only ever occur as ``sinh(a t) / a``, which is realised
as the alpha-power series, so all coefficients stay polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from . import sieve
from .exactalg import (
    ONE,
    ZERO,
    IdentityReport,
    Mismatch,
    MultiPoly,
    QSeries,
    Timer,
    V,
    compare_pairs,
)
from .perm_core import FamilyId, distribution

x, y, q = V("x"), V("y"), V("q")
x0, x1, y0, y1 = V("x0"), V("x1"), V("y0"), V("y1")
ALPHA_XY = (ONE - x) * (ONE - y)
ALPHA_4 = (y0 - x0) * (y1 - x1)

# scope labels
GENERIC = "generic"  # required at generic q
Q_ONE = "one"  # required at q = 1 (q-free families, or q = 1 by nature)
Q1_RECORDED = "q1_required+generic_recorded"


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    qscope: str
    family_class: str  # "plain" or "signed": selects the default bound
    kind: str  # "series", "poly" or "check"
    description: str
    group: str = "identities"

    def required_qmode(self) -> str:
        return "generic" if self.qscope == GENERIC else "one"

    def recorded_qmodes(self) -> tuple[str, ...]:
        return ("generic",) if self.qscope == Q1_RECORDED else ()


def _spec_q(p: MultiPoly, qmode: str) -> MultiPoly:
    return p.subs(q=1) if qmode == "one" else p


def _family_series(family: FamilyId, N: int, qmode: str, parity: int | None = None,
                   const: MultiPoly | int = 0, factor: MultiPoly = ONE,
                   transform: Callable[[MultiPoly], MultiPoly] | None = None) -> QSeries:
    def coeff(n: int):
        if n == 0:
            return const
        if parity is not None and n % 2 != parity:
            return ZERO
        p = _spec_q(distribution(n, family), qmode)
        if transform is not None:
            p = transform(p)
        return p * factor

    return QSeries.build(N, qmode, coeff)


def _c(poly: MultiPoly | int, N: int, qmode: str) -> QSeries:
    return QSeries.constant(poly, N, qmode)


def _even_alpha_block(alpha: MultiPoly, N: int, qmode: str) -> QSeries:
    """``sum_{n>=1} alpha^{n-1} t^{2n} / (2n)!_q``."""
    return QSeries.build(N, qmode, lambda n: alpha ** (n // 2 - 1) if n >= 2 and n % 2 == 0 else ZERO)


def _odd_alpha_block(alpha: MultiPoly, N: int, qmode: str) -> QSeries:
    """``sum_{n>=1} alpha^{n-1} t^{2n-1} / (2n-1)!_q``."""
    return QSeries.build(N, qmode, lambda n: alpha ** (n // 2) if n % 2 else ZERO)


def _trig(N: int, qmode: str, scale: MultiPoly = ONE) -> tuple[QSeries, QSeries]:
    """``(cos(s t), sin(s t))`` with the q-factorial normalisation."""
    cos = QSeries.build(N, qmode, lambda n: scale**n * (-1) ** (n // 2) if n % 2 == 0 else ZERO)
    sin = QSeries.build(N, qmode, lambda n: scale**n * (-1) ** (n // 2) if n % 2 else ZERO)
    return cos, sin


# ---------------------------------------------------------------------------
# series identities: each builder returns a list of (lhs, num, den) equations
# ---------------------------------------------------------------------------

Equation = tuple[QSeries, QSeries, QSeries]


def _carlitz_scoville(family: FamilyId, alpha: MultiPoly, first: MultiPoly, second: MultiPoly,
                      N: int, qmode: str) -> list[Equation]:
    c2 = _even_alpha_block(alpha, N, qmode)
    s1 = _odd_alpha_block(alpha, N, qmode)
    num = c2.scale(first) + s1
    den = _c(ONE, N, qmode) - c2.scale(second)
    return [(_family_series(family, N, qmode), num, den)]


def _eq_cs(N, qmode):
    return _carlitz_scoville(FamilyId.P_A, ALPHA_4, x1 + y1, x0 * y1 + x1 * y0, N, qmode)


def _eq_pz1(N, qmode):
    return _carlitz_scoville(FamilyId.A, ALPHA_XY, ONE + x, x + y, N, qmode)


def _eq_pz2(N, qmode):
    return _carlitz_scoville(FamilyId.AHAT, -ALPHA_XY, ONE + x, ONE + x * y, N, qmode)


def _eq_andre(N, qmode):
    cos, sin = _trig(N, qmode)
    lhs = _family_series(FamilyId.E, N, qmode, const=1)
    return [(lhs, sin + _c(ONE, N, qmode), cos)]


def _eq_stanley(N, qmode):
    lhs = _family_series(FamilyId.A, N, qmode, const=1, factor=x, transform=lambda p: p.subs(y=x))
    den = QSeries.build(N, qmode, lambda n: ONE - x if n == 0 else -x * (ONE - x) ** n)
    return [(lhs, _c(ONE - x, N, qmode), den)]


def _eq_cf(N, qmode):
    lhs = _family_series(FamilyId.P_A, N, "one", transform=lambda p: p.subs(x0=y, x1=y, y0=x, y1=x))
    num = QSeries.build(N, "one", lambda n: x**n - y**n)
    den = QSeries.build(N, "one", lambda n: x * y**n - y * x**n)
    return [(lhs, num, den)]


def _eq_chebikin(N, qmode):
    cos, sin = _trig(N, "one", ONE - x)
    lhs = _family_series(FamilyId.ALT_A, N, "one", const=1, factor=x)
    num = cos.scale(ONE - x)
    den = cos - _c(x, N, "one") - sin.scale(x)
    return [(lhs, num, den)]


def _type_b_even(family: FamilyId, alpha, cross, plain, N) -> Equation:
    ch2 = sieve.cosh_alpha(alpha, N, scale=2)
    num = ch2.scale(cross) + sieve.cosh_alpha(alpha, N).scale(alpha) - _c(plain, N, "one")
    den = _c(plain, N, "one") - ch2.scale(cross)
    return (_family_series(family, N, "one", parity=0), num, den)


def _type_b_odd(family: FamilyId, alpha, prefactor, cross, plain, N) -> Equation:
    ch2 = sieve.cosh_alpha(alpha, N, scale=2)
    num = sieve.sinh_alpha_over_a(alpha, N).scale(prefactor)
    den = _c(plain, N, "one") - ch2.scale(cross)
    return (_family_series(family, N, "one", parity=1), num, den)


def _eq_b1(N, qmode):
    return [_type_b_even(FamilyId.B, ALPHA_XY, x + y, ONE + x * y, N)]


def _eq_b2(N, qmode):
    return [_type_b_odd(FamilyId.B, ALPHA_XY, (y * y - ONE) * (x - ONE), x + y, ONE + x * y, N)]


def _eq_z1(N, qmode):
    # same shape as B1 with alpha -> -alpha and the roles of (x+y), (1+xy) exchanged
    return [_type_b_even(FamilyId.BHAT, -ALPHA_XY, ONE + x * y, x + y, N)]


def _eq_z2(N, qmode):
    return [_type_b_odd(FamilyId.BHAT, -ALPHA_XY, (ONE + y) * (-ALPHA_XY), ONE + x * y, x + y, N)]


def _eq_tb3e(N, qmode):
    return [_type_b_even(FamilyId.PB, ALPHA_4, x0 * y1 + x1 * y0, x0 * x1 + y0 * y1, N)]


def _eq_tb3o(N, qmode):
    return [_type_b_odd(FamilyId.PB, ALPHA_4, (y0 * y0 - x0 * x0) * (y1 - x1), x0 * y1 + x1 * y0, x0 * x1 + y0 * y1, N)]


def _eq_typeb_euler(N, qmode):
    lhs = _family_series(FamilyId.B, N, "one", const=1, transform=lambda p: p.subs(y=x))
    num = QSeries.build(N, "one", lambda n: (x - ONE) ** (n + 1))
    den = QSeries.build(N, "one", lambda n: x - ONE if n == 0 else -((2 * (x - ONE)) ** n))
    return [(lhs, num, den)]


def _eq_p6(N, qmode):
    cos, sin = _trig(N, "one", ONE - x)
    lhs = _family_series(FamilyId.ALT_B, N, "one", const=1)
    den = cos.scale(x - ONE) + sin.scale(x + ONE)
    return [(lhs, _c(x - ONE, N, "one"), den)]


# -- sieve-level series identities -------------------------------------------

def _eq_key2c(N, qmode):
    num, den = sieve.block_series("C", N, qmode)
    return [(sieve.block_lhs("C", N, qmode), num, den)]


def _eq_key2b_proof(N, qmode):
    num, den = sieve.block_series("B", N, qmode)
    return [(sieve.block_lhs("B", N, qmode), num, den)]


def _eq_key2b_printed(N, qmode):
    num, den = sieve.block_series("B_printed", N, qmode)
    return [(sieve.block_lhs("B_printed", N, qmode), num, den)]


def _sieve_series(family: str, N: int, qmode: str, parity: int) -> QSeries:
    return QSeries.build(
        N, qmode,
        lambda n: _spec_q(sieve.sieve_poly(n, family), qmode) if n and n % 2 == parity else ZERO,
    )


def _eq_key3(N, qmode):
    nb, db = sieve.block_series("B", N, qmode)
    nc, _ = sieve.block_series("C", N, qmode)
    den = db - nb.scale(y)
    return [
        (_sieve_series("A", N, qmode, 0), nb, den),
        (_sieve_series("A", N, qmode, 1), nc, den),
    ]


def _eq_gh(N, qmode):
    return [(sieve.block_lhs(k, N, "one"), *sieve.block_series(k, N, "one")) for k in ("G", "H")]


def _eq_fl(N, qmode):
    return [(sieve.block_lhs(k, N, "one"), *sieve.block_series(k, N, "one")) for k in ("F", "L")]


def _eq_gfq(N, qmode):
    ng, d = sieve.block_series("G", N, "one")
    nh, _ = sieve.block_series("H", N, "one")
    nf, _ = sieve.block_series("F", N, "one")
    nl, _ = sieve.block_series("L", N, "one")
    inner = d - nh.scale(y)
    even = (_sieve_series("B_plus", N, "one", 0), ng, inner)
    odd = (_sieve_series("B_plus", N, "one", 1), nl * inner + (nf * ng).scale(y), d * inner)
    return [even, odd]


def _bplus_blocks(N):
    ca = sieve.cosh_alpha(ALPHA_XY, N)
    c2a = sieve.cosh_alpha(ALPHA_XY, N, scale=2)
    sa = sieve.sinh_alpha_over_a(ALPHA_XY, N)
    unit = _c(ONE, N, "one")
    den = _c(ONE + x * y, N, "one") - c2a.scale(x + y)
    return ca, sa, unit, den


def _eq_bp12(N, qmode):
    ca, _, unit, den = _bplus_blocks(N)
    num = (ca - unit) * (ca.scale(2 * x) + _c(x + ONE, N, "one"))
    return [(_family_series(FamilyId.B_PLUS, N, "one", parity=0), num, den)]


def _eq_obp13(N, qmode):
    ca, sa, unit, den = _bplus_blocks(N)
    num = (sa * (ca.scale(2 * y) - _c(y + ONE, N, "one"))).scale(x - ONE)
    return [(_family_series(FamilyId.B_PLUS, N, "one", parity=1), num, den)]


def _eq_bp11(N, qmode):
    ca, _, unit, den = _bplus_blocks(N)
    num = ((ca - unit) * (ca.scale(2) + _c(x + ONE, N, "one"))).scale(y)
    return [(_family_series(FamilyId.B_MINUS, N, "one", parity=0), num, den)]


def _eq_obp14(N, qmode):
    ca, sa, unit, den = _bplus_blocks(N)
    num = (sa * (_c(y + ONE, N, "one") - ca.scale(2))).scale(y * (x - ONE))
    return [(_family_series(FamilyId.B_MINUS, N, "one", parity=1), num, den)]


SERIES_BUILDERS: dict[str, Callable[[int, str], list[Equation]]] = {
    "CS_Q": _eq_cs,
    "ANDRE_Q": _eq_andre,
    "PZ1": _eq_pz1,
    "PZ2": _eq_pz2,
    "STANLEY_Q": _eq_stanley,
    "CF": _eq_cf,
    "CHEBIKIN": _eq_chebikin,
    "B1": _eq_b1,
    "B2": _eq_b2,
    "TYPEB_EULER": _eq_typeb_euler,
    "Z1": _eq_z1,
    "Z2": _eq_z2,
    "P6": _eq_p6,
    "TB3E": _eq_tb3e,
    "TB3O": _eq_tb3o,
    "KEY2C": _eq_key2c,
    "KEY2B_PROOF": _eq_key2b_proof,
    "KEY2B_PRINTED": _eq_key2b_printed,
    "KEY3": _eq_key3,
    "GH": _eq_gh,
    "FL": _eq_fl,
    "GFQ": _eq_gfq,
    "BP12": _eq_bp12,
    "OBP13": _eq_obp13,
    "BP11": _eq_bp11,
    "OBP14": _eq_obp14,
}


# ---------------------------------------------------------------------------
# per-n polynomial identities: each yields (n, lhs, rhs)
# ---------------------------------------------------------------------------

Pairs = Iterator[tuple[int, MultiPoly, MultiPoly]]


def _pairs_tilde(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        a = _spec_q(distribution(n, FamilyId.A), qmode)
        yield n, _spec_q(distribution(n, FamilyId.AHAT), qmode), a.reflect("y", (n - 1) // 2)


def _homogenise(p: MultiPoly, e0: int, e1: int) -> MultiPoly:
    """``x0^e0 x1^e1 p(y1/x1, y0/x0)`` for ``p`` in ``x`` (odd slots) and ``y`` (even slots)."""
    return p.map_monomials(
        lambda e: MultiPoly.monomial(y1=e["x"], x1=e1 - e["x"], y0=e["y"], x0=e0 - e["y"], q=e["q"])
    )


def _pairs_prel(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        rhs = _homogenise(distribution(n, FamilyId.A), (n - 1) // 2, n // 2)
        yield n, _spec_q(distribution(n, FamilyId.P_A), qmode), _spec_q(rhs, qmode)


def _pairs_bb(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        yield n, distribution(n, FamilyId.BHAT), distribution(n, FamilyId.B).reflect("y", (n + 1) // 2)


def _pairs_pbb(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        yield n, distribution(n, FamilyId.PB), _homogenise(distribution(n, FamilyId.B), (n + 1) // 2, n // 2)


def _pairs_key0(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        for S in sieve.subsets(n):
            yield n, sieve.alpha_A(S, "brute"), sieve.alpha_A(S, "closed")


def _pairs_alphab(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        for S in sieve.subsets(n):
            yield n, MultiPoly.const(sieve.alpha_B_plus(S, "brute")), MultiPoly.const(sieve.alpha_B_plus(S, "closed"))


def _relax(p: MultiPoly, odd_slots: int, even_slots: int) -> MultiPoly:
    """``sum x^a (1+x)^{odd-a} y^b (1+y)^{even-b}`` applied monomial-wise."""
    return p.map_monomials(
        lambda e: MultiPoly.monomial(x=e["x"], y=e["y"], q=e["q"])
        * (ONE + x) ** (odd_slots - e["x"]) * (ONE + y) ** (even_slots - e["y"])
    )


def _pairs_pa_link(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        rhs = _relax(distribution(n, FamilyId.A), n // 2, (n - 1) // 2)
        yield n, _spec_q(sieve.sieve_poly(n, "A"), qmode), _spec_q(rhs, qmode)


def _pairs_bqlink(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        yield n, sieve.sieve_poly(n, "B_plus"), _relax(distribution(n, FamilyId.B_PLUS), n // 2, (n - 1) // 2)


def _pairs_rholink(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        plus = distribution(n, FamilyId.B_PLUS)
        yield n, distribution(n, FamilyId.B_MINUS), plus.reflect("x", n // 2).reflect("y", (n + 1) // 2)


def _pairs_frobenius(nmax: int, qmode: str) -> Pairs:
    for n in range(1, nmax + 1):
        yield n, distribution(n, FamilyId.A).subs(y=x, q=1), sieve.frobenius_rhs(n)


PAIR_BUILDERS: dict[str, Callable[[int, str], Pairs]] = {
    "TILDE_REL": _pairs_tilde,
    "PREL": _pairs_prel,
    "BB_REL": _pairs_bb,
    "PBB_REL": _pairs_pbb,
    "KEY0": _pairs_key0,
    "ALPHAB": _pairs_alphab,
    "PA_LINK": _pairs_pa_link,
    "BQLINK": _pairs_bqlink,
    "RHOLINK": _pairs_rholink,
    "FROBENIUS": _pairs_frobenius,
}


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def _spec(id, qscope, fclass, kind, desc, group="identities"):
    return IdentitySpec(id, qscope, fclass, kind, desc, group)


_SPECS = [
    _spec("CS_Q", Q1_RECORDED, "plain", "series", "four-variable q-generating function of P_n"),
    _spec("ANDRE_Q", GENERIC, "plain", "series", "1 + sum E_n(q) t^n/n!_q = tan_q + sec_q"),
    _spec("PZ1", Q1_RECORDED, "plain", "series", "generating function of A_n(x,y,q)"),
    _spec("PZ2", Q1_RECORDED, "plain", "series", "generating function of hat A_n(x,y,q)"),
    _spec("STANLEY_Q", GENERIC, "plain", "series", "(des, inv) q-Eulerian generating function"),
    _spec("CF", Q_ONE, "plain", "series", "homogeneous Eulerian polynomials"),
    _spec("CHEBIKIN", Q_ONE, "plain", "series", "alternating descent polynomials"),
    _spec("TILDE_REL", GENERIC, "plain", "poly", "hat A_n = y^floor((n-1)/2) A_n(x, 1/y, q)"),
    _spec("PREL", GENERIC, "plain", "poly", "P_n as a homogenised A_n"),
    _spec("B1", Q_ONE, "signed", "series", "even-length type-B generating function"),
    _spec("B2", Q_ONE, "signed", "series", "odd-length type-B generating function"),
    _spec("TYPEB_EULER", Q_ONE, "signed", "series", "type-B Eulerian generating function"),
    _spec("Z1", Q_ONE, "signed", "series", "even-length hat B generating function"),
    _spec("Z2", Q_ONE, "signed", "series", "odd-length hat B generating function"),
    _spec("P6", Q_ONE, "signed", "series", "type-B alternating Eulerian generating function"),
    _spec("BB_REL", Q_ONE, "signed", "poly", "hat B_n = y^floor((n+1)/2) B_n(x, 1/y)"),
    _spec("PBB_REL", Q_ONE, "signed", "poly", "P^B_n as a homogenised B_n"),
    _spec("TB3E", Q_ONE, "signed", "series", "even-length four-variable type-B generating function"),
    _spec("TB3O", Q_ONE, "signed", "series", "odd-length four-variable type-B generating function"),
    _spec("KEY0", GENERIC, "sieve7", "poly", "alpha_n(S,q) is a q-multinomial", "sieve"),
    _spec("ALPHAB", Q_ONE, "sieve7", "poly", "alpha^+_n(S) = multinomial * 2^(n-s_1)", "sieve"),
    _spec("PA_LINK", GENERIC, "plain", "poly", "sieve polynomial versus A_n, cleared form", "sieve"),
    _spec("KEY2C", GENERIC, "plain", "series", "odd block series C", "sieve"),
    _spec("KEY2B_PROOF", GENERIC, "plain", "series", "even block series B, composition-sum form", "sieve"),
    _spec("KEY2B_PRINTED", Q1_RECORDED, "plain", "series", "even block series B, compact form", "sieve"),
    _spec("KEY3", GENERIC, "plain", "series", "sieve series B/(1-yB) and C/(1-yB)", "sieve"),
    _spec("BQLINK", Q_ONE, "signed", "poly", "Q^+_n versus B^+_n, cleared form", "sieve"),
    _spec("GH", Q_ONE, "signed", "series", "block series G and H", "sieve"),
    _spec("FL", Q_ONE, "signed", "series", "block series F and L", "sieve"),
    _spec("GFQ", Q_ONE, "signed", "series", "Q^+ generating functions from G, H, F, L", "sieve"),
    _spec("BP12", Q_ONE, "signed", "series", "even-length B^+ generating function", "sieve"),
    _spec("OBP13", Q_ONE, "signed", "series", "odd-length B^+ generating function", "sieve"),
    _spec("BP11", Q_ONE, "signed", "series", "even-length B^- generating function", "sieve"),
    _spec("OBP14", Q_ONE, "signed", "series", "odd-length B^- generating function", "sieve"),
    _spec("RHOLINK", Q_ONE, "signed", "poly", "B^-_n is the reflected B^+_n", "sieve"),
    _spec("FROBENIUS", Q_ONE, "gamma9", "poly", "Eulerian polynomials from Stirling numbers", "sieve"),
]

SPECS: dict[str, IdentitySpec] = {s.id: s for s in _SPECS}

DEFAULT_NMAX = {
    "plain": 8, "signed": 7, "sieve7": 7, "gamma9": 9, "gamma5": 5, "gamma6": 6,
    "tree": 6, "tree6": 6, "tree7": 7, "tree8": 8,
}


def default_nmax(identity: str) -> int:
    return DEFAULT_NMAX[get_spec(identity).family_class]


def get_spec(identity: str) -> IdentitySpec:
    from . import gamma, trees  # registers the remaining groups

    catalog = {**SPECS, **gamma.SPECS, **trees.SPECS}
    try:
        return catalog[identity]
    except KeyError:
        raise ValueError(f"unknown identity id {identity!r}") from None


def all_ids() -> list[str]:
    from . import gamma, trees

    return [*SPECS, *gamma.SPECS, *trees.SPECS]


def rhs_series(identity: str, N: int, qmode: str = "one") -> list[tuple[QSeries, QSeries]]:
    """Numerator/denominator pairs of a series identity (one pair per equation)."""
    if identity not in SERIES_BUILDERS:
        raise ValueError(f"unknown series identity {identity!r}")
    return [(num, den) for _, num, den in SERIES_BUILDERS[identity](N, qmode)]


def lhs_series(identity: str, N: int, qmode: str = "one") -> list[QSeries]:
    if identity not in SERIES_BUILDERS:
        raise ValueError(f"unknown series identity {identity!r}")
    return [lhs for lhs, _, _ in SERIES_BUILDERS[identity](N, qmode)]


def _check_series(identity: str, equations: Iterable[Equation], N: int, qmode: str) -> IdentityReport:
    with Timer() as t:
        worst: Mismatch | None = None
        for lhs, num, den in equations:
            prod = lhs * den
            for n in range(N + 1):
                if prod[n] != num[n]:
                    if worst is None or n < worst.n:
                        worst = Mismatch(n, prod[n], num[n])
                    break
    return IdentityReport(identity, N, qmode, "pass" if worst is None else "fail", worst, t.ms)


def verify(identity: str, nmax: int | None = None, qmode: str | None = None) -> IdentityReport:
    """Run one catalog entry; ``qmode`` defaults to the entry's required mode."""
    spec = get_spec(identity)
    if nmax is None:
        nmax = default_nmax(identity)
    if nmax < 2:
        raise ValueError("nmax below 2 is not informative")
    if qmode is None:
        qmode = spec.required_qmode()
    if qmode not in ("one", "generic"):
        raise ValueError(f"qmode must be 'one' or 'generic', got {qmode!r}")
    if qmode == "generic" and spec.qscope == Q_ONE:
        raise ValueError(f"{identity} is a q = 1 identity")
    if spec.group == "gamma":
        from . import gamma

        return gamma.verify_gamma(identity, nmax)
    if spec.group == "trees":
        from . import trees

        return trees.verify_tree(identity, nmax)
    if identity in SERIES_BUILDERS:
        report = _check_series(identity, SERIES_BUILDERS[identity](nmax, qmode), nmax, qmode)
    else:
        report = compare_pairs(identity, nmax, qmode, PAIR_BUILDERS[identity](nmax, qmode))
    return report


# ---------------------------------------------------------------------------
# catalog runs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Task:
    id: str
    nmax: int
    qmode: str
    scope: str  # "required" or "recorded"


def plan(ids: Iterable[str] | None = None, nmax_a: int | None = None, nmax_b: int | None = None) -> list[Task]:
    """Required run for every id, plus the generic-q record where one is kept.

    ``nmax_a`` / ``nmax_b`` override the bound of the plain / signed family classes.
    """
    ids = all_ids() if ids is None else list(ids)
    tasks = []
    for identity in ids:
        spec = get_spec(identity)
        nmax = default_nmax(identity)
        if spec.family_class == "plain" and nmax_a is not None:
            nmax = nmax_a
        elif spec.family_class == "signed" and nmax_b is not None:
            nmax = nmax_b
        tasks.append(Task(identity, nmax, spec.required_qmode(), "required"))
        for qmode in spec.recorded_qmodes():
            tasks.append(Task(identity, nmax, qmode, "recorded"))
    return tasks


def run_task(task: Task) -> IdentityReport:
    report = verify(task.id, task.nmax, task.qmode)
    report.scope = task.scope
    return report


def run_catalog(tasks: Sequence[Task], jobs: int = 1) -> list[IdentityReport]:
    """Run tasks in order; ``jobs > 1`` spreads them over worker processes."""
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run_task, tasks))
    return [run_task(t) for t in tasks]


def summarize(reports: Sequence[IdentityReport]) -> dict:
    required = [r for r in reports if r.scope == "required"]
    recorded = [r for r in reports if r.scope == "recorded"]
    failed = [r.id for r in required if not r.passed]
    return {
        "required": [r.to_json() for r in required],
        "recorded": [r.to_json() for r in recorded],
        "summary": {
            "required_total": len(required),
            "required_passed": len(required) - len(failed),
            "required_failed": failed,
            "recorded_total": len(recorded),
            "all_required_pass": not failed,
        },
    }
