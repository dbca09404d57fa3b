"""Symmetric and gamma expansions of the bi-Eulerian families, count tables, Process A."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .exactalg import ONE, ZERO, InconsistencyError, IdentityReport, Mismatch, MultiPoly, Timer, V
from .perm_core import (
    FamilyId,
    SignedPermutation,
    distribution,
    enumerate_perms,
    lpk_histogram,
    plain_histogram,
    signed_histogram,
    stat_profile,
)
from .trees import andre_tables

x, y = V("x"), V("y")

BASES = ("SYM", "GAMMA")


class ExpansionError(ValueError):
    """The polynomial is not representable in the requested basis."""


def basis_element(basis: str, m: int, j: int) -> MultiPoly:
    if basis == "SYM":
        return (x + y) ** j * (ONE + x * y) ** (m - j)
    if basis == "GAMMA":
        return (x + y) ** j * (ONE + x + y + x * y) ** (m - j)
    raise ValueError(f"basis must be one of {BASES}, got {basis!r}")


@dataclass(frozen=True)
class BasisExpansion:
    m: int
    basis: str
    coeffs: tuple[int, ...]

    def poly(self) -> MultiPoly:
        return combine(self.coeffs, self.basis, self.m)


def combine(coeffs: Sequence[int], basis: str, m: int) -> MultiPoly:
    total = ZERO
    for j, c in enumerate(coeffs):
        if c:
            total = total + basis_element(basis, m, j) * c
    return total


def expand(poly: MultiPoly, m: int, basis: str) -> BasisExpansion:
    """Read the coefficients off ``poly(x, 0)`` and certify them by re-expansion."""
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}, got {basis!r}")
    if not poly.variables() <= {"x", "y"}:
        raise ValueError("expand needs a polynomial in x and y only")
    base = poly.substitute_zero("y")
    p = [base.coefficient(x=k) for k in range(base.degree("x") + 1)] if base else []
    if len(p) > m + 1:
        raise ExpansionError(f"degree {len(p) - 1} of poly(x, 0) exceeds half-degree {m}")
    p += [0] * (m + 1 - len(p))
    if basis == "SYM":
        coeffs = p
    else:
        coeffs = []
        for k in range(m + 1):
            coeffs.append(p[k] - sum(coeffs[j] * comb(m - j, k - j) for j in range(k)))
    out = BasisExpansion(m, basis, tuple(coeffs))
    if out.poly() != poly:
        raise ExpansionError(f"{basis} certificate failed for half-degree {m}")
    return out


# ---------------------------------------------------------------------------
# count tables
# ---------------------------------------------------------------------------

TABLE_KINDS = ("a", "abar", "b", "bbar", "g", "gbar")


@dataclass(frozen=True)
class CountTable:
    n: int
    kind: str
    values: tuple[int, ...]

    def poly(self) -> MultiPoly:
        return sum((MultiPoly.monomial(v, x=j) for j, v in enumerate(self.values) if v), ZERO)


def _pad(values, m: int) -> tuple[int, ...]:
    vals = [int(v) for v in values]
    if any(vals[m + 1:]):
        raise InconsistencyError("table entry beyond the half-degree")
    vals = vals[: m + 1]
    return tuple(vals + [0] * (m + 1 - len(vals)))


@lru_cache(maxsize=256)
def count_table(n: int, kind: str) -> CountTable:
    if n < 1:
        raise ValueError("n must be positive")
    m = n // 2
    if kind in ("a", "abar"):
        H = plain_histogram(n).sum(axis=(2, 3))
        row = 0 if kind == "a" else (n - 1) // 2
        vals = H[row]
    elif kind in ("b", "bbar"):
        H = signed_histogram(n).sum(axis=0)
        row = 0 if kind == "b" else (n + 1) // 2
        vals = H[row]
    elif kind == "g":
        vals = lpk_histogram(n)
    elif kind == "gbar":
        g = count_table(n, "g").values
        vals = [sum(comb(i + j, j) * g[i + j] * 2**i for i in range(m - j + 1)) for j in range(m + 1)]
    else:
        raise ValueError(f"kind must be one of {TABLE_KINDS}, got {kind!r}")
    return CountTable(n, kind, _pad(vals, m))


def triangle_csv(kind: str, nmax: int) -> str:
    """Rows ``n = 1..nmax``, columns ``j``; integer cells only."""
    width = nmax // 2 + 1
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", *range(width)])
    for n in range(1, nmax + 1):
        vals = list(count_table(n, kind).values)
        w.writerow([n, *vals, *[""] * (width - len(vals))])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# gamma catalog
# ---------------------------------------------------------------------------

def _sym(n: int, kind: str) -> MultiPoly:
    return combine(count_table(n, kind).values, "SYM", n // 2)


def _pairs_sym(family: FamilyId, kind: str):
    def gen(nmax):
        for n in range(1, nmax + 1):
            yield n, distribution(n, family), _sym(n, kind)

    return gen


def _pairs_abar_sym(nmax):
    for n in range(1, nmax + 1):
        a = count_table(n, "a").values
        yield n, count_table(n, "abar").poly(), CountTable(n, "a", tuple(reversed(a))).poly()


def _pairs_sd(nmax):
    for n in range(1, nmax + 1):
        m, d = n // 2, andre_tables(n).d
        rhs = [sum(comb(m - i, j - i) * d[i] for i in range(j + 1)) for j in range(m + 1)]
        yield n, count_table(n, "a").poly(), CountTable(n, "a", tuple(rhs)).poly()


def _pairs_gamma_sun(nmax):
    for n in range(1, nmax + 1):
        yield n, distribution(n, FamilyId.ATILDE), combine(andre_tables(n).d, "GAMMA", n // 2)


def _pairs_gamma_euler(nmax):
    for n in range(1, nmax + 1):
        d = andre_tables(n).d
        rhs = sum((x**j * (ONE + x) ** (n - 1 - 2 * j) * (d[j] * 2**j) for j in range(len(d)) if d[j]), ZERO)
        yield n, distribution(n, FamilyId.A).subs(y=x, q=1), rhs


def _pairs_gamma_alt(nmax):
    for n in range(1, nmax + 1):
        dbar = andre_tables(n).dbar
        coeffs = [(-1) ** i * v for i, v in enumerate(dbar)]
        yield n, distribution(n, FamilyId.ABAR), combine(coeffs, "GAMMA", n // 2)


def _pairs_rs_andre(nmax):
    for n in range(1, nmax + 1):
        t = andre_tables(n)
        yield n, t.rs.subs(x=ONE + x), CountTable(n, "dbar", t.dbar).poly()


def _pairs_u_gamma(nmax):
    for n in range(1, nmax + 1):
        g = count_table(n, "g").values
        yield n, distribution(n, FamilyId.BTILDE), combine([v * 2**j for j, v in enumerate(g)], "GAMMA", n // 2)


def _pairs_v_gamma(nmax):
    for n in range(1, nmax + 1):
        gb = count_table(n, "gbar").values
        yield n, distribution(n, FamilyId.BBAR), combine([v * (-2) ** j for j, v in enumerate(gb)], "GAMMA", n // 2)


def _pairs_tbb(nmax):
    for n in range(1, nmax + 1):
        m, g = n // 2, count_table(n, "g").values
        rhs = sum(
            ((ONE + x * y) ** j * (ONE + x + y + x * y) ** (m - j) * (v * 2**j) for j, v in enumerate(g) if v),
            ZERO,
        )
        yield n, distribution(n, FamilyId.BBAR), rhs


def _pairs_gbar_poly(nmax):
    for n in range(1, nmax + 1):
        g = count_table(n, "g").values
        rhs = sum(((x + 2) ** k * v for k, v in enumerate(g) if v), ZERO)
        yield n, count_table(n, "gbar").poly(), rhs


def _pairs_petersen(nmax):
    for n in range(1, nmax + 1):
        g = count_table(n, "g").values
        rhs = sum(((4 * x) ** j * (ONE + x) ** (n - 2 * j) * v for j, v in enumerate(g) if v), ZERO)
        yield n, distribution(n, FamilyId.B).subs(y=x), rhs


def _pairs_mfmy(nmax):
    for n in range(1, nmax + 1):
        gb = count_table(n, "gbar").values
        rhs = sum(((-4 * x) ** j * (ONE + x) ** (n - 2 * j) * v for j, v in enumerate(gb) if v), ZERO)
        yield n, distribution(n, FamilyId.BHAT).subs(y=x), rhs


# ---------------------------------------------------------------------------
# Process A
# ---------------------------------------------------------------------------

def _padded(u: Sequence[int]) -> list[int]:
    return [0, *u, len(u) + 1]


def peaks(u: Sequence[int]) -> list[int]:
    """Left-peak positions ``1 <= p < n`` under ``u(0) = 0``."""
    w = _padded(u)
    return [p for p in range(1, len(u)) if w[p - 1] < w[p] > w[p + 1]]


def valleys(u: Sequence[int]) -> list[int]:
    """Valley positions under ``u(0) = 0`` and ``u(n+1) = n+1``."""
    w = _padded(u)
    return [v for v in range(1, len(u) + 1) if w[v - 1] > w[v] < w[v + 1]]


def free_positions(u: Sequence[int]) -> list[int]:
    """Odd positions ``1..2*floor(n/2)-1`` whose descent is not fixed by a peak."""
    taken = {p if p % 2 else p - 1 for p in peaks(u)}
    return [l for l in range(1, len(u), 2) if l not in taken]


def process_a(u: Sequence[int], valley_signs: Sequence[int], D: Iterable[int]) -> SignedPermutation:
    """Sign the letters of ``u`` so that the result has ``lpk(u) + |D|`` odd descents and no even descent."""
    u = tuple(u)
    n = len(u)
    if sorted(u) != list(range(1, n + 1)):
        raise ValueError(f"{u} is not a permutation of [{n}]")
    pk, vl = peaks(u), valleys(u)
    if len(vl) != len(pk):
        raise InconsistencyError(f"{u}: {len(vl)} valleys but {len(pk)} left peaks")
    if len(valley_signs) != len(vl) or any(s not in (1, -1) for s in valley_signs):
        raise ValueError(f"expected {len(vl)} valley signs in {{+1, -1}}")
    C = free_positions(u)
    D = sorted(set(D))
    if not set(D) <= set(C):
        raise ValueError(f"D={D} is not a subset of the free odd positions {C}")
    w = _padded(u)
    sign = [0] + [1] * n  # 1-based; index 0 unused
    # step 1: valleys
    for v, s in zip(vl, valley_signs):
        sign[v] = s
    # step 2: peaks at even positions are negated so their descent moves to p - 1
    for p in pk:
        if p % 2 == 0:
            sign[p] = -1
    # step 3: free odd positions
    for l in C:
        is_descent = w[l] > w[l + 1]
        if l in D and not is_descent:
            sign[l + 1] = -1
        elif l not in D and is_descent:
            sign[l] = -1
    # step 4: double descents at even positions
    for e in range(2, n + 1, 2):
        if w[e - 1] > w[e] > w[e + 1]:
            sign[e] = -1
    return SignedPermutation(tuple(s * v for s, v in zip(sign[1:], u)))


def process_a_images(u: Sequence[int], j: int) -> list[SignedPermutation]:
    """All outputs of Process A for ``u`` and target ``j`` odd descents."""
    i = len(peaks(u))
    if j < i:
        return []
    C = free_positions(u)
    out = []
    for signs in itertools.product((1, -1), repeat=len(valleys(u))):
        for D in itertools.combinations(C, j - i):
            out.append(process_a(u, signs, D))
    return out


def _no_even_descent(stats) -> bool:
    return stats.des0 == 0


def check_process_a(n: int) -> tuple[bool, str]:
    """Postconditions, injectivity, counting and exact coverage for every target ``j``."""
    m = n // 2
    targets: dict[int, set] = {j: set() for j in range(m + 1)}
    for w in enumerate_perms(n, "B"):
        st = stat_profile(w)
        if _no_even_descent(st):
            targets[st.des1].add(w.values)
    for j in range(m + 1):
        seen: set = set()
        for u in itertools.permutations(range(1, n + 1)):
            imgs = process_a_images(u, j)
            i = len(peaks(u))
            expected = comb(m - i, j - i) * 2**i if j >= i else 0
            vals = {w.values for w in imgs}
            if len(imgs) != expected or len(vals) != expected:
                return False, f"n={n} j={j} u={u}: {len(vals)} distinct images of {len(imgs)}, expected {expected}"
            for w in imgs:
                st = stat_profile(w)
                if st.des0 or st.des1 != j or w.absolute().values != u:
                    return False, f"n={n} j={j} u={u}: bad image {w}"
            if seen & vals:
                return False, f"n={n} j={j}: images of different u collide"
            seen |= vals
        if seen != targets[j]:
            return False, f"n={n} j={j}: images cover {len(seen)} of {len(targets[j])} targets"
    return True, ""


def check_l1(n: int) -> tuple[bool, str]:
    for w in enumerate_perms(n, "B"):
        st = stat_profile(w)
        if st.des0 == 0 and len(peaks(w.absolute().values)) > st.des1:
            return False, f"lpk(|{w}|) exceeds {st.des1}"
    return True, ""


def _pairs_check(fn):
    def gen(nmax):
        for n in range(1, nmax + 1):
            ok, _ = fn(n)
            yield n, MultiPoly.const(int(ok)), ONE

    return gen


PAIR_BUILDERS = {
    "SYM_S": _pairs_sym(FamilyId.ATILDE, "a"),
    "SYM_T": _pairs_sym(FamilyId.ABAR, "abar"),
    "ABAR_SYM": _pairs_abar_sym,
    "SD": _pairs_sd,
    "GAMMA_SUN": _pairs_gamma_sun,
    "GAMMA_EULER": _pairs_gamma_euler,
    "GAMMA_ALT": _pairs_gamma_alt,
    "RS_ANDRE": _pairs_rs_andre,
    "SYM_U": _pairs_sym(FamilyId.BTILDE, "b"),
    "SYM_V": _pairs_sym(FamilyId.BBAR, "bbar"),
    "U_GAMMA": _pairs_u_gamma,
    "V_GAMMA": _pairs_v_gamma,
    "TBB_ID": _pairs_tbb,
    "GBAR_POLY": _pairs_gbar_poly,
    "PETERSEN": _pairs_petersen,
    "MFMY": _pairs_mfmy,
    "PROCESS_A": _pairs_check(check_process_a),
    "L1_BOUND": _pairs_check(check_l1),
}


def _specs():
    from .identities import Q_ONE, IdentitySpec

    rows = [
        ("SYM_S", "gamma9", "symmetric expansion of tilde A_n"),
        ("SYM_T", "gamma9", "symmetric expansion of bar A_n"),
        ("ABAR_SYM", "gamma9", "abar(n,j) = a(n, floor(n/2)-j)"),
        ("SD", "gamma9", "a(n,j) from Andre descent counts"),
        ("GAMMA_SUN", "gamma9", "gamma expansion of tilde A_n"),
        ("GAMMA_EULER", "gamma9", "gamma expansion of the Eulerian polynomial"),
        ("GAMMA_ALT", "gamma9", "gamma expansion of bar A_n"),
        ("RS_ANDRE", "gamma9", "rs_{n-1}(1+x) = sum dbar(n,i) x^i"),
        ("SYM_U", "signed", "symmetric expansion of tilde B_n"),
        ("SYM_V", "signed", "symmetric expansion of bar B_n"),
        ("U_GAMMA", "signed", "gamma expansion of tilde B_n"),
        ("V_GAMMA", "signed", "gamma expansion of bar B_n"),
        ("TBB_ID", "signed", "bar B_n in the (1+xy) basis"),
        ("GBAR_POLY", "signed", "sum gbar(n,j) x^j = sum g(n,k) (2+x)^k"),
        ("PETERSEN", "signed", "gamma expansion of B_n(x,x)"),
        ("MFMY", "signed", "gamma expansion of hat B_n(x,x)"),
        ("PROCESS_A", "gamma5", "Process A is a counted bijection onto no-even-descent words"),
        ("L1_BOUND", "gamma6", "lpk(|w|) <= odd descents when there is no even descent"),
    ]
    return {i: IdentitySpec(i, Q_ONE, c, "check", d, "gamma") for i, c, d in rows}


SPECS = _specs()


def verify_gamma(identity: str, nmax: int) -> IdentityReport:
    if identity not in PAIR_BUILDERS:
        raise ValueError(f"unknown gamma identity {identity!r}")
    with Timer() as t:
        mismatch = None
        for n, lhs, rhs in PAIR_BUILDERS[identity](nmax):
            if lhs != rhs:
                mismatch = Mismatch(n, lhs, rhs)
                break
    return IdentityReport(identity, nmax, "one", "pass" if mismatch is None else "fail", mismatch, t.ms)
