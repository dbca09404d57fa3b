"""Subset/composition coding, restricted-descent-set counts, sieve polynomials and block series."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator

from .exactalg import ONE, ZERO, MultiPoly, QSeries, V, q_multinomial
from .perm_core import enumerate_perms, stat_profile


@dataclass(frozen=True)
class PositionSubset:
    n: int
    members: tuple[int, ...] = ()

    def __post_init__(self):
        m = tuple(self.members)
        object.__setattr__(self, "members", m)
        if self.n < 1:
            raise ValueError("ambient length must be positive")
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ValueError(f"members {m} are not strictly increasing")
        if m and (m[0] < 1 or m[-1] > self.n - 1):
            raise ValueError(f"members {m} must lie in 1..{self.n - 1}")

    @property
    def odd(self) -> tuple[int, ...]:
        return tuple(s for s in self.members if s % 2)

    @property
    def even(self) -> tuple[int, ...]:
        return tuple(s for s in self.members if not s % 2)

    def mask(self) -> int:
        return sum(1 << (s - 1) for s in self.members)


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = tuple(self.parts)
        object.__setattr__(self, "parts", p)
        if not p or any(x < 1 for x in p):
            raise ValueError(f"{p} is not a composition")

    @property
    def n(self) -> int:
        return sum(self.parts)


def code(subset: PositionSubset) -> Composition:
    bounds = (0, *subset.members, subset.n)
    return Composition(tuple(b - a for a, b in zip(bounds, bounds[1:])))


def decode(comp: Composition) -> PositionSubset:
    return PositionSubset(comp.n, tuple(itertools.accumulate(comp.parts))[:-1])


def subsets(n: int, only_odd: bool = False) -> Iterator[PositionSubset]:
    pool = [s for s in range(1, n) if not only_odd or s % 2]
    for r in range(len(pool) + 1):
        for members in itertools.combinations(pool, r):
            yield PositionSubset(n, members)


# ---------------------------------------------------------------------------
# alpha counts
# ---------------------------------------------------------------------------

def _descent_mask(values, start: int) -> int:
    # bit (i-1) set for a descent at position i >= 1; position 0 is ignored
    mask = 0
    for i in range(max(start, 1), len(values) - 1):
        if values[i] > values[i + 1]:
            mask |= 1 << (i - 1)
    return mask


@lru_cache(maxsize=16)
def _inv_by_descent_set(n: int) -> dict[int, MultiPoly]:
    acc: dict[int, dict[int, int]] = {}
    for w in enumerate_perms(n, "S"):
        m = _descent_mask((None, *w.values), 1)
        inv = stat_profile(w).inv
        row = acc.setdefault(m, {})
        row[inv] = row.get(inv, 0) + 1
    return {m: sum((MultiPoly.monomial(c, q=k) for k, c in row.items()), ZERO) for m, row in acc.items()}


@lru_cache(maxsize=16)
def _bplus_by_descent_set(n: int) -> dict[int, int]:
    acc: dict[int, int] = {}
    for w in enumerate_perms(n, "B_plus"):
        m = _descent_mask((0, *w.values), 1)
        acc[m] = acc.get(m, 0) + 1
    return acc


def _submask_sum(table: dict, mask: int, zero):
    total = zero
    for m, v in table.items():
        if m & ~mask == 0:
            total = total + v
    return total


def alpha_A(subset: PositionSubset, mode: str = "closed") -> MultiPoly:
    """``sum q^inv`` over ``sigma`` in S_n with descent set inside ``subset``."""
    if mode == "closed":
        return q_multinomial(subset.n, code(subset).parts)
    if mode == "brute":
        return _submask_sum(_inv_by_descent_set(subset.n), subset.mask(), ZERO)
    raise ValueError(f"mode must be 'brute' or 'closed', got {mode!r}")


def alpha_B_plus(subset: PositionSubset, mode: str = "closed") -> int:
    """Number of ``sigma`` in B_n^+ whose descent set lies inside ``subset``."""
    if mode == "closed":
        parts = code(subset).parts
        multinom = factorial(subset.n)
        for p in parts:
            multinom //= factorial(p)
        first = subset.members[0] if subset.members else subset.n
        return multinom * 2 ** (subset.n - first)
    if mode == "brute":
        return _submask_sum(_bplus_by_descent_set(subset.n), subset.mask(), 0)
    raise ValueError(f"mode must be 'brute' or 'closed', got {mode!r}")


@lru_cache(maxsize=64)
def sieve_poly(n: int, family: str) -> MultiPoly:
    """``sum_S alpha(S) x^{|S_o|} y^{|S_e|}`` over all ``S`` in ``[n-1]``; family ``A`` or ``B_plus``."""
    if n < 1:
        raise ValueError("n must be positive")
    if family not in ("A", "B_plus"):
        raise ValueError(f"family must be 'A' or 'B_plus', got {family!r}")
    total = ZERO
    for S in subsets(n):
        a = alpha_A(S) if family == "A" else MultiPoly.const(alpha_B_plus(S))
        total = total + a * MultiPoly.monomial(x=len(S.odd), y=len(S.even))
    return total


# ---------------------------------------------------------------------------
# hyperbolic building blocks
# ---------------------------------------------------------------------------

def cosh_q(N: int, qmode: str) -> QSeries:
    return QSeries.build(N, qmode, lambda n: 1 if n % 2 == 0 else 0)


def sinh_q(N: int, qmode: str) -> QSeries:
    return QSeries.build(N, qmode, lambda n: n % 2)


def exp_q(N: int, qmode: str) -> QSeries:
    return QSeries.build(N, qmode, lambda n: 1)


def cosh_alpha(alpha: MultiPoly, N: int, qmode: str = "one", scale: int = 1) -> QSeries:
    """``cosh(a * scale * t)`` with ``a^2 = alpha``: coefficient ``alpha^k scale^{2k}`` at ``t^{2k}``."""
    return QSeries.build(N, qmode, lambda n: alpha ** (n // 2) * scale**n if n % 2 == 0 else ZERO)


def sinh_alpha_over_a(alpha: MultiPoly, N: int, qmode: str = "one", scale: int = 1) -> QSeries:
    """``sinh(a * scale * t) / a`` with ``a^2 = alpha``: ``alpha^k scale^{2k+1}`` at ``t^{2k+1}``."""
    return QSeries.build(N, qmode, lambda n: alpha ** (n // 2) * scale**n if n % 2 else ZERO)


def _const(c, N: int, qmode: str) -> QSeries:
    return QSeries.constant(c, N, qmode)


BLOCK_KINDS = ("B", "B_printed", "C", "G", "H", "F", "L")


def block_series(kind: str, N: int, qmode: str = "generic") -> tuple[QSeries, QSeries]:
    """Closed form of one block series as a ``(numerator, denominator)`` pair.

    ``B`` is the composition-sum form ``cosh_q - 1 + x sinh_q^2 / (1 - x(cosh_q - 1))``;
    ``B_printed`` is the compact ``(1+2x)(cosh_q - 1) / (1 - x(cosh_q - 1))``.
    ``G``, ``H``, ``F``, ``L`` exist only at ``q = 1``.
    """
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    if kind not in BLOCK_KINDS:
        raise ValueError(f"unknown block kind {kind!r}")
    x = V("x")
    if kind in ("G", "H", "F", "L"):
        if qmode != "one":
            raise ValueError(f"block {kind} is only defined at q = 1")
        one = ONE
        c1, s1 = cosh_q(N, "one"), sinh_q(N, "one")
        c2, s2 = c1.rescale(2), s1.rescale(2)
        den = _const(one, N, "one") - (c2 - _const(one, N, "one")).scale(x)
        if kind == "G":
            num = (c1 - _const(one, N, "one")) * den + (s1 * s2).scale(x)
        elif kind == "H":
            num = (c2 - _const(one, N, "one")) * den + (s2 * s2).scale(x)
        elif kind == "F":
            num = s2
        else:
            num = s1
        return num, den
    ch, sh = cosh_q(N, qmode), sinh_q(N, qmode)
    unit = _const(ONE, N, qmode)
    den = unit - (ch - unit).scale(x)
    if kind == "B":
        num = (ch - unit) * den + (sh * sh).scale(x)
    elif kind == "B_printed":
        num = (ch - unit).scale(ONE + 2 * x)
    else:
        num = sh
    return num, den


# ---------------------------------------------------------------------------
# combinatorial left-hand sides
# ---------------------------------------------------------------------------

def _multinomial(n: int, parts) -> int:
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def odd_subset_sum(n: int, weight: str) -> MultiPoly:
    """``sum over S in O[n-1]`` of the composition weight times ``x^{|S|}``.

    ``weight`` is ``plain`` (multinomial), ``signed`` (multinomial times
    ``2^n``) or ``bplus`` (the B_n^+ count ``alpha^+``).
    """
    total = ZERO
    for S in subsets(n, only_odd=True):
        parts = code(S).parts
        if weight == "plain":
            w = _multinomial(n, parts)
        elif weight == "signed":
            w = _multinomial(n, parts) * 2**n
        elif weight == "bplus":
            w = alpha_B_plus(S)
        else:
            raise ValueError(weight)
        total = total + MultiPoly.monomial(w, x=len(S.members))
    return total


def block_lhs(kind: str, N: int, qmode: str = "generic") -> QSeries:
    """Left side of a block identity, built from subset sums (never from the closed forms)."""
    def odd_only(n: int) -> MultiPoly:
        p = sieve_poly(n, "A").substitute_zero("y")
        return p.subs(q=1) if qmode == "one" else p

    if kind in ("B", "B_printed"):
        return QSeries.build(N, qmode, lambda n: odd_only(n) if n and n % 2 == 0 else ZERO)
    if kind == "C":
        return QSeries.build(N, qmode, lambda n: odd_only(n) if n % 2 else ZERO)
    if qmode != "one":
        raise ValueError(f"block {kind} is only defined at q = 1")
    if kind == "G":
        return QSeries.build(N, "one", lambda n: sieve_poly(n, "B_plus").substitute_zero("y") if n and n % 2 == 0 else ZERO)
    if kind == "H":
        return QSeries.build(N, "one", lambda n: odd_subset_sum(n, "signed") if n and n % 2 == 0 else ZERO)
    if kind == "F":
        return QSeries.build(N, "one", lambda n: odd_subset_sum(n, "signed") if n % 2 else ZERO)
    if kind == "L":
        return QSeries.build(N, "one", lambda n: odd_subset_sum(n, "bplus") if n % 2 else ZERO)
    raise ValueError(f"unknown block kind {kind!r}")


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind by the triangle recurrence."""
    row = [1] + [0] * k
    for m in range(1, n + 1):
        new = [0] * (k + 1)
        for j in range(1, min(m, k) + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[k]


def frobenius_rhs(n: int) -> MultiPoly:
    x = V("x")
    return sum(
        (MultiPoly.const(factorial(k) * stirling2(n, k)) * x ** (k - 1) * (ONE - x) ** (n - k) for k in range(1, n + 1)),
        ZERO,
    )
