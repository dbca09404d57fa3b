"""Exact sparse multivariate polynomials and truncated q-EGF series.

Every polynomial lives over the fixed alphabet ``(x0, x1, y0, y1, x, y, q)``.
Monomials are stored as a single packed integer (16 bits per exponent, ``x0``
in the most significant field), so integer order on keys coincides with the
lexicographic order on exponent tuples and exponent addition is one integer
addition.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

VARIABLES: tuple[str, ...] = ("x0", "x1", "y0", "y1", "x", "y", "q")
NVARS = len(VARIABLES)
_BITS = 16
_MASK = (1 << _BITS) - 1
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_SHIFT = {name: _BITS * (NVARS - 1 - i) for i, name in enumerate(VARIABLES)}
# rendering order of the factors inside one monomial
_RENDER_ORDER = sorted(VARIABLES)


class InconsistencyError(ArithmeticError):
    """An exact division left a remainder where the mathematics forbids one."""


def _var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown variable {name!r}; alphabet is {VARIABLES}") from None


def pack(exponents: Sequence[int]) -> int:
    if len(exponents) != NVARS:
        raise ValueError(f"expected {NVARS} exponents, got {len(exponents)}")
    key = 0
    for e in exponents:
        if e < 0 or e > _MASK:
            raise ValueError(f"exponent {e} out of range")
        key = (key << _BITS) | e
    return key


def unpack(key: int) -> tuple[int, ...]:
    out = [0] * NVARS
    for i in range(NVARS - 1, -1, -1):
        out[i] = key & _MASK
        key >>= _BITS
    return tuple(out)


def _exp(key: int, name: str) -> int:
    return (key >> _SHIFT[name]) & _MASK


class MultiPoly:
    """Immutable sparse polynomial with arbitrary-precision integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        self._terms: dict[int, int] = {k: c for k, c in (terms or {}).items() if c}
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> MultiPoly:
        return cls({0: c}) if c else cls()

    @classmethod
    def var(cls, name: str, power: int = 1) -> MultiPoly:
        _var_index(name)
        return cls({power << _SHIFT[name]: 1})

    @classmethod
    def monomial(cls, coeff: int = 1, **powers: int) -> MultiPoly:
        key = 0
        for name, e in powers.items():
            _var_index(name)
            key += e << _SHIFT[name]
        return cls({key: coeff})

    @classmethod
    def from_exponents(cls, items: Iterable[tuple[Sequence[int], int]]) -> MultiPoly:
        acc: dict[int, int] = {}
        for exps, c in items:
            k = pack(exps)
            acc[k] = acc.get(k, 0) + c
        return cls(acc)

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> MultiPoly:
        # caller guarantees there are no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- inspection -------------------------------------------------------
    def terms(self) -> Iterator[tuple[tuple[int, ...], int]]:
        """Yield ``(exponent_tuple, coeff)`` in canonical (lexicographic) order."""
        for k in sorted(self._terms):
            yield unpack(k), self._terms[k]

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, **powers: int) -> int:
        key = 0
        for name, e in powers.items():
            key += e << _SHIFT[name]
        return self._terms.get(key, 0)

    def constant_term(self) -> int:
        return self._terms.get(0, 0)

    def degree(self, name: str) -> int:
        _var_index(name)
        if not self._terms:
            return -1
        return max(_exp(k, name) for k in self._terms)

    def variables(self) -> set[str]:
        return {v for v in VARIABLES if any(_exp(k, v) for k in self._terms)}

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ring operations --------------------------------------------------
    @staticmethod
    def _coerce(other: MultiPoly | int) -> MultiPoly:
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        raise TypeError(f"cannot combine MultiPoly with {type(other).__name__}")

    def __add__(self, other: MultiPoly | int) -> MultiPoly:
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> MultiPoly:
        return MultiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: MultiPoly | int) -> MultiPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: MultiPoly | int) -> MultiPoly:
        return self._coerce(other) - self

    def __mul__(self, other: MultiPoly | int) -> MultiPoly:
        if isinstance(other, int):
            if not other:
                return MultiPoly()
            return MultiPoly._raw({k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return MultiPoly()
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return MultiPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> MultiPoly:
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- substitutions ----------------------------------------------------
    def substitute_zero(self, name: str) -> MultiPoly:
        _var_index(name)
        sh = _SHIFT[name]
        return MultiPoly._raw({k: c for k, c in self._terms.items() if not (k >> sh) & _MASK})

    def coeff_of(self, name: str, k: int) -> MultiPoly:
        """Coefficient polynomial of ``name**k`` (``name`` removed)."""
        _var_index(name)
        sh = _SHIFT[name]
        return MultiPoly._raw(
            {key - (k << sh): c for key, c in self._terms.items() if (key >> sh) & _MASK == k}
        )

    def subs(self, **values: int | MultiPoly) -> MultiPoly:
        """Simultaneous substitution of integers or polynomials for variables."""
        if not values:
            return self
        for name in values:
            _var_index(name)
        powers: dict[tuple[str, int], MultiPoly] = {}
        out = MultiPoly()
        acc: dict[int, int] = {}
        poly_parts: list[MultiPoly] = []
        for key, c in self._terms.items():
            rest = key
            factor: int | MultiPoly = c
            for name, val in values.items():
                e = _exp(key, name)
                if not e:
                    continue
                rest -= e << _SHIFT[name]
                if isinstance(val, int):
                    factor = factor * val**e
                else:
                    pw = powers.get((name, e))
                    if pw is None:
                        pw = powers[(name, e)] = val**e
                    factor = pw * factor
            if isinstance(factor, int):
                if factor:
                    acc[rest] = acc.get(rest, 0) + factor
            else:
                poly_parts.append(factor * MultiPoly._raw({rest: 1}))
        out = MultiPoly(acc)
        for part in poly_parts:
            out = out + part
        return out

    def map_monomials(self, fn) -> MultiPoly:
        """Apply ``fn(exponent_dict) -> MultiPoly`` to every monomial and sum (linear extension)."""
        out = MultiPoly()
        for exps, c in self.terms():
            out = out + fn(dict(zip(VARIABLES, exps))) * c
        return out

    def reflect(self, name: str, degree: int) -> MultiPoly:
        """Return ``name**degree * p(1/name)``; ``degree`` must bound the degree in ``name``."""
        _var_index(name)
        sh = _SHIFT[name]
        out: dict[int, int] = {}
        for key, c in self._terms.items():
            e = (key >> sh) & _MASK
            if e > degree:
                raise ValueError(f"degree {e} in {name} exceeds reflection degree {degree}")
            out[key + ((degree - 2 * e) << sh)] = c
        return MultiPoly._raw(out)

    def divexact(self, divisor: MultiPoly) -> MultiPoly:
        """Exact division; raises :class:`InconsistencyError` on a nonzero remainder."""
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_key = max(divisor._terms)
        lead_c = divisor._terms[lead_key]
        lead_exps = unpack(lead_key)
        rem = dict(self._terms)
        quot: dict[int, int] = {}
        while rem:
            k = max(rem)
            c = rem[k]
            exps = unpack(k)
            if any(e < d for e, d in zip(exps, lead_exps)) or c % lead_c:
                raise InconsistencyError(f"{divisor} does not divide {self}")
            qk = k - lead_key
            qc = c // lead_c
            quot[qk] = quot.get(qk, 0) + qc
            for dk, dc in divisor._terms.items():
                kk = dk + qk
                v = rem.get(kk, 0) - dc * qc
                if v:
                    rem[kk] = v
                else:
                    rem.pop(kk, None)
        return MultiPoly(quot)

    # -- text form --------------------------------------------------------
    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k in sorted(self._terms):
            factors = [str(self._terms[k])]
            for name in _RENDER_ORDER:
                e = _exp(k, name)
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"MultiPoly({self.render()!r})"


_FACTOR_RE = re.compile(r"^([a-z][a-z0-9]*)(?:\^(\d+))?$")


def parse(text: str) -> MultiPoly:
    """Inverse of :meth:`MultiPoly.render`."""
    text = text.strip()
    if text == "0":
        return MultiPoly()
    acc: dict[int, int] = {}
    for term in text.split(" + "):
        pieces = term.strip().split("*")
        try:
            coeff = int(pieces[0])
        except ValueError:
            raise ValueError(f"malformed term {term!r}") from None
        key = 0
        for piece in pieces[1:]:
            m = _FACTOR_RE.match(piece)
            if not m:
                raise ValueError(f"malformed factor {piece!r}")
            name, e = m.group(1), int(m.group(2) or 1)
            _var_index(name)
            key += e << _SHIFT[name]
        acc[key] = acc.get(key, 0) + coeff
    return MultiPoly(acc)


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


def V(name: str) -> MultiPoly:
    """Shorthand for the polynomial consisting of one variable."""
    return MultiPoly.var(name)


# ---------------------------------------------------------------------------
# q-numbers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def q_integer(n: int) -> MultiPoly:
    return MultiPoly({k << _SHIFT["q"]: 1 for k in range(n)})


@lru_cache(maxsize=None)
def q_factorial(n: int) -> MultiPoly:
    if n < 0:
        raise ValueError("factorial of a negative number")
    if n == 0:
        return ONE
    return q_factorial(n - 1) * q_integer(n)


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> MultiPoly:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return ONE
    # q-Pascal: [n,k] = [n-1,k-1] + q^k [n-1,k]
    return q_binomial(n - 1, k - 1) + MultiPoly.var("q", k) * q_binomial(n - 1, k)


def q_multinomial(n: int, parts: Sequence[int]) -> MultiPoly:
    if any(p <= 0 for p in parts) or sum(parts) != n:
        raise ValueError(f"{tuple(parts)} is not a composition of {n}")
    den = ONE
    for p in parts:
        den = den * q_factorial(p)
    return q_factorial(n).divexact(den)


def q_numbers(kind: str, n: int, arg: int | Sequence[int] | None = None) -> MultiPoly:
    """Dispatch for ``factorial``, ``binomial`` and ``multinomial``."""
    if kind == "factorial":
        return q_factorial(n)
    if kind == "binomial":
        if not isinstance(arg, int):
            raise ValueError("binomial needs an integer k")
        return q_binomial(n, arg)
    if kind == "multinomial":
        if arg is None or isinstance(arg, int):
            raise ValueError("multinomial needs a composition")
        return q_multinomial(n, arg)
    raise ValueError(f"unknown q-number kind {kind!r}")


# ---------------------------------------------------------------------------
# truncated q-exponential series
# ---------------------------------------------------------------------------

QMODES = ("generic", "one")


@lru_cache(maxsize=None)
def _convolution_weights(n: int, qmode: str) -> tuple[MultiPoly | int, ...]:
    if qmode == "one":
        from math import comb

        return tuple(comb(n, m) for m in range(n + 1))
    return tuple(q_binomial(n, m) for m in range(n + 1))


@dataclass(frozen=True)
class QSeries:
    """Truncated series ``sum c_n t^n / n!_q`` for ``n <= order``.

    Under ``qmode == "one"`` the normalisation is the ordinary ``t^n / n!``
    and no coefficient may mention ``q``.
    """

    order: int
    coeffs: tuple[MultiPoly, ...]
    qmode: str = "generic"

    def __post_init__(self):
        if self.qmode not in QMODES:
            raise ValueError(f"qmode must be one of {QMODES}")
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must be order + 1")
        if self.qmode == "one" and any(c.degree("q") > 0 for c in self.coeffs):
            raise ValueError("q appears in a q=1 series")

    @classmethod
    def build(cls, order: int, qmode: str, fn) -> QSeries:
        """Series whose ``n``-th coefficient is ``fn(n)`` (an int or MultiPoly)."""
        cs = []
        for n in range(order + 1):
            c = fn(n)
            cs.append(MultiPoly.const(c) if isinstance(c, int) else c)
        return cls(order, tuple(cs), qmode)

    @classmethod
    def zero(cls, order: int, qmode: str = "generic") -> QSeries:
        return cls(order, (ZERO,) * (order + 1), qmode)

    @classmethod
    def constant(cls, c: MultiPoly | int, order: int, qmode: str = "generic") -> QSeries:
        return cls.build(order, qmode, lambda n: c if n == 0 else 0)

    def __getitem__(self, n: int) -> MultiPoly:
        return self.coeffs[n]

    def _check(self, other: QSeries) -> None:
        if not isinstance(other, QSeries):
            raise TypeError(f"expected QSeries, got {type(other).__name__}")
        if other.qmode != self.qmode:
            raise ValueError(f"mixed qmode: {self.qmode} vs {other.qmode}")
        if other.order != self.order:
            raise ValueError(f"mismatched truncation order: {self.order} vs {other.order}")

    def __add__(self, other: QSeries) -> QSeries:
        self._check(other)
        return QSeries(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.qmode)

    def __sub__(self, other: QSeries) -> QSeries:
        self._check(other)
        return QSeries(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.qmode)

    def __neg__(self) -> QSeries:
        return QSeries(self.order, tuple(-a for a in self.coeffs), self.qmode)

    def __mul__(self, other: QSeries | MultiPoly | int) -> QSeries:
        if isinstance(other, (MultiPoly, int)):
            return self.scale(other)
        self._check(other)
        f, g = self.coeffs, other.coeffs
        out = []
        for n in range(self.order + 1):
            w = _convolution_weights(n, self.qmode)
            acc = ZERO
            for m in range(n + 1):
                if f[m] and g[n - m]:
                    acc = acc + (f[m] * g[n - m]) * w[m]
            out.append(acc)
        return QSeries(self.order, tuple(out), self.qmode)

    __rmul__ = __mul__

    def scale(self, c: MultiPoly | int) -> QSeries:
        return QSeries(self.order, tuple(a * c for a in self.coeffs), self.qmode)

    def rescale(self, c: MultiPoly | int) -> QSeries:
        """The series of ``f(c t)``: coefficient ``n`` multiplied by ``c**n``."""
        c = MultiPoly._coerce(c)
        out, pw = [], ONE
        for a in self.coeffs:
            out.append(a * pw)
            pw = pw * c
        return QSeries(self.order, tuple(out), self.qmode)

    def __pow__(self, e: int) -> QSeries:
        result = QSeries.constant(1, self.order, self.qmode)
        for _ in range(e):
            result = result * self
        return result


def series_ops(f: QSeries, g: QSeries | MultiPoly | int, op: str, h: QSeries | None = None, **kw):
    """Single entry point for the series operations ``add``, ``mul``, ``scale``, ``cross_check``.

    ``cross_check`` reads ``f`` as the left side, ``g`` as the numerator and
    ``h`` as the denominator.
    """
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    if op == "cross_check":
        return cross_check(f, g, h, **kw)
    raise ValueError(f"unknown series op {op!r}")


# ---------------------------------------------------------------------------
# verification reports
# ---------------------------------------------------------------------------

@dataclass
class Mismatch:
    n: int
    lhs: MultiPoly
    rhs: MultiPoly

    def to_json(self) -> dict:
        return {"n": self.n, "lhs": self.lhs.render(), "rhs": self.rhs.render()}


@dataclass
class IdentityReport:
    id: str
    nmax: int
    qmode: str
    status: str = "pass"
    first_mismatch: Mismatch | None = None
    elapsed_ms: float = 0.0
    scope: str = field(default="required", compare=False)

    def __post_init__(self):
        if (self.status == "pass") != (self.first_mismatch is None):
            raise ValueError("status must be 'pass' exactly when there is no mismatch")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "nmax": self.nmax,
            "qmode": self.qmode,
            "status": self.status,
            "first_mismatch": None if self.first_mismatch is None else self.first_mismatch.to_json(),
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> IdentityReport:
        fm = obj.get("first_mismatch")
        return cls(
            id=obj["id"],
            nmax=obj["nmax"],
            qmode=obj["qmode"],
            status=obj["status"],
            first_mismatch=None if fm is None else Mismatch(fm["n"], parse(fm["lhs"]), parse(fm["rhs"])),
            elapsed_ms=obj["elapsed_ms"],
        )


class Timer:
    def __enter__(self):
        self._t0 = time.perf_counter()
        self.ms = 0.0
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self._t0) * 1000.0


def compare_pairs(identity: str, nmax: int, qmode: str, pairs) -> IdentityReport:
    """Build a report from an iterable of ``(n, lhs, rhs)`` triples (stops at the first mismatch)."""
    with Timer() as t:
        mismatch = None
        for n, lhs, rhs in pairs:
            if lhs != rhs:
                mismatch = Mismatch(n, lhs, rhs)
                break
    return IdentityReport(identity, nmax, qmode, "pass" if mismatch is None else "fail", mismatch, t.ms)


def cross_check(lhs: QSeries, numerator: QSeries, denominator: QSeries, identity: str = "cross_check",
                start: int = 0) -> IdentityReport:
    """Check ``lhs * denominator == numerator`` coefficient-wise up to the truncation order.

    Series division is never performed, so denominators with a non-invertible
    constant term are fine.
    """
    lhs._check(numerator)
    lhs._check(denominator)
    with Timer() as t:
        prod = lhs * denominator
        mismatch = None
        for n in range(start, lhs.order + 1):
            if prod[n] != numerator[n]:
                mismatch = Mismatch(n, prod[n], numerator[n])
                break
    return IdentityReport(identity, lhs.order, lhs.qmode, "pass" if mismatch is None else "fail", mismatch, t.ms)
