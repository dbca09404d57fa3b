"""Plain and signed permutations, parity-refined statistics, distribution polynomials."""

from __future__ import annotations

import itertools
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .exactalg import ONE, MultiPoly, V, parse


@dataclass(frozen=True)
class Permutation:
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if len(set(vals)) != len(vals):
            raise ValueError(f"letters of {vals} are not distinct")
        if any(v <= 0 for v in vals):
            raise ValueError(f"letters of {vals} must be positive")

    @classmethod
    def of(cls, word: str | Sequence[int]) -> Permutation:
        if isinstance(word, str):
            word = [int(ch) for ch in word]
        return cls(tuple(word))

    @property
    def n(self) -> int:
        return len(self.values)

    def is_sn(self) -> bool:
        return sorted(self.values) == list(range(1, self.n + 1))

    def __str__(self) -> str:
        sep = "" if self.n < 10 else " "
        return sep.join(map(str, self.values))


@dataclass(frozen=True)
class SignedPermutation:
    """``sigma(1..n)``; the leading ``sigma(0) = 0`` is implicit."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if sorted(abs(v) for v in vals) != list(range(1, len(vals) + 1)):
            raise ValueError(f"|{vals}| is not a permutation of [{len(vals)}]")

    @property
    def n(self) -> int:
        return len(self.values)

    def absolute(self) -> Permutation:
        return Permutation(tuple(abs(v) for v in self.values))

    def __str__(self) -> str:
        return " ".join(map(str, self.values))


@dataclass(frozen=True)
class StatProfile:
    asc0: int
    asc1: int
    des0: int
    des1: int
    inv: int
    altdes: int
    lpk: int


class FamilyId(str, Enum):
    P_A = "P_A"
    A = "A"
    AHAT = "AHAT"
    E = "E"
    B = "B"
    BHAT = "BHAT"
    PB = "PB"
    B_PLUS = "B_PLUS"
    B_MINUS = "B_MINUS"
    ATILDE = "ATILDE"
    ABAR = "ABAR"
    BTILDE = "BTILDE"
    BBAR = "BBAR"
    ALT_A = "ALT_A"
    ALT_B = "ALT_B"

    @classmethod
    def parse(cls, text: str | FamilyId) -> FamilyId:
        if isinstance(text, FamilyId):
            return text
        try:
            return cls(text.upper())
        except ValueError:
            raise ValueError(f"unknown family {text!r}; choose from {[f.value for f in cls]}") from None


SIGNED_FAMILIES = {
    FamilyId.B, FamilyId.BHAT, FamilyId.PB, FamilyId.B_PLUS, FamilyId.B_MINUS,
    FamilyId.BTILDE, FamilyId.BBAR, FamilyId.ALT_B,
}

ENUM_KINDS = ("S", "B", "B_plus", "B_minus", "UpDown")


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def is_up_down(values: Sequence[int]) -> bool:
    return all((values[i] < values[i + 1]) == (i % 2 == 0) for i in range(len(values) - 1))


def enumerate_perms(n: int, kind: str = "S") -> Iterator[Permutation | SignedPermutation]:
    """Stream every element of ``S_n``, ``B_n``, ``B_n^+``, ``B_n^-`` or ``UD_n`` once."""
    _check_n(n)
    if kind not in ENUM_KINDS:
        raise ValueError(f"kind must be one of {ENUM_KINDS}")
    if kind == "S":
        for p in itertools.permutations(range(1, n + 1)):
            yield Permutation(p)
    elif kind == "UpDown":
        for p in itertools.permutations(range(1, n + 1)):
            if is_up_down(p):
                yield Permutation(p)
    else:
        first_signs = {"B": (1, -1), "B_plus": (1,), "B_minus": (-1,)}[kind]
        for p in itertools.permutations(range(1, n + 1)):
            for s0 in first_signs:
                for signs in itertools.product((1, -1), repeat=n - 1):
                    yield SignedPermutation((s0 * p[0],) + tuple(s * v for s, v in zip(signs, p[1:])))


def _lpk(word: Sequence[int]) -> int:
    n = len(word)
    u = (0, *word, n + 1)
    return sum(1 for i in range(1, n) if u[i - 1] < u[i] > u[i + 1])


def stat_profile(w: Permutation | SignedPermutation) -> StatProfile:
    """Parity-refined ascent/descent counts, inversions, alternating descents and left peaks.

    Plain words use positions ``1..n-1``. Signed words are read as
    ``0 sigma(1) ... sigma(n)`` with positions ``0..n-1``. For signed input
    ``inv`` counts inversions of the window ``sigma(1..n)`` and ``lpk`` is
    taken on ``|sigma|``.
    """
    vals = w.values
    n = len(vals)
    if isinstance(w, SignedPermutation):
        word = (0, *vals)
        positions = range(0, n)
        lpk = _lpk([abs(v) for v in vals])
    elif isinstance(w, Permutation):
        word = (None, *vals)
        positions = range(1, n)
        lpk = _lpk(vals)
    else:
        raise TypeError(f"expected a permutation, got {type(w).__name__}")
    counts = {"asc0": 0, "asc1": 0, "des0": 0, "des1": 0}
    for i in positions:
        kind = "des" if word[i] > word[i + 1] else "asc"
        counts[f"{kind}{i % 2}"] += 1
    inv = sum(1 for i in range(n) for j in range(i + 1, n) if vals[i] > vals[j])
    return StatProfile(inv=inv, altdes=counts["des1"] + counts["asc0"], lpk=lpk, **counts)


def involution(w: Permutation | SignedPermutation, kind: str):
    """``complement`` (``n+1-sigma(i)``) on plain permutations, ``negate`` on signed ones."""
    if kind == "complement":
        if not isinstance(w, Permutation) or not w.is_sn():
            raise ValueError("complement needs a permutation of [n]")
        return Permutation(tuple(w.n + 1 - v for v in w.values))
    if kind == "negate":
        if not isinstance(w, SignedPermutation):
            raise ValueError("negate needs a signed permutation")
        return SignedPermutation(tuple(-v for v in w.values))
    raise ValueError(f"unknown involution {kind!r}")


# ---------------------------------------------------------------------------
# distribution polynomials
# ---------------------------------------------------------------------------

_cache_dir: Path | None = None
_cache_env = "PARITY_DESCENTS_CACHE"


def cache_dir() -> Path | None:
    """Current on-disk cache root; ``None`` disables disk caching."""
    if _cache_dir is not None:
        return _cache_dir
    env = os.environ.get(_cache_env)
    if env is not None:
        return None if env.lower() in ("", "off", "none") else Path(env)
    return None


def set_cache_dir(path: str | Path | None) -> None:
    global _cache_dir
    _cache_dir = None if path is None else Path(path)
    distribution.cache_clear()


def cached_files(root: Path | None = None) -> list[Path]:
    root = root or cache_dir()
    if root is None or not root.exists():
        return []
    return sorted(root.glob("*/*.poly"))


def _read_cache(family: FamilyId, n: int) -> MultiPoly | None:
    root = cache_dir()
    if root is None:
        return None
    path = root / family.value / f"{n}.poly"
    if not path.exists():
        return None
    return parse(path.read_text())


def _write_cache(family: FamilyId, n: int, poly: MultiPoly) -> None:
    root = cache_dir()
    if root is None:
        return
    folder = root / family.value
    folder.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(poly.render() + "\n")
    os.replace(tmp, folder / f"{n}.poly")


@lru_cache(maxsize=8)
def plain_histogram(n: int, jobs: int = 1) -> np.ndarray:
    """Joint counts over S_n indexed ``[des0, des1, inv, lpk]``."""
    h = kernels.histogram("plain", n, jobs=jobs)
    h.setflags(write=False)
    return h


@lru_cache(maxsize=8)
def signed_histogram(n: int, jobs: int = 1) -> np.ndarray:
    """Joint counts over B_n indexed ``[sigma(1) < 0, des0, des1]`` (position 0 included)."""
    h = kernels.histogram("signed", n, jobs=jobs)
    h.setflags(write=False)
    return h


def _from_plain(n: int, family: FamilyId, jobs: int) -> MultiPoly:
    H = plain_histogram(n, jobs).sum(axis=3)
    e0, e1 = (n - 1) // 2, n // 2
    acc: dict[tuple, int] = {}

    def add(c, **pw):
        key = tuple(sorted(pw.items()))
        acc[key] = acc.get(key, 0) + c

    for d0, d1, inv in zip(*np.nonzero(H)):
        c = int(H[d0, d1, inv])
        d0, d1, inv = int(d0), int(d1), int(inv)
        a0, a1 = e0 - d0, e1 - d1
        if family is FamilyId.P_A:
            add(c, x0=a0, x1=a1, y0=d0, y1=d1, q=inv)
        elif family is FamilyId.A:
            add(c, x=d1, y=d0, q=inv)
        elif family is FamilyId.AHAT:
            add(c, x=d1, y=a0, q=inv)
        elif family is FamilyId.E:
            if d0 == e0 and d1 == 0:
                add(c, q=inv)
        elif family is FamilyId.ATILDE:
            add(c, x=d1, y=d0)
        elif family is FamilyId.ABAR:
            add(c, x=d1, y=a0)
        elif family is FamilyId.ALT_A:
            add(c, x=d1 + a0)
    poly = MultiPoly()
    for key, c in acc.items():
        poly = poly + MultiPoly.monomial(c, **dict(key))
    if family in (FamilyId.ATILDE, FamilyId.ABAR) and n % 2 == 0:
        poly = poly * (ONE + V("y"))
    return poly


def _from_signed(n: int, family: FamilyId, jobs: int) -> MultiPoly:
    H = signed_histogram(n, jobs)
    if family is FamilyId.B_PLUS:
        H = H[0:1]
    elif family is FamilyId.B_MINUS:
        H = H[1:2]
    H = H.sum(axis=0)
    e0, e1 = (n + 1) // 2, n // 2
    poly = MultiPoly()
    for d0, d1 in zip(*np.nonzero(H)):
        c = int(H[d0, d1])
        d0, d1 = int(d0), int(d1)
        a0, a1 = e0 - d0, e1 - d1
        if family is FamilyId.PB:
            m = MultiPoly.monomial(c, x0=a0, x1=a1, y0=d0, y1=d1)
        elif family in (FamilyId.BHAT, FamilyId.BBAR):
            m = MultiPoly.monomial(c, x=d1, y=a0)
        elif family is FamilyId.ALT_B:
            m = MultiPoly.monomial(c, x=d1 + a0)
        else:
            m = MultiPoly.monomial(c, x=d1, y=d0)
        poly = poly + m
    if family in (FamilyId.BTILDE, FamilyId.BBAR) and n % 2 == 1:
        poly = poly.divexact(ONE + V("y"))
    return poly


@lru_cache(maxsize=512)
def distribution(n: int, family: FamilyId | str, jobs: int = 1) -> MultiPoly:
    """Exact distribution polynomial of one family at length ``n``.

    ``A``, ``AHAT``, ``E`` and ``P_A`` carry ``q^inv``; every other family is
    taken at ``q = 1``. The tilde/bar families apply the ``(1+y)`` scalings,
    with the odd-length type-B divisions checked to be exact.
    """
    _check_n(n)
    family = FamilyId.parse(family)
    hit = _read_cache(family, n)
    if hit is not None:
        return hit
    if family in SIGNED_FAMILIES:
        poly = _from_signed(n, family, jobs)
    else:
        poly = _from_plain(n, family, jobs)
    _write_cache(family, n, poly)
    return poly


def brute_distribution(n: int, family: FamilyId | str) -> MultiPoly:
    """Reference path: per-permutation enumeration through :func:`stat_profile`.

    Slow; used to cross-check the kernel-backed :func:`distribution`.
    """
    _check_n(n)
    family = FamilyId.parse(family)
    kind = {FamilyId.B_PLUS: "B_plus", FamilyId.B_MINUS: "B_minus", FamilyId.E: "UpDown"}.get(
        family, "B" if family in SIGNED_FAMILIES else "S"
    )
    acc: dict[tuple, int] = {}
    for w in enumerate_perms(n, kind):
        s = stat_profile(w)
        if family is FamilyId.P_A or family is FamilyId.PB:
            pw = dict(x0=s.asc0, x1=s.asc1, y0=s.des0, y1=s.des1)
            if family is FamilyId.P_A:
                pw["q"] = s.inv
        elif family is FamilyId.A:
            pw = dict(x=s.des1, y=s.des0, q=s.inv)
        elif family is FamilyId.AHAT:
            pw = dict(x=s.des1, y=s.asc0, q=s.inv)
        elif family is FamilyId.E:
            pw = dict(q=s.inv)
        elif family in (FamilyId.ABAR, FamilyId.BHAT, FamilyId.BBAR):
            pw = dict(x=s.des1, y=s.asc0)
        elif family in (FamilyId.ALT_A, FamilyId.ALT_B):
            pw = dict(x=s.altdes)
        else:
            pw = dict(x=s.des1, y=s.des0)
        key = tuple(sorted(pw.items()))
        acc[key] = acc.get(key, 0) + 1
    poly = MultiPoly()
    for key, c in acc.items():
        poly = poly + MultiPoly.monomial(c, **dict(key))
    if family in (FamilyId.ATILDE, FamilyId.ABAR) and n % 2 == 0:
        poly = poly * (ONE + V("y"))
    if family in (FamilyId.BTILDE, FamilyId.BBAR) and n % 2 == 1:
        poly = poly.divexact(ONE + V("y"))
    return poly


def lpk_histogram(n: int) -> list[int]:
    """``g(n, i)``: number of ``u`` in S_n with ``i`` left peaks."""
    H = plain_histogram(n).sum(axis=(0, 1, 2))
    return [int(v) for v in H]


def euler_number(n: int) -> int:
    """``|UD_n|``, read off the up-down slice of the plain histogram."""
    return int(plain_histogram(n)[(n - 1) // 2, 0].sum())
