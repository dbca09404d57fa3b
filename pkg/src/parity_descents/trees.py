"""Min-max trees, HR operators, pi(i)-factorizations and the Andre/Simsun recognizers."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from . import kernels
from .exactalg import InconsistencyError, IdentityReport, Mismatch, MultiPoly, Timer
from .perm_core import euler_number


@dataclass(frozen=True)
class MinMaxTree:
    label: int
    left: MinMaxTree | None = None
    right: MinMaxTree | None = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None

    def size(self) -> int:
        return 1 + (self.left.size() if self.left else 0) + (self.right.size() if self.right else 0)

    def inorder(self) -> tuple[int, ...]:
        out: list[int] = []
        _inorder(self, out)
        return tuple(out)

    def labels(self) -> list[int]:
        return list(self.inorder())

    def kind(self) -> str:
        """``leaf``, ``min`` or ``max``."""
        if self.is_leaf:
            return "leaf"
        labels = self.inorder()
        if self.label == min(labels):
            return "min"
        if self.label == max(labels):
            return "max"
        raise InconsistencyError(f"node {self.label} is neither min nor max of its subtree")

    def interior_kinds(self) -> list[str]:
        out = []
        for node in _preorder(self):
            if not node.is_leaf:
                out.append(node.kind())
        return out


def _inorder(t: MinMaxTree | None, out: list[int]) -> None:
    while t is not None:
        _inorder(t.left, out)
        out.append(t.label)
        t = t.right


def _preorder(t: MinMaxTree | None):
    if t is None:
        return
    yield t
    yield from _preorder(t.left)
    yield from _preorder(t.right)


def build_tree(word: Sequence[int]) -> MinMaxTree | None:
    """``M(w)``; ``None`` for the empty word."""
    w = tuple(word)
    if len(set(w)) != len(w):
        raise ValueError(f"letters of {w} are not distinct")
    return _build(w)


def _build(w: tuple[int, ...]) -> MinMaxTree | None:
    if not w:
        return None
    lo, hi = min(w), max(w)
    i = next(k for k, v in enumerate(w) if v == lo or v == hi)
    return MinMaxTree(w[i], _build(w[:i]), _build(w[i + 1:]))


def _relabel(t: MinMaxTree | None, labels: Iterable[int]) -> MinMaxTree | None:
    """Same shape as ``t`` with labels assigned in inorder."""
    it = iter(labels)

    def go(node):
        if node is None:
            return None
        left = go(node.left)
        label = next(it)
        return MinMaxTree(label, left, go(node.right))

    return go(t)


def _spans(t: MinMaxTree | None, offset: int = 0, out: dict | None = None) -> dict[int, tuple[int, int]]:
    """Map 0-based inorder index of each node to the half-open span of its subtree."""
    if out is None:
        out = {}
    if t is None:
        return out
    lsize = t.left.size() if t.left else 0
    idx = offset + lsize
    out[idx] = (offset, offset + t.size())
    _spans(t.left, offset, out)
    _spans(t.right, idx + 1, out)
    return out


def _psi_word(word: list[int], spans: dict[int, tuple[int, int]], i: int) -> None:
    lo, hi = spans[i]
    right = word[i + 1:hi]
    if not right:
        return  # leaf or empty right subtree: fixed point
    pivot = word[i]
    sub = word[lo:hi]
    if pivot == min(sub):
        new_pivot = max(right)
    elif pivot == max(sub):
        new_pivot = min(right)
    else:
        raise InconsistencyError(f"node {pivot} is neither min nor max of its subtree")
    pool = sorted([v for v in right if v != new_pivot] + [pivot])
    ranks = sorted(range(len(right)), key=lambda k: right[k])
    rearranged = [0] * len(right)
    for r, k in enumerate(ranks):
        rearranged[k] = pool[r]
    word[i] = new_pivot
    word[i + 1:hi] = rearranged


def hr_apply(tree: MinMaxTree, positions: int | Iterable[int]) -> MinMaxTree:
    """Apply ``psi_i`` for every 1-based word position ``i`` in ``positions``.

    The operators commute, so the order of application is irrelevant.
    """
    if isinstance(positions, int):
        positions = (positions,)
    n = tree.size()
    spans = _spans(tree)
    word = list(tree.inorder())
    for i in positions:
        if not 1 <= i <= n:
            raise ValueError(f"position {i} out of range 1..{n}")
        _psi_word(word, spans, i - 1)
    return _relabel(tree, word)


def render_ascii(tree: MinMaxTree | None) -> str:
    """One node per line, children indented under their parent and tagged ``L``/``R``."""
    if tree is None:
        return "(empty)\n"
    lines: list[str] = []

    def go(node: MinMaxTree, depth: int, tag: str) -> None:
        kind = node.kind()
        note = "" if kind == "leaf" else f" [{kind}]"
        lines.append(f"{'  ' * depth}{tag}{node.label}{note}")
        if node.left is not None:
            go(node.left, depth + 1, "L: ")
        if node.right is not None:
            go(node.right, depth + 1, "R: ")

    go(tree, 0, "")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# factorization and classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    w1: tuple[int, ...]
    w2: tuple[int, ...]
    pivot: int
    w4: tuple[int, ...]
    w5: tuple[int, ...]

    def word(self) -> tuple[int, ...]:
        return (*self.w1, *self.w2, self.pivot, *self.w4, *self.w5)


def factorize(perm: Sequence[int], i: int) -> Factorization:
    """The ``pi(i)``-factorization, ``i`` being 1-based."""
    p = tuple(perm)
    if not 1 <= i <= len(p):
        raise ValueError(f"position {i} out of range 1..{len(p)}")
    k = i - 1
    pivot = p[k]
    a = k
    while a > 0 and p[a - 1] > pivot:
        a -= 1
    b = k + 1
    while b < len(p) and p[b] > pivot:
        b += 1
    return Factorization(p[:a], p[a:k], pivot, p[k + 1:b], p[b:])


def _andre_by_definition(p: Sequence[int], second: bool = False) -> bool:
    # first kind: max(w2) < max(w4) at every valley; second kind: min(w2) > min(w4)
    n = len(p)
    if n >= 2 and p[n - 2] > p[n - 1]:
        return False
    for k in range(1, n - 1):
        if p[k - 1] > p[k] > p[k + 1]:
            return False
    for k in range(1, n - 1):
        if p[k - 1] > p[k] < p[k + 1]:
            f = factorize(p, k + 1)
            if second and min(f.w2) <= min(f.w4):
                return False
            if not second and max(f.w2) >= max(f.w4):
                return False
    return True


def _andre_by_tree(p: Sequence[int]) -> bool:
    tree = build_tree(p)
    return tree is None or all(k == "min" for k in tree.interior_kinds())


def _simsun(p: Sequence[int]) -> bool:
    for k in range(3, len(p) + 1):
        r = [v for v in p if v <= k]
        if any(r[j] > r[j + 1] > r[j + 2] for j in range(len(r) - 2)):
            return False
    return True


CLASS_KINDS = ("andre_first", "simsun", "andre_second")


def classify(perm: Sequence[int], kind: str) -> bool:
    p = tuple(perm)
    if kind == "andre_first":
        by_def = _andre_by_definition(p)
        if by_def != _andre_by_tree(p):
            raise InconsistencyError(f"Andre criteria disagree on {p}")
        return by_def
    if kind == "simsun":
        return _simsun(p)
    if kind == "andre_second":
        return _andre_by_definition(p, second=True)
    raise ValueError(f"kind must be one of {CLASS_KINDS}, got {kind!r}")


def _word(p: Sequence[int]) -> str:
    return "".join(map(str, p))


def classified(n: int, kind: str) -> list[str]:
    return [_word(p) for p in itertools.permutations(range(1, n + 1)) if classify(p, kind)]


# ---------------------------------------------------------------------------
# Andre tables
# ---------------------------------------------------------------------------

def _poly(counts: Sequence[int], var: str = "x") -> MultiPoly:
    out = MultiPoly()
    for k, c in enumerate(counts):
        if c:
            out = out + MultiPoly.monomial(int(c), **{var: k})
    return out


@dataclass(frozen=True)
class AndreTable:
    n: int
    d: tuple[int, ...]
    dbar: tuple[int, ...]
    D: MultiPoly
    rs: MultiPoly  # rs_{n-1}


@lru_cache(maxsize=32)
def andre_tables(n: int) -> AndreTable:
    if n < 1:
        raise ValueError("n must be positive")
    m = n // 2
    counts = [int(c) for c in kernels.histogram("andre", n)]
    if any(counts[m + 1:]):
        raise InconsistencyError(f"an Andre permutation of length {n} has more than {m} descents")
    d = tuple(counts[: m + 1])
    dbar = tuple(sum(comb(j, i) * d[j] for j in range(i, m + 1)) for i in range(m + 1))
    rs = _poly(kernels.histogram("simsun", n - 1)) if n > 1 else MultiPoly.const(1)
    return AndreTable(n, d, dbar, _poly(d), rs)


# ---------------------------------------------------------------------------
# catalog entries
# ---------------------------------------------------------------------------

SAMPLE_WORD = (5, 6, 2, 3, 1, 4)
SAMPLE_IMAGE = (5, 1, 3, 4, 2, 6)

ANDRE_FIRST_4 = {"1234", "1324", "2314", "2134", "3124"}
SIMSUN_3 = {"231", "132", "312", "123", "213"}
ANDRE_SECOND_4 = {"1234", "1423", "3124", "3412", "4123"}


def _count_pairs(total: int, good: int) -> tuple[MultiPoly, MultiPoly]:
    return MultiPoly.const(good), MultiPoly.const(total)


def _pairs_sample(nmax):
    tree = build_tree(SAMPLE_WORD)
    image = hr_apply(tree, 2)
    yield 6, MultiPoly.const(int(image.inorder() == SAMPLE_IMAGE and image == build_tree(SAMPLE_IMAGE))), MultiPoly.const(1)


def _pairs_inorder(nmax):
    for n in range(1, nmax + 1):
        perms = list(itertools.permutations(range(1, n + 1)))
        good = sum(build_tree(p).inorder() == p for p in perms)
        yield (n, *_count_pairs(len(perms), good))


def _pairs_involution(nmax):
    for n in range(1, nmax + 1):
        total = good = 0
        for p in itertools.permutations(range(1, n + 1)):
            t = build_tree(p)
            for i in range(1, n + 1):
                once = hr_apply(t, i)
                total += 1
                good += hr_apply(once, i) == t and once == build_tree(once.inorder())
        yield (n, *_count_pairs(total, good))


def _pairs_commute(nmax):
    for n in range(1, nmax + 1):
        total = good = 0
        for p in itertools.permutations(range(1, n + 1)):
            t = build_tree(p)
            for i, j in itertools.combinations(range(1, n + 1), 2):
                total += 1
                good += hr_apply(hr_apply(t, i), j) == hr_apply(hr_apply(t, j), i)
        yield (n, *_count_pairs(total, good))


def _pairs_andre_hr(nmax):
    for n in range(1, nmax + 1):
        perms = list(itertools.permutations(range(1, n + 1)))
        good = sum(_andre_by_definition(p) == _andre_by_tree(p) for p in perms)
        yield (n, *_count_pairs(len(perms), good))


def _pairs_lists(nmax):
    ok = (
        set(classified(4, "andre_first")) == ANDRE_FIRST_4
        and set(classified(3, "simsun")) == SIMSUN_3
        and set(classified(4, "andre_second")) == ANDRE_SECOND_4
    )
    yield 4, MultiPoly.const(int(ok)), MultiPoly.const(1)


def _pairs_euler(nmax):
    for n in range(1, nmax + 1):
        yield n, MultiPoly.const(sum(andre_tables(n).d)), MultiPoly.const(euler_number(n))


def _pairs_andre2(nmax):
    for n in range(1, nmax + 1):
        counts = [0] * n
        for p in itertools.permutations(range(1, n + 1)):
            if classify(p, "andre_second"):
                counts[sum(p[k] > p[k + 1] for k in range(n - 1))] += 1
        yield n, _poly(counts), andre_tables(n).D


def _pairs_d_rs(nmax):
    for n in range(1, nmax + 1):
        t = andre_tables(n)
        yield n, t.D, t.rs


PAIR_BUILDERS = {
    "FIG1": _pairs_sample,
    "TREE_INORDER": _pairs_inorder,
    "HR_INVOLUTION": _pairs_involution,
    "HR_COMMUTE": _pairs_commute,
    "ANDRE_HR": _pairs_andre_hr,
    "ANDRE_LISTS": _pairs_lists,
    "EULER_SUM": _pairs_euler,
    "D_RS": _pairs_d_rs,
    "ANDRE2_D": _pairs_andre2,
}


def _specs():
    from .identities import Q_ONE, IdentitySpec

    rows = [
        ("FIG1", "tree", "golden min-max tree and its psi_2 image"),
        ("TREE_INORDER", "tree7", "inorder readout of M(w) is w"),
        ("HR_INVOLUTION", "tree6", "psi_i is an involution on min-max trees"),
        ("HR_COMMUTE", "tree6", "psi_i and psi_j commute"),
        ("ANDRE_HR", "tree8", "Andre factorization criterion equals the all-min-node criterion"),
        ("ANDRE_LISTS", "tree", "Andre and Simsun permutations of length 3 and 4"),
        ("EULER_SUM", "gamma9", "Andre permutations are counted by Euler numbers"),
        ("D_RS", "gamma9", "D_n(x) = rs_{n-1}(x)"),
        ("ANDRE2_D", "tree8", "second-kind Andre permutations share the descent counts d(n,j)"),
    ]
    return {i: IdentitySpec(i, Q_ONE, c, "check", d, "trees") for i, c, d in rows}


SPECS = _specs()


def verify_tree(identity: str, nmax: int) -> IdentityReport:
    if identity not in PAIR_BUILDERS:
        raise ValueError(f"unknown tree identity {identity!r}")
    with Timer() as t:
        mismatch = None
        for n, lhs, rhs in PAIR_BUILDERS[identity](nmax):
            if lhs != rhs:
                mismatch = Mismatch(n, lhs, rhs)
                break
    return IdentityReport(identity, nmax, "one", "pass" if mismatch is None else "fail", mismatch, t.ms)


def random_hr_checks(n: int, trials: int, seed: int = 0) -> tuple[int, int]:
    """Randomised involution and commutation checks; returns ``(passed, trials)``."""
    rng = random.Random(seed)
    good = 0
    for _ in range(trials):
        p = list(range(1, n + 1))
        rng.shuffle(p)
        t = build_tree(p)
        i, j = rng.randint(1, n), rng.randint(1, n)
        ti = hr_apply(t, i)
        ok = hr_apply(ti, i) == t
        ok = ok and hr_apply(ti, j) == hr_apply(hr_apply(t, j), i)
        good += ok
    return good, trials
