"""Finite-set combinatorics: surjections, ordered block decompositions, cyclic
orders and symmetric-group characters.

Permutations are tuples in one-line notation on ``1..n``; ``p[i-1]`` is the
image of ``i``.  A *block surjection* ``[a] -> [b]`` carrying a linear order on
each fibre is stored as a tuple of ``b`` tuples; block ``j`` lists the fibre
over ``j+1`` in its decoration order.  This is exactly an associative
(permutation-word) decoration, so such tuples double as morphisms of the
category of non-commutative finite sets.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

Perm = tuple
Blocks = tuple


# ---------------------------------------------------------------- permutations

def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perms(n: int) -> list[Perm]:
    return list(itertools.permutations(range(1, n + 1)))


def compose(s: Perm, t: Perm) -> Perm:
    """``s o t`` (apply ``t`` first)."""
    return tuple(s[t[i] - 1] for i in range(len(t)))


def inverse(s: Perm) -> Perm:
    out = [0] * len(s)
    for i, v in enumerate(s, 1):
        out[v - 1] = i
    return tuple(out)


def is_perm(s: Sequence[int], n: int | None = None) -> bool:
    n = len(s) if n is None else n
    return len(s) == n and sorted(s) == list(range(1, n + 1))


def cycle_type(s: Perm) -> tuple[int, ...]:
    seen = [False] * len(s)
    out = []
    for i in range(len(s)):
        if seen[i]:
            continue
        c, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = s[j] - 1
            c += 1
        out.append(c)
    return tuple(sorted(out, reverse=True))


def perm_with_cycle_type(shape: Sequence[int]) -> Perm:
    out, start = [], 1
    for c in shape:
        out.extend(range(start + 1, start + c))
        out.append(start)
        start += c
    return tuple(out)


# ---------------------------------------------------------------- surjections

def surjections(a: int, b: int) -> Iterator[tuple[int, ...]]:
    """All surjections ``[a] -> [b]`` as value tuples, lexicographic."""
    if b == 0:
        if a == 0:
            yield ()
        return
    for f in itertools.product(range(1, b + 1), repeat=a):
        if len(set(f)) == b:
            yield f


def is_canonical(f: Sequence[int]) -> bool:
    """Restricted growth: fibres appear in order of their minima."""
    top = 0
    for v in f:
        if v > top + 1:
            return False
        top = max(top, v)
    return True


def canonical_surjections(a: int, b: int) -> Iterator[tuple[int, ...]]:
    """Restricted-growth strings of length ``a`` with maximum ``b``."""
    def rec(prefix, top):
        if len(prefix) == a:
            if top == b:
                yield tuple(prefix)
            return
        remaining = a - len(prefix)
        for v in range(1, min(top + 1, b) + 1):
            if b - max(top, v) > remaining - 1:
                continue
            prefix.append(v)
            yield from rec(prefix, max(top, v))
            prefix.pop()
    yield from rec([], 0)


def canonicalize(f: Sequence[int]) -> tuple[tuple[int, ...], Perm]:
    """Return ``(c, s)`` with ``c`` canonical and ``f(x) = s(c(x))``."""
    ren: dict[int, int] = {}
    c = []
    for v in f:
        if v not in ren:
            ren[v] = len(ren) + 1
        c.append(ren[v])
    s = [0] * len(ren)
    for v, r in ren.items():
        s[r - 1] = v
    return tuple(c), tuple(s)


def fibres(f: Sequence[int], b: int) -> list[list[int]]:
    out = [[] for _ in range(b)]
    for x, v in enumerate(f, 1):
        out[v - 1].append(x)
    return out


# ------------------------------------------------------------ block surjections

def block_identity(n: int) -> Blocks:
    return tuple((i,) for i in range(1, n + 1))


def block_surjections(a: int, b: int, canonical: bool = False) -> list[Blocks]:
    """Fibre-ordered surjections ``[a] -> [b]``; optionally only canonical ones."""
    out = []
    src = canonical_surjections(a, b) if canonical else surjections(a, b)
    for f in src:
        fib = fibres(f, b)
        for orders in itertools.product(*(itertools.permutations(x) for x in fib)):
            out.append(tuple(orders))
    return sorted(out)


def block_map(bl: Blocks) -> tuple[int, ...]:
    n = sum(len(x) for x in bl)
    f = [0] * n
    for j, blk in enumerate(bl, 1):
        for x in blk:
            f[x - 1] = j
    return tuple(f)


def block_is_canonical(bl: Blocks) -> bool:
    mins = [min(x) for x in bl]
    return mins == sorted(mins)


def block_compose(first: Blocks, second: Blocks) -> Blocks:
    """``first: [a] -> [b]`` followed by ``second: [b] -> [c]``."""
    return tuple(tuple(x for t in blk for x in first[t - 1]) for blk in second)


def block_to_words(bl: Blocks) -> tuple[tuple[int, ...], tuple[Perm, ...]]:
    """Split into the underlying map and per-fibre permutation words, where
    fibres are identified with ``1..n_j`` by increasing enumeration."""
    f = block_map(bl)
    words = []
    for blk in bl:
        rank = {x: r for r, x in enumerate(sorted(blk), 1)}
        words.append(tuple(rank[x] for x in blk))
    return f, tuple(words)


def block_from_words(f: Sequence[int], words: Sequence[Perm]) -> Blocks:
    fib = fibres(f, len(words))
    return tuple(tuple(fib[j][w - 1] for w in words[j]) for j in range(len(words)))


def lah(a: int, b: int) -> int:
    """Number of fibre-ordered set partitions of ``[a]`` into ``b`` blocks."""
    if a == b == 0:
        return 1
    if a == 0 or b == 0:
        return 0
    return factorial(a - 1) * factorial(a) // (factorial(b - 1) * factorial(b) * factorial(a - b))


# ---------------------------------------------------------------- cyclic orders

def rotate_to_one(word: Sequence[int]) -> tuple[int, ...]:
    i = list(word).index(1)
    return tuple(word[i:]) + tuple(word[:i])


def cyclic_orders(n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    return [(1,) + rest for rest in itertools.permutations(range(2, n + 1))]


# ---------------------------------------------------------------- characters

def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return out


def class_size(shape: Sequence[int]) -> int:
    n = sum(shape)
    denom = 1
    for part, mult in _multiplicities(shape):
        denom *= part ** mult * factorial(mult)
    return factorial(n) // denom


def _multiplicities(shape):
    seen: dict[int, int] = {}
    for x in shape:
        seen[x] = seen.get(x, 0) + 1
    return seen.items()


@lru_cache(maxsize=None)
def irreducible_character(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """chi^lam(mu) by the Murnaghan-Nakayama rule (border strips on beta-sets)."""
    if not mu:
        return 1 if sum(lam) == 0 else 0
    r, rest = mu[0], mu[1:]
    n = len(lam)
    beta = [lam[i] + (n - 1 - i) for i in range(n)]
    bset = set(beta)
    total = 0
    for b in beta:
        if b - r < 0 or (b - r) in bset:
            continue
        height = sum(1 for c in beta if b - r < c < b)
        nb = sorted((bset - {b}) | {b - r}, reverse=True)
        new = tuple(x - (n - 1 - i) for i, x in enumerate(nb))
        new = tuple(x for x in new if x > 0)
        total += (-1) ** height * irreducible_character(new, rest)
    return total


def character_table(n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]], list[list[int]]]:
    """(irreps, classes, table) with ``table[i][j] = chi^{irreps[i]}(classes[j])``."""
    ps = partitions(n)
    return ps, ps, [[irreducible_character(l, m) for m in ps] for l in ps]
