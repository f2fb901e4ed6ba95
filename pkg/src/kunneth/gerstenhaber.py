"""Normal forms in free Gerstenhaber algebras on degree-0 letters.

Sign conventions, used everywhere in the package (|a| is the degree,
||a|| = |a| + 1 the shifted degree, and the bracket has degree +1):

* product:   ab = (-1)^(|a||b|) ba
* bracket:   [a, b] = -(-1)^(||a|| ||b||) [b, a]
             (so [x1, x2] = [x2, x1] for degree-0 letters)
* Jacobi:    [a, [b, c]] = [[a, b], c] + (-1)^(||a|| ||b||) [b, [a, c]]
* Leibniz:   [a, bc] = [a, b]c + (-1)^(||a|| |b|) b[a, c]

Data layout
-----------
comb      tuple of letters ``(y1, ..., yr)`` meaning the left-normed bracket
          ``[[...[y1, y2], ...], yr]``.  Normal-form combs have ``y1 = min``;
          these form a basis of the multilinear part of the free Lie algebra.
monomial  tuple of normal-form combs on disjoint letters, sorted by first letter.
element   ``{monomial: int}``, zero coefficients never stored.

A Lie element is put in normal form by expanding it in the tensor algebra
(graded commutator, letters odd).  The comb ``(m, y2, ..., yr)`` is the only
basis comb whose expansion contains the word ``m y2 ... yr``, and it does so
with coefficient +1, so comb coefficients are read off from words that start
with the minimal letter.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Mapping

Comb = tuple
Monomial = tuple
Element = dict


class RewriteBudgetExceeded(RuntimeError):
    """Normal-form rewriting did not finish inside the configured budget."""


REWRITE_BUDGET = 10_000_000


def comb_degree(c: Comb) -> int:
    return len(c) - 1


def degree(m: Monomial) -> int:
    return sum(len(c) - 1 for c in m)


def letters(m: Monomial) -> list[int]:
    return [y for c in m for y in c]


def _add(acc: dict, key, v) -> None:
    nv = acc.get(key, 0) + v
    if nv:
        acc[key] = nv
    else:
        acc.pop(key, None)


@lru_cache(maxsize=None)
def _comb_pattern(r: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Tensor expansion of ``[[...[y0, y1], ...], y_{r-1}]`` as (positions, sign)."""
    if r == 1:
        return (((0,), 1),)
    out: dict[tuple[int, ...], int] = {}
    s = 1 if (r - 1) % 2 else -1  # -(-1)^(r-1): odd letter y passes a word of r-1 odd letters
    for w, c in _comb_pattern(r - 1):
        _add(out, w + (r - 1,), c)
        _add(out, (r - 1,) + w, s * c)
    return tuple(sorted(out.items()))


def expand(c: Comb) -> dict[tuple[int, ...], int]:
    return {tuple(c[i] for i in w): s for w, s in _comb_pattern(len(c))}


@lru_cache(maxsize=200_000)
def normalize_comb(c: Comb) -> tuple[tuple[Comb, int], ...]:
    """Rewrite a left-normed comb with arbitrary first letter in the comb basis."""
    m = min(c)
    if c[0] == m:
        return ((c, 1),)
    return tuple(sorted((w, s) for w, s in expand(c).items() if w[0] == m))


@lru_cache(maxsize=200_000)
def lie_bracket(u: Comb, v: Comb) -> tuple[tuple[Comb, int], ...]:
    """``[u, v]`` for normal-form combs on disjoint letters, in the comb basis."""
    if u[0] < v[0]:
        return tuple(sorted((u + w, s) for w, s in expand(v).items()))
    sign = 1 if (len(u) * len(v)) % 2 else -1
    return tuple(sorted((v + w, sign * s) for w, s in expand(u).items()))


def mono_mul(*monos: Monomial) -> tuple[int, Monomial]:
    """Graded-commutative product of monomials, returned as (sign, monomial)."""
    combs = [c for m in monos for c in m]
    odd = [c[0] for c in combs if len(c) % 2 == 0]
    inv = 0
    for i in range(len(odd)):
        a = odd[i]
        for j in range(i + 1, len(odd)):
            if a > odd[j]:
                inv ^= 1
    return (-1 if inv else 1), tuple(sorted(combs))


def mul(*elts: Mapping) -> Element:
    acc: Element = {(): 1}
    for e in elts:
        nxt: Element = {}
        for m1, c1 in acc.items():
            for m2, c2 in e.items():
                s, m = mono_mul(m1, m2)
                _add(nxt, m, s * c1 * c2)
        acc = nxt
    return acc


def add(*elts: Mapping) -> Element:
    acc: Element = {}
    for e in elts:
        for m, c in e.items():
            _add(acc, m, c)
    return acc


def scale(e: Mapping, s: int) -> Element:
    return {m: c * s for m, c in e.items()} if s else {}


def letter(y: int) -> Element:
    return {((y,),): 1}


@lru_cache(maxsize=200_000)
def _bracket_mono(a: Monomial, b: Monomial) -> tuple[tuple[Monomial, int], ...]:
    if not a or not b:
        raise ValueError("bracket with the empty product is not defined here")
    out: Element = {}
    if len(a) > 1:
        # [a1 a', c] = a1 [a', c] + (-1)^(|a'| ||c||) [a1, c] a'
        a1, rest = a[:1], a[1:]
        for m, c in _bracket_mono(rest, b):
            s, mm = mono_mul(a1, m)
            _add(out, mm, s * c)
        sgn = -1 if (degree(rest) * (degree(b) + 1)) % 2 else 1
        for m, c in _bracket_mono(a1, b):
            s, mm = mono_mul(m, rest)
            _add(out, mm, sgn * s * c)
    elif len(b) > 1:
        # [a, b1 b'] = [a, b1] b' + (-1)^(||a|| |b1|) b1 [a, b']
        b1, rest = b[:1], b[1:]
        for m, c in _bracket_mono(a, b1):
            s, mm = mono_mul(m, rest)
            _add(out, mm, s * c)
        sgn = -1 if ((degree(a) + 1) * degree(b1)) % 2 else 1
        for m, c in _bracket_mono(a, rest):
            s, mm = mono_mul(b1, m)
            _add(out, mm, sgn * s * c)
    else:
        for w, c in lie_bracket(a[0], b[0]):
            _add(out, (w,), c)
    return tuple(sorted(out.items()))


def bracket(x: Mapping, y: Mapping) -> Element:
    out: Element = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            for m, c in _bracket_mono(m1, m2):
                _add(out, m, c * c1 * c2)
    return out


def relabel(e: Mapping, mapping) -> Element:
    """Rename letters and return the normal form."""
    f = mapping if callable(mapping) else mapping.__getitem__
    out: Element = {}
    for mono, coeff in e.items():
        factors = []
        for c in mono:
            nc = tuple(f(y) for y in c)
            factors.append({(w,): s for w, s in normalize_comb(nc)})
        for m, c in mul(*factors).items():
            _add(out, m, c * coeff)
    return out


def relabel_monotone(m: Monomial, mapping: Mapping[int, int]) -> Monomial:
    """Rename letters by an order-preserving map; normal form is preserved."""
    return tuple(tuple(mapping[y] for y in c) for c in m)


def substitute(p: Monomial, slot: int, q: Mapping, shift_after: int) -> Element:
    """Operadic substitution of the homogeneous element ``q`` (already on its
    final letters) for the letter ``slot`` of the normal-form monomial ``p``;
    letters of ``p`` above ``slot`` are raised by ``shift_after``.

    Operadic evaluation moves inputs past operation symbols with Koszul signs,
    which makes the evaluated bracket ``{a, c} = (-1)^|a| [a, c]``.  Writing
    ``p`` with ``{}`` brackets, evaluating, and converting back leaves the sign
    ``(-1)^(|q| * (D + t))``: ``D`` counts brackets of the factors after the
    one containing ``slot`` and ``t`` counts letters after ``slot`` in its comb.
    """
    def ren(y):
        return y + shift_after if y > slot else y

    j0 = next(j for j, c in enumerate(p) if slot in c)
    comb = p[j0]
    flips = sum(len(c) - 1 for c in p[j0 + 1:]) + len(comb) - 1 - comb.index(slot)
    factors: list[Element] = []
    for j, c in enumerate(p):
        if j != j0:
            factors.append({(tuple(ren(y) for y in c),): 1})
            continue
        acc = q if c[0] == slot else letter(ren(c[0]))
        for y in c[1:]:
            acc = bracket(acc, q if y == slot else letter(ren(y)))
        factors.append(acc)
    res = mul(*factors)
    if flips % 2:
        qdeg = {degree(m) % 2 for m in q}
        if len(qdeg) > 1:
            raise ValueError("substitution of an inhomogeneous element")
        if qdeg == {1}:
            res = scale(res, -1)
    return res


def basis(n: int) -> list[Monomial]:
    """Normal-form monomials on letters 1..n, sorted."""
    out = []
    for blocks in set_partitions(list(range(1, n + 1))):
        per_block = [[(b[0],) + rest for rest in permutations(b[1:])] for b in blocks]
        for choice in product(*per_block):
            out.append(tuple(sorted(choice)))
    return sorted(out)


def set_partitions(items: list) -> Iterable[list[tuple]]:
    """Set partitions with blocks listed by minimal element (items sorted)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [(first,)] + part
        for i in range(len(part)):
            yield part[:i] + [(first,) + part[i]] + part[i + 1:]


def check_budget(n: int) -> None:
    if n > REWRITE_BUDGET:
        raise RewriteBudgetExceeded(f"rewrite budget {REWRITE_BUDGET} exceeded")
