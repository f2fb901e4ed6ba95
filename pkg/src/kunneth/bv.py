"""Diagonal of the tensored bar resolutions as a chain of free Ger-modules.

A level-``p`` basis word at arity ``k`` is ``(phi, layers, x, y)``:

phi     ``(l, m, decs)``: a Ger-decorated surjection ``[k] -> [l] x [m]``.
        ``[l] x [m]`` is identified with ``[lm]`` lexicographically and
        ``decs[s-1]`` is the decoration of target ``s``, written as a
        normal-form monomial on the actual letters of its fibre.
layers  ``p`` pairs ``(A_i, B_i)`` of fibre-ordered surjections
        ``[l_{i-1}] -> [l_i]`` and ``[m_{i-1}] -> [m_i]``.
x, y    basis labels of ``M(l_p)`` and ``N(m_p)``.

Faces: ``d_0`` pushes ``(A_1, B_1)`` into ``phi``; the interchange class of two
associative decorations is the product monomial, so the new decoration of
``(j, j')`` is the product of the old ones over its fibre, with the Koszul sign
of re-sorting the odd combs.  ``d_i`` for ``0 < i < p`` composes adjacent
layer pairs and ``d_p`` acts with the last pair on ``x`` and ``y``.

Normalized words have no layer pair with both sides the identity.

Two bases are available.  ``sequential`` allows every surjection.
``reduced`` keeps only words whose surjections are all canonical (fibres
ordered by their minima; for ``phi`` both projections).  That set is closed
under all faces, and it maps isomorphically onto the bar construction
relative to the symmetric groups, which computes the same derived tensor
product because rational group algebras are semisimple.  The reduced complex
is finite: each layer pair lowers ``l + m``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from . import gerstenhaber as gz
from .combinatorics import (block_compose, block_identity, block_is_canonical, block_map,
                            block_surjections, canonical_surjections, canonicalize, surjections)
from .graded import BasisElement, GradedSpace, tensor
from .linalg import SparseMatrix
from .modules import RightModule

MODES = ("reduced", "sequential")


def _acc(out: dict, key, v) -> None:
    nv = out.get(key, 0) + v
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


def sequence_tensor(x: Mapping[int, GradedSpace], y: Mapping[int, GradedSpace], n: int) -> GradedSpace:
    """``(X * Y)(n)``: direct sum over ``l m = n`` of ``X(l) (x) Y(m)``.

    Labels are ``(l, m, x_label, y_label)``.
    """
    basis = []
    for l in range(1, n + 1):
        if n % l:
            continue
        m = n // l
        xs, ys = x.get(l), y.get(m)
        if xs is None or ys is None:
            continue
        for b in tensor([xs, ys]).basis:
            basis.append(BasisElement((l, m) + b.label, b.degree))
    if n == 0 and 0 in x and 0 in y:
        for b in tensor([x[0], y[0]]).basis:
            basis.append(BasisElement((0, 0) + b.label, b.degree))
    return GradedSpace(basis)


def odd_sort_sign(keys_in_order: list) -> int:
    """Sign of sorting odd factors, given their target keys in current order."""
    inv = 0
    n = len(keys_in_order)
    for i in range(n):
        a = keys_in_order[i]
        for j in range(i + 1, n):
            if a > keys_in_order[j]:
                inv ^= 1
    return -1 if inv else 1


def phi_degree(decs) -> int:
    return sum(len(c) - 1 for mono in decs for c in mono)


def _fibre_monomials(letters: tuple) -> list:
    """Ger basis monomials on the given (sorted) letters."""
    ren = {i: y for i, y in enumerate(letters, 1)}
    return [gz.relabel_monotone(mono, ren) for mono in gz.basis(len(letters))]


@dataclass
class DiagEngine:
    """Enumerates diagonal levels and evaluates faces for ``(M, N)`` at arity ``k``."""

    left: RightModule
    right: RightModule
    k: int
    mode: str = "reduced"
    normalized: bool = True
    _levels: dict = field(default_factory=dict, repr=False)
    _spaces: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.k < 0:
            raise ValueError("arity must be non-negative")
        if self.k > min(self.left.max_arity, self.right.max_arity):
            raise TruncationError(f"arity {self.k} exceeds module truncation")
        self.canonical = self.mode == "reduced"

    # ------------------------------------------------------------ enumeration
    def phis(self) -> list[tuple]:
        k = self.k
        if k == 0:
            return [(0, 0, ())]
        out = []
        for l in range(1, k + 1):
            for m in range(1, k // l + 1):
                for f in self._grid_maps(l, m):
                    fib = [[] for _ in range(l * m)]
                    for a, s in enumerate(f, 1):
                        fib[s - 1].append(a)
                    for decs in itertools.product(*(_fibre_monomials(tuple(x)) for x in fib)):
                        out.append((l, m, decs))
        return out

    def _grid_maps(self, l: int, m: int) -> Iterable[tuple]:
        k = self.k
        if self.canonical:
            for r in canonical_surjections(k, l):
                for c in canonical_surjections(k, m):
                    f = tuple((a - 1) * m + b for a, b in zip(r, c))
                    if len(set(f)) == l * m:
                        yield f
        else:
            yield from surjections(k, l * m)

    def layer_options(self, a: int, b: int) -> list:
        return _layer_options(a, b, self.canonical)

    def chains(self, l: int, m: int, p: int) -> list[tuple]:
        """Normalized (or all) chains of ``p`` layer pairs starting at ``(l, m)``."""
        key = (l, m, p)
        got = self._levels.get(key)
        if got is not None:
            return got
        if p == 0:
            res = [((), l, m)]
        else:
            res = []
            for l1 in range(1, l + 1):
                for m1 in range(1, m + 1):
                    As = self.layer_options(l, l1)
                    Bs = self.layer_options(m, m1)
                    for A in As:
                        for B in Bs:
                            if self.normalized and l1 == l and m1 == m and A == block_identity(l) \
                                    and B == block_identity(m):
                                continue
                            for rest, lp, mp in self.chains(l1, m1, p - 1):
                                res.append((((A, B),) + rest, lp, mp))
        self._levels[key] = res
        return res

    def level(self, p: int) -> GradedSpace:
        sp = self._spaces.get(p)
        if sp is not None:
            return sp
        basis = []
        if self.k == 0:
            if p == 0 or not self.normalized:
                x0 = self.left.component(0).basis[0]
                y0 = self.right.component(0).basis[0]
                layers = ((((), ()),) * p)
                basis.append(BasisElement(((0, 0, ()), layers, x0.label, y0.label), 0))
        else:
            for phi in self.phis():
                l, m, decs = phi
                dphi = phi_degree(decs)
                for layers, lp, mp in self.chains(l, m, p):
                    for xb in self.left.component(lp).basis:
                        for yb in self.right.component(mp).basis:
                            basis.append(BasisElement((phi, layers, xb.label, yb.label),
                                                      dphi + xb.degree + yb.degree))
        sp = GradedSpace(basis)
        self._spaces[p] = sp
        return sp

    # ------------------------------------------------------------ faces
    def face(self, p: int, i: int, word) -> dict:
        if not 0 <= i <= p or p == 0:
            raise ValueError(f"face d_{i} undefined at level {p}")
        phi, layers, x, y = word
        if self.k == 0:
            return {} if self.normalized else {(phi, layers[:-1], x, y): 1}
        if i == 0:
            sign, nphi = push_layer(phi, layers[0])
            return {(nphi, layers[1:], x, y): sign}
        if i < p:
            (A1, B1), (A2, B2) = layers[i - 1], layers[i]
            A, B = block_compose(A1, A2), block_compose(B1, B2)
            if self.normalized and _is_id(A) and _is_id(B):
                return {}
            return {(phi, layers[:i - 1] + ((A, B),) + layers[i + 1:], x, y): 1}
        A, B = layers[-1]
        out: dict = {}
        for xl, cx in self.left.act_blocks(x, A).items():
            for yl, cy in self.right.act_blocks(y, B).items():
                _acc(out, (phi, layers[:-1], xl, yl), cx * cy)
        return out

    def boundary(self, p: int, word) -> dict:
        out: dict = {}
        for i in range(p + 1):
            s = -1 if i % 2 else 1
            for w, c in self.face(p, i, word).items():
                _acc(out, w, s * c)
        return out

    def differential(self, p: int, q: int) -> SparseMatrix:
        """``C_{p,q} -> C_{p-1,q}`` in the degree-``q`` bases."""
        src = self.level(p).in_degree(q) if p >= 0 else []
        if p <= 0:
            return SparseMatrix(0, len(src))
        tgt = self.level(p - 1).in_degree(q)
        index = {b.label: r for r, b in enumerate(tgt)}
        entries = {}
        for c, b in enumerate(src):
            for w, v in self.boundary(p, b.label).items():
                entries[(index[w], c)] = v
        return SparseMatrix(len(tgt), len(src), entries)

    def max_level(self) -> int | None:
        """Top non-empty level of the reduced complex (``None`` if unbounded)."""
        if self.normalized and self.canonical:
            if self.k == 0:
                return 0
            return max(l + m - 2 for l, m, _ in self.phis())
        if self.normalized and self.k == 0:
            return 0
        return None

    # ------------------------------------------------------------ symmetric group
    def act(self, sigma: tuple, word) -> dict:
        """Action of ``sigma`` in ``S_k`` (renaming the points ``a -> sigma(a)``)."""
        phi, layers, x, y = word
        l, m, decs = phi
        if self.k == 0:
            return {word: 1}
        # rename letters inside each decoration; tensor factors keep their targets
        per_target = [gz.relabel({mono: 1}, lambda a: sigma[a - 1]) for mono in decs]
        out: dict = {}
        for choice in itertools.product(*(list(e.items()) for e in per_target)):
            coeff = 1
            for _, c in choice:
                coeff *= c
            ndecs = tuple(mono for mono, _ in choice)
            if not self.canonical:
                _acc(out, ((l, m, ndecs), layers, x, y), coeff)
                continue
            for w, c in self._recanonicalize(l, m, ndecs, layers, x, y).items():
                _acc(out, w, coeff * c)
        return out

    def _recanonicalize(self, l, m, decs, layers, x, y) -> dict:
        # row and column of every point
        row = {}
        col = {}
        for s, mono in enumerate(decs, 1):
            a, b = divmod(s - 1, m)
            for comb in mono:
                for pt in comb:
                    row[pt], col[pt] = a + 1, b + 1
        r = tuple(row[pt] for pt in range(1, self.k + 1))
        c = tuple(col[pt] for pt in range(1, self.k + 1))
        _, sr = canonicalize(r)   # r = sr o r_can
        _, sc = canonicalize(c)
        inv_r = {v: i for i, v in enumerate(sr, 1)}
        inv_c = {v: i for i, v in enumerate(sc, 1)}
        # new target of old target s
        keys = []
        ndecs = [None] * (l * m)
        for s, mono in enumerate(decs, 1):
            a, b = divmod(s - 1, m)
            t = (inv_r[a + 1] - 1) * m + inv_c[b + 1]
            ndecs[t - 1] = mono
            if gz.degree(mono) % 2:
                keys.append(t)
        sign = odd_sort_sign(keys)
        # push the bijections (sr, sc) down the chain
        ua, ub = sr, sc
        nlayers = []
        for A, B in layers:
            A2 = _precompose(A, ua)
            B2 = _precompose(B, ub)
            A3, ua = _canon_blocks(A2)
            B3, ub = _canon_blocks(B2)
            nlayers.append((A3, B3))
        out: dict = {}
        nphi = (l, m, tuple(ndecs))
        xs = self.left.act_blocks(x, _bijection_blocks(ua))
        ys = self.right.act_blocks(y, _bijection_blocks(ub))
        for xl, cx in xs.items():
            for yl, cy in ys.items():
                _acc(out, (nphi, tuple(nlayers), xl, yl), sign * cx * cy)
        return out

    def action_matrix(self, p: int, q: int, sigma: tuple) -> SparseMatrix:
        basis = self.level(p).in_degree(q)
        index = {b.label: r for r, b in enumerate(basis)}
        entries = {}
        for c, b in enumerate(basis):
            for w, v in self.act(sigma, b.label).items():
                entries[(index[w], c)] = v
        return SparseMatrix(len(basis), len(basis), entries)


class TruncationError(ValueError):
    pass


def _is_id(bl) -> bool:
    return all(len(b) == 1 and b[0] == j for j, b in enumerate(bl, 1))


@lru_cache(maxsize=None)
def _layer_options(a: int, b: int, canonical: bool) -> tuple:
    return tuple(block_surjections(a, b, canonical=canonical))


def push_layer(phi, pair) -> tuple[int, tuple]:
    """``d_0``: compose the outer Ger layer with the interchange of ``pair``."""
    l, m, decs = phi
    A, B = pair
    alpha, beta = block_map(A), block_map(B)
    l1, m1 = len(A), len(B)
    target_keys = []
    buckets: list[list] = [[] for _ in range(l1 * m1)]
    for s, mono in enumerate(decs, 1):
        a, b = divmod(s - 1, m)
        t = (alpha[a] - 1) * m1 + beta[b]
        for comb in mono:
            buckets[t - 1].append(comb)
            if len(comb) % 2 == 0:
                target_keys.append((t, comb[0]))
    sign = odd_sort_sign(target_keys)
    return sign, (l1, m1, tuple(tuple(sorted(bk)) for bk in buckets))


def _precompose(A, u) -> tuple:
    """Layer ``A: [a] -> [b]`` precomposed with the bijection ``u`` of ``[a]``
    (``u`` sends canonical positions to old positions)."""
    inv = {v: i for i, v in enumerate(u, 1)}
    return tuple(tuple(inv[x] for x in blk) for blk in A)


def _bijection_blocks(t) -> tuple:
    """The bijection ``j -> t[j-1]`` as a fibre-ordered surjection."""
    inv = [0] * len(t)
    for j, v in enumerate(t, 1):
        inv[v - 1] = j
    return tuple((j,) for j in inv)


def _canon_blocks(A) -> tuple[tuple, tuple]:
    """``A = t o A_can`` with blocks of ``A_can`` sorted by minimum; returns
    ``(A_can, t)`` where ``t[j-1]`` is the old index of new block ``j``."""
    order = sorted(range(len(A)), key=lambda j: min(A[j]))
    return tuple(A[j] for j in order), tuple(j + 1 for j in order)
