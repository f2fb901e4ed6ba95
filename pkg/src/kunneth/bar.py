"""Sequential bar resolution of a right module, one arity at a time.

A level-``p`` word at arity ``k`` is ``(layers, x)`` with ``p + 1`` decorated
surjections ``[k] -> [n_1] -> ... -> [n_{p+1}]`` and ``x`` a basis label of
``M(n_{p+1})``.  ``layers[0]`` is the outer free layer; the other ``p`` are the
inner ones, and a word is degenerate when an inner layer is an identity with
unit decorations.  The outer layer is never degenerate.

Tensor factors are ordered innermost first, ``x (x) L_p (x) ... (x) L_0``, so
that ``d_p`` is the module action read left to right and composing two layers
only reorders their own decorations.

Faces: ``d_i`` for ``i < p`` composes ``L_i`` with ``L_{i+1}`` and ``d_p`` acts
with ``L_p`` on ``x``.  In ``reduced`` mode every layer is canonical (fibres
listed by increasing minima), one for each quotient by ``S_{n_i}``.
Composites of canonical surjections are canonical, so these words span a
subcomplex, isomorphic to the bar construction relative to the symmetric
groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .combinatorics import canonical_surjections, fibres, identity_perm, surjections
from .graded import BasisElement, GradedSpace, koszul_sign
from .linalg import SparseMatrix, homology_dim
from .modules import DecoratedSurjection, RightModule
from .operads import AssOperad, Operad, _acc

MODES = ("reduced", "sequential")


@dataclass(frozen=True)
class BarWord:
    layers: tuple
    terminal: object

    @property
    def level(self) -> int:
        return len(self.layers) - 1

    @property
    def arity(self) -> int:
        return self.layers[0].source


def layer_degree(o: Operad, ds: DecoratedSurjection) -> int:
    sizes = ds.fibre_sizes()
    return sum(o.degree(m, d) for m, d in zip(sizes, ds.decorations))


def is_identity(o: Operad, ds: DecoratedSurjection) -> bool:
    return ds.f == identity_perm(ds.source) and all(d == o.unit.label for d in ds.decorations)


def decorated_surjections(o: Operad, a: int, b: int, canonical: bool = False) -> list:
    """All basis decorated surjections ``[a] -> [b]``."""
    if a == 0 or b == 0:
        return [DecoratedSurjection((), ())] if a == b else []
    out = []
    maps = canonical_surjections(a, b) if canonical else surjections(a, b)
    for f in maps:
        sizes = [0] * b
        for v in f:
            sizes[v - 1] += 1
        for decs in itertools.product(*(o.component(s).labels() for s in sizes)):
            out.append(DecoratedSurjection(f, tuple(decs)))
    return out


def compose_layers(o: Operad, first: DecoratedSurjection, second: DecoratedSurjection) -> dict:
    """``second o first`` for ``first: [a] -> [b]``, ``second: [b] -> [c]``.

    The tensor ``second (x) first`` is regrouped as ``e_1 d_{T_1} e_2 d_{T_2} ...``
    (``T_j`` the fibre of ``second`` over ``j``), then each group is composed
    and renamed onto the actual fibre of the composite.
    """
    if isinstance(o, AssOperad):
        return {_ass_compose(first, second): 1}
    b, c = first.target, second.target
    fsz, ssz = first.fibre_sizes(), second.fibre_sizes()
    tfib = fibres(second.f, c)
    ffib = fibres(first.f, b)
    degs = [o.degree(s, e) for s, e in zip(ssz, second.decorations)]
    degs += [o.degree(s, d) for s, d in zip(fsz, first.decorations)]
    slot, perm = 0, [0] * (b + c)
    for j, T in enumerate(tfib):
        perm[j] = slot
        slot += 1
        for t in T:
            perm[c + t - 1] = slot
            slot += 1
    sign = koszul_sign(perm, degs)
    per_target = []
    for j, T in enumerate(tfib):
        val = o.gamma(len(T), {second.decorations[j]: 1},
                      [(fsz[t - 1], {first.decorations[t - 1]: 1}) for t in T])
        concat = [x for t in T for x in ffib[t - 1]]
        rank = {x: r for r, x in enumerate(sorted(concat), 1)}
        ren = tuple(rank[x] for x in concat)
        per_target.append(o.act(len(concat), val, ren))
    f = tuple(second.f[v - 1] for v in first.f)
    out: dict = {}
    for choice in itertools.product(*(list(e.items()) for e in per_target)):
        coeff = sign
        for _, cf in choice:
            coeff *= cf
        _acc(out, DecoratedSurjection(f, tuple(lab for lab, _ in choice)), coeff)
    return out


def _ass_compose(first: DecoratedSurjection, second: DecoratedSurjection) -> DecoratedSurjection:
    fb, sb = _blocks(first), _blocks(second)
    return DecoratedSurjection.from_blocks(
        tuple(tuple(x for t in blk for x in fb[t - 1]) for blk in sb))


@lru_cache(maxsize=100_000)
def _blocks(ds: DecoratedSurjection) -> tuple:
    fib = fibres(ds.f, ds.target)
    return tuple(tuple(fib[j][w - 1] for w in ds.decorations[j]) for j in range(ds.target))


@dataclass
class BarEngine:
    """Levels, faces and degeneracies of the bar resolution of ``module`` at arity ``k``."""

    module: RightModule
    k: int
    mode: str = "sequential"
    normalized: bool = True
    _chains: dict = field(default_factory=dict, repr=False)
    _levels: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.k <= self.module.max_arity:
            raise ValueError(f"arity {self.k} outside 0..{self.module.max_arity}")
        self.operad = self.module.over

    def _options(self, a: int, b: int) -> list:
        return decorated_surjections(self.operad, a, b, canonical=self.mode == "reduced")

    def _tails(self, n: int, p: int) -> list:
        """Chains of ``p`` inner layers starting at ``[n]``, with end arity."""
        key = (n, p)
        got = self._chains.get(key)
        if got is not None:
            return got
        if p == 0:
            res = [((), n)]
        else:
            res = []
            for n1 in range(1 if n else 0, n + 1):
                for ds in self._options(n, n1):
                    if self.normalized and is_identity(self.operad, ds):
                        continue
                    for rest, end in self._tails(n1, p - 1):
                        res.append(((ds,) + rest, end))
        self._chains[key] = res
        return res

    def level(self, p: int) -> GradedSpace:
        sp = self._levels.get(p)
        if sp is not None:
            return sp
        o, basis = self.operad, []
        for n1 in range(1 if self.k else 0, self.k + 1):
            for outer in self._options(self.k, n1):
                d0 = layer_degree(o, outer)
                for rest, end in self._tails(n1, p):
                    d = d0 + sum(layer_degree(o, ds) for ds in rest)
                    for xb in self.module.component(end).basis:
                        basis.append(BasisElement(BarWord((outer,) + rest, xb.label), d + xb.degree))
        sp = GradedSpace(basis)
        self._levels[p] = sp
        return sp

    # ------------------------------------------------------------ simplicial structure
    def _terminal_degree(self, w: BarWord) -> int:
        return self.module.degree(w.layers[-1].target, w.terminal)

    def face(self, i: int, w: BarWord) -> dict:
        p = w.level
        if not 0 <= i <= p or p == 0:
            raise ValueError(f"face d_{i} undefined at level {p}")
        o = self.operad
        if i < p:
            first, second = w.layers[i], w.layers[i + 1]
            # x (x) L_p ... (x) L_{i+1} (x) L_i ...: the pair is adjacent, no outside sign
            out: dict = {}
            for ds, c in compose_layers(o, first, second).items():
                if self.normalized and i > 0 and is_identity(o, ds):
                    continue
                _acc(out, BarWord(w.layers[:i] + (ds,) + w.layers[i + 2:], w.terminal), c)
            return out
        out = {}
        for lab, c in self.module.act({w.terminal: 1}, w.layers[p]).items():
            _acc(out, BarWord(w.layers[:p], lab), c)
        return out

    def degeneracy(self, j: int, w: BarWord) -> BarWord:
        """``s_j``: insert an identity layer after ``L_j`` (unnormalized words only)."""
        if self.normalized:
            raise ValueError("degeneracies leave the normalized complex")
        p = w.level
        if not 0 <= j <= p:
            raise ValueError(f"degeneracy s_{j} undefined at level {p}")
        n = w.layers[j].target
        ident = DecoratedSurjection.identity(n, self.operad.unit.label)
        return BarWord(w.layers[:j + 1] + (ident,) + w.layers[j + 1:], w.terminal)

    def boundary(self, w: BarWord) -> dict:
        out: dict = {}
        for i in range(w.level + 1):
            s = -1 if i % 2 else 1
            for v, c in self.face(i, w).items():
                _acc(out, v, s * c)
        return out

    def differential(self, p: int, q: int) -> SparseMatrix:
        src = self.level(p).in_degree(q)
        if p == 0:
            return SparseMatrix(0, len(src))
        tgt = self.level(p - 1).in_degree(q)
        index = {b.label: r for r, b in enumerate(tgt)}
        entries = {}
        for c, b in enumerate(src):
            for v, x in self.boundary(b.label).items():
                entries[(index[v], c)] = x
        return SparseMatrix(len(tgt), len(src), entries)

    def augmentation(self, w: BarWord) -> dict:
        if w.level != 0:
            raise ValueError("augmentation is defined on level 0")
        return self.module.act({w.terminal: 1}, w.layers[0])

    def homology(self, p_max: int) -> dict[tuple[int, int], int]:
        """``{(p, q): dim}`` for ``p <= p_max`` (needs level ``p_max + 1``)."""
        qs = sorted({b.degree for p in range(p_max + 2) for b in self.level(p).basis})
        out = {}
        for p in range(p_max + 1):
            for q in qs:
                h = homology_dim(self.differential(p + 1, q), self.differential(p, q))
                if h:
                    out[(p, q)] = h
        return out


def bar_level(module: RightModule, p: int, k: int, mode: str = "sequential",
              normalized: bool = True) -> GradedSpace:
    return BarEngine(module, k, mode, normalized).level(p)


def face(module: RightModule, i: int, w: BarWord, normalized: bool = True) -> dict:
    return BarEngine(module, w.arity, "sequential", normalized).face(i, w)


def augmentation(module: RightModule, w: BarWord) -> dict:
    return module.act({w.terminal: 1}, w.layers[0])
