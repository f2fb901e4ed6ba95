"""E2 page of the Kunneth spectral sequence for a pair of Ass-modules.

The normalized diagonal complex is split by internal degree ``q``; for each
``q`` the homology in simplicial degree ``p`` is ``E2[p, q]``.  Betti numbers
are the totals along ``p + q = d``, which presumes collapse over the rationals;
tables carry ``collapse_assumed`` to say so.

Characters of the symmetric group come in two flavours: the Hopf trace per
``q`` (alternating over ``p``, no homology needed) and honest characters of
every ``E2[p, q]`` through isotypic projectors.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .bv import DiagEngine, TruncationError
from .combinatorics import character_table, cycle_type, is_perm, perms
from .linalg import SparseMatrix, check_complex, rank
from .modules import RightModule


@dataclass
class E2Table:
    k: int
    entries: dict  # (p, q) -> dim, zeros omitted
    p_max: int
    d_max: int
    factors: tuple = ("?", "?")
    collapse_assumed: bool = True

    def dim(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def totals(self) -> tuple[int, ...]:
        out = [0] * (self.d_max + 1)
        for (p, q), v in self.entries.items():
            if p + q <= self.d_max:
                out[p + q] += v
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return tuple(out)


@dataclass
class BettiTable:
    k: int
    betti: tuple
    characters: dict | None = None  # (d, cycle type) -> value
    collapse_assumed: bool = True

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * b for d, b in enumerate(self.betti))


@dataclass
class Complexes:
    """Differentials ``C_{p,q} -> C_{p-1,q}`` of the diagonal complex."""

    engine: DiagEngine
    p_max: int
    top: int | None
    _mats: dict = field(default_factory=dict, repr=False)

    def dim(self, p: int, q: int) -> int:
        if p < 0 or (self.top is not None and p > self.top):
            return 0
        return len(self.engine.level(p).in_degree(q))

    def d(self, p: int, q: int) -> SparseMatrix:
        key = (p, q)
        if key not in self._mats:
            if p <= 0 or (self.top is not None and p > self.top):
                self._mats[key] = SparseMatrix(self.dim(p - 1, q), self.dim(p, q))
            else:
                self._mats[key] = self.engine.differential(p, q)
        return self._mats[key]

    def degrees(self) -> list[int]:
        hi = self.p_max + 1 if self.top is None else min(self.top, self.p_max + 1)
        return sorted({b.degree for p in range(hi + 1) for b in self.engine.level(p).basis})


def make_engine(left: RightModule, right: RightModule, k: int, mode: str = "reduced",
                normalized: bool = True) -> DiagEngine:
    return DiagEngine(left, right, k, mode=mode, normalized=normalized)


def chain_complex(left: RightModule, right: RightModule, k: int, p_max: int, mode: str = "reduced",
                  normalized: bool = True, check: bool = True) -> Complexes:
    """Differentials up to ``C_{p_max+1} -> C_{p_max}``; ``d^2 = 0`` checked on request."""
    eng = make_engine(left, right, k, mode, normalized)
    top = eng.max_level()
    cx = Complexes(eng, p_max, top)
    if check:
        for q in cx.degrees():
            for p in range(1, p_max + 1):
                check_complex(cx.d(p + 1, q), cx.d(p, q))
    return cx


def _homology(cx: Complexes, p: int, q: int) -> int:
    return cx.dim(p, q) - rank(cx.d(p, q)) - rank(cx.d(p + 1, q))


def e2_page(left: RightModule, right: RightModule, k: int, d_max: int, mode: str = "reduced",
            normalized: bool = True, threads: int = 1, factors: tuple = ("?", "?"),
            check: bool = True) -> E2Table:
    """``E2[p, q]`` for ``p + q <= d_max``."""
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    cx = chain_complex(left, right, k, d_max, mode, normalized, check)
    jobs = [(p, q) for p in range(d_max + 1) for q in range(d_max + 1 - p)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            dims = list(pool.map(lambda pq: _homology(cx, *pq), jobs))
    else:
        dims = [_homology(cx, p, q) for p, q in jobs]
    entries = {pq: h for pq, h in zip(jobs, dims) if h}
    return E2Table(k, entries, d_max, d_max, tuple(factors))


def betti(table: E2Table) -> BettiTable:
    return BettiTable(table.k, table.totals(), None, table.collapse_assumed)


# ---------------------------------------------------------------- characters

def _finite_engine(left, right, k) -> tuple[DiagEngine, int]:
    eng = make_engine(left, right, k, "reduced")
    return eng, eng.max_level()


def character(left: RightModule, right: RightModule, k: int, sigma: tuple) -> dict[int, int]:
    """Hopf trace per internal degree: ``q -> sum_p (-1)^p tr(sigma | C_{p,q})``."""
    if not is_perm(sigma, k):
        raise ValueError(f"{sigma!r} is not a permutation of {k}")
    eng, top = _finite_engine(left, right, k)
    out: dict[int, int] = {}
    for p in range(top + 1):
        for b in eng.level(p).basis:
            out.setdefault(b.degree, 0)
            c = eng.act(sigma, b.label).get(b.label, 0)
            out[b.degree] += (-1) ** p * c
    return dict(sorted(out.items()))


def _projector(eng: DiagEngine, p: int, q: int, chi_lam: dict) -> SparseMatrix:
    """``sum_s chi_lam(s) s`` on ``C_{p,q}``; ``k!/chi_lam(1)`` times an idempotent."""
    n = len(eng.level(p).in_degree(q))
    acc = SparseMatrix(n, n)
    for s in perms(eng.k):
        c = chi_lam[cycle_type(s)]
        if c:
            acc = acc + eng.action_matrix(p, q, s).scale(c)
    return acc


def e2_characters(left: RightModule, right: RightModule, k: int,
                  d_max: int) -> dict[tuple[int, int], dict[tuple, int]]:
    """Character of every ``E2[p, q]`` (``p + q <= d_max``) on each conjugacy class.

    The multiplicity of the irreducible ``lam`` is the homology of the complex
    cut down by its isotypic projector, divided by ``chi_lam(1)``.
    """
    eng, top = _finite_engine(left, right, k)
    irreps, classes, table = character_table(k)
    chi = {lam: dict(zip(classes, row)) for lam, row in zip(irreps, table)}
    one = tuple([1] * k)
    cx = Complexes(eng, d_max, top)
    out: dict = {}
    for p in range(0, min(d_max, top) + 1):
        for q in range(0, d_max + 1 - p):
            if not cx.dim(p, q):
                continue
            value = dict.fromkeys(classes, 0)
            for lam in irreps:
                proj = _projector(eng, p, q, chi[lam])
                iso = rank(proj)
                if not iso:
                    continue
                r_out = rank(cx.d(p, q) @ proj) if p > 0 else 0
                r_in = rank(cx.d(p + 1, q) @ _projector(eng, p + 1, q, chi[lam])) if p < top else 0
                mult, rem = divmod(iso - r_out - r_in, chi[lam][one])
                if rem:
                    raise ArithmeticError("isotypic homology is not a multiple of the irreducible dimension")
                for mu in classes:
                    value[mu] += mult * chi[lam][mu]
            if any(value.values()):
                out[(p, q)] = value
    return out


def degree_characters(chars: dict[tuple[int, int], dict]) -> dict[tuple[int, tuple], int]:
    """Collapse per-(p, q) characters to total degree: ``(d, class) -> value``."""
    out: dict = {}
    for (p, q), vals in chars.items():
        for mu, v in vals.items():
            out[(p + q, mu)] = out.get((p + q, mu), 0) + v
    return dict(sorted(out.items()))
