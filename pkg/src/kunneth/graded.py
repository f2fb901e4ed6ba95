"""Graded vector spaces with named bases, Koszul signs and tensor products.

Everything is homologically graded and non-negative; all structure maps have
degree zero.  A basis is an ordered tuple of ``BasisElement`` and that order
is fixed at construction.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .linalg import SparseMatrix


@dataclass(frozen=True)
class BasisElement:
    label: Hashable
    degree: int = 0

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"negative degree {self.degree} for {self.label!r}")


class GradedSpace:
    """Finite-dimensional graded vector space with an ordered, named basis.

    ``factors`` is set when the space was produced by :func:`tensor`; labels of
    a tensor space are tuples of factor labels.
    """

    def __init__(self, basis: Iterable[BasisElement], factors: Sequence["GradedSpace"] | None = None):
        self.basis: tuple[BasisElement, ...] = tuple(basis)
        self.index: dict[Hashable, int] = {}
        for i, b in enumerate(self.basis):
            if b.label in self.index:
                raise ValueError(f"duplicate basis label {b.label!r}")
            self.index[b.label] = i
        self.factors = tuple(factors) if factors is not None else None

    @classmethod
    def from_labels(cls, labels: Iterable[Hashable], degree=0) -> "GradedSpace":
        if callable(degree):
            return cls(BasisElement(lab, degree(lab)) for lab in labels)
        return cls(BasisElement(lab, degree) for lab in labels)

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def labels(self) -> list:
        return [b.label for b in self.basis]

    def degree_of(self, label) -> int:
        return self.basis[self.index[label]].degree

    def dims_by_degree(self) -> dict[int, int]:
        return dict(sorted(Counter(b.degree for b in self.basis).items()))

    def dim_vector(self) -> tuple[int, ...]:
        d = self.dims_by_degree()
        if not d:
            return ()
        return tuple(d.get(i, 0) for i in range(max(d) + 1))

    def in_degree(self, q: int) -> list[BasisElement]:
        return [b for b in self.basis if b.degree == q]

    def __repr__(self) -> str:
        return f"GradedSpace(dims={self.dims_by_degree()})"

    def __eq__(self, other):
        if not isinstance(other, GradedSpace):
            return NotImplemented
        return self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)


UNIT_SPACE = GradedSpace([BasisElement((), 0)])


class GradedMap:
    """Degree-preserving linear map; ``matrix[i, j]`` is the coefficient of
    target basis element ``i`` in the image of source basis element ``j``."""

    def __init__(self, source: GradedSpace, target: GradedSpace, matrix: SparseMatrix):
        if (matrix.rows, matrix.cols) != (len(target), len(source)):
            raise ValueError("matrix shape does not match spaces")
        for (r, c), _ in matrix.items():
            if target.basis[r].degree != source.basis[c].degree:
                raise ValueError(
                    f"map is not degree-preserving: {source.basis[c]} -> {target.basis[r]}")
        self.source = source
        self.target = target
        self.matrix = matrix

    @classmethod
    def from_images(cls, source: GradedSpace, target: GradedSpace,
                    images: Mapping[Hashable, Mapping[Hashable, object]]) -> "GradedMap":
        """Build from ``{source_label: {target_label: coeff}}``."""
        entries = {}
        for s, img in images.items():
            j = source.index[s]
            for t, v in img.items():
                if v:
                    entries[(target.index[t], j)] = v
        return cls(source, target, SparseMatrix(len(target), len(source), entries))

    def apply(self, vec: Mapping[Hashable, object]) -> dict:
        cols = self._cols()
        out: dict = {}
        for lab, a in vec.items():
            for r, v in cols.get(self.source.index[lab], {}).items():
                t = self.target.basis[r].label
                out[t] = out.get(t, 0) + a * v
        return {k: v for k, v in out.items() if v}

    def image_of(self, label) -> dict:
        return self.apply({label: 1})

    def _cols(self):
        cache = getattr(self, "_colcache", None)
        if cache is None:
            cache = self.matrix.column_map()
            self._colcache = cache
        return cache

    def compose(self, first: "GradedMap") -> "GradedMap":
        """``self o first``."""
        if first.target != self.source:
            raise ValueError("maps are not composable")
        return GradedMap(first.source, self.target, self.matrix @ first.matrix)

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __repr__(self):
        return f"GradedMap({len(self.source)} -> {len(self.target)}, nnz={self.matrix.nnz()})"


def identity_map(space: GradedSpace) -> GradedMap:
    return GradedMap(space, space, SparseMatrix.identity(len(space)))


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign of moving slot ``i`` to position ``perm[i]`` (0-based) for
    factors of the given degrees: the product of ``(-1)^(d_i d_j)`` over
    inverted pairs."""
    n = len(perm)
    if sorted(perm) != list(range(n)) or len(degrees) != n:
        raise ValueError(f"not a permutation of {n} slots: {perm!r}")
    odd = 0
    for i in range(n):
        if degrees[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if degrees[j] % 2 and perm[i] > perm[j]:
                odd ^= 1
    return -1 if odd else 1


def tensor(spaces: Sequence[GradedSpace]) -> GradedSpace:
    """Graded tensor product; basis = lexicographic tuples of factor labels."""
    spaces = tuple(spaces)
    basis = [BasisElement(tuple(b.label for b in combo), sum(b.degree for b in combo))
             for combo in itertools.product(*(s.basis for s in spaces))]
    return GradedSpace(basis, factors=spaces)


def permute_factors(t: GradedSpace, perm: Sequence[int]) -> GradedMap:
    """Symmetry isomorphism ``V_1 (x) ... (x) V_n -> V_{perm^-1(1)} (x) ...``:
    factor ``i`` of the source becomes factor ``perm[i]`` of the target."""
    if t.factors is None:
        raise TypeError("space is not a tensor product")
    n = len(t.factors)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation of {n} factors: {perm!r}")
    new_factors = [None] * n
    for i, p in enumerate(perm):
        new_factors[p] = t.factors[i]
    target = tensor(new_factors)
    entries = {}
    for j, b in enumerate(t.basis):
        degs = [f.degree_of(lab) for f, lab in zip(t.factors, b.label)]
        lab = [None] * n
        for i, p in enumerate(perm):
            lab[p] = b.label[i]
        entries[(target.index[tuple(lab)], j)] = koszul_sign(perm, degs)
    return GradedMap(t, target, SparseMatrix(len(target), len(t), entries))


def sign_of_sort(keys: Sequence, degrees: Sequence[int]) -> int:
    """Koszul sign of stably sorting factors by ``keys``."""
    odd = [k for k, d in zip(keys, degrees) if d % 2]
    inv = 0
    for i in range(len(odd)):
        ki = odd[i]
        for j in range(i + 1, len(odd)):
            if ki > odd[j]:
                inv ^= 1
    return -1 if inv else 1
