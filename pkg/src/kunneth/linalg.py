"""Exact sparse linear algebra over the rationals.

Matrices are stored as ``{(row, col): value}`` with ``int`` or ``Fraction``
values.  Rank is computed by fraction-free integer elimination: every row is
scaled to integers first, and row operations ``r <- p*r - a*s`` never leave
``Z``.  Pivots are chosen Markowitz-style (sparsest column, then sparsest row,
preferring unit entries), which keeps fill-in low on the very sparse boundary
matrices produced by bar complexes.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Scalar = Fraction


class NotAComplex(ValueError):
    """Raised when two composable maps do not compose to zero."""


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class SparseMatrix:
    """Immutable sparse matrix with exact entries; zero entries are never stored."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean: dict[tuple[int, int], object] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside {rows}x{cols}")
            if v:
                clean[(r, c)] = _normalise(v)
        self._entries = clean

    @classmethod
    def from_dense(cls, data: Iterable[Iterable[object]]) -> "SparseMatrix":
        data = [list(r) for r in data]
        cols = len(data[0]) if data else 0
        return cls(len(data), cols, {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols)

    @property
    def entries(self) -> dict[tuple[int, int], object]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]):
        return self._entries.get(key, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self._entries) == (other.rows, other.cols, other._entries)

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self._entries)})"

    def to_dense(self) -> list[list[object]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        acc = dict(self._entries)
        for k, v in other._entries.items():
            acc[k] = acc.get(k, 0) + v
        return SparseMatrix(self.rows, self.cols, acc)

    def __neg__(self) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: -v for k, v in self._entries.items()})

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self + (-other)

    def scale(self, s) -> "SparseMatrix":
        return SparseMatrix(self.rows, self.cols, {k: v * s for k, v in self._entries.items()})

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        """Exact product ``self @ other``."""
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}")
        by_row: dict[int, list[tuple[int, object]]] = {}
        for (r, c), v in other._entries.items():
            by_row.setdefault(r, []).append((c, v))
        acc: dict[tuple[int, int], object] = {}
        for (r, k), v in self._entries.items():
            for c, w in by_row.get(k, ()):
                key = (r, c)
                acc[key] = acc.get(key, 0) + v * w
        return SparseMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return not self._entries

    def column_map(self) -> dict[int, dict[int, object]]:
        cols: dict[int, dict[int, object]] = {}
        for (r, c), v in self._entries.items():
            cols.setdefault(c, {})[r] = v
        return cols

    def row_map(self) -> dict[int, dict[int, object]]:
        rows: dict[int, dict[int, object]] = {}
        for (r, c), v in self._entries.items():
            rows.setdefault(r, {})[c] = v
        return rows


def _normalise(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    if isinstance(v, int):
        return v
    f = Fraction(v)
    return f.numerator if f.denominator == 1 else f


def _integral_rows(m: SparseMatrix) -> dict[int, dict[int, int]]:
    rows = m.row_map()
    out: dict[int, dict[int, int]] = {}
    for r, row in rows.items():
        den = 1
        for v in row.values():
            if isinstance(v, Fraction):
                den = _lcm(den, v.denominator)
        if den == 1:
            out[r] = {c: int(v) for c, v in row.items()}
        else:
            out[r] = {c: int(v * den) for c, v in row.items()}
    return out


def rank_of_rows(rows: dict[int, dict[int, int]]) -> int:
    """Rank of an integer matrix given as ``{row_id: {col: value}}``.

    The input dictionaries are consumed.
    """
    col_rows: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    heap = [(len(rs), c) for c, rs in col_rows.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        count, c = heapq.heappop(heap)
        rs = col_rows.get(c)
        if not rs:
            continue
        if len(rs) != count:
            heapq.heappush(heap, (len(rs), c))
            continue
        # sparsest row containing c, unit pivots first
        piv = min(rs, key=lambda r: (abs(rows[r][c]) != 1, len(rows[r])))
        prow = rows.pop(piv)
        p = prow[c]
        for cc in prow:
            col_rows[cc].discard(piv)
        del col_rows[c]
        rank += 1
        for r in list(rs):
            row = rows[r]
            a = row[c]
            if p == 1:
                mul_r, mul_p = 1, a
            elif p == -1:
                mul_r, mul_p = 1, -a
            else:
                g = gcd(a, p)
                mul_r, mul_p = p // g, a // g
            if mul_r != 1:
                for cc in row:
                    row[cc] *= mul_r
            for cc, v in prow.items():
                nv = row.get(cc, 0) - mul_p * v
                if nv:
                    if cc not in row:
                        col_rows[cc].add(r)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    if cc != c:
                        col_rows[cc].discard(r)
            if not row:
                del rows[r]
            elif mul_r != 1:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    for cc in row:
                        row[cc] //= g
        for cc in prow:
            if cc in col_rows:
                heapq.heappush(heap, (len(col_rows[cc]), cc))
    return rank


def rank(m: SparseMatrix) -> int:
    """Rank of ``m`` over Q."""
    if not m.nnz():
        return 0
    # eliminate along the shorter dimension's index set
    if m.rows > m.cols:
        m = m.transpose()
    return rank_of_rows(_integral_rows(m))


def kernel_dim(m: SparseMatrix) -> int:
    return m.cols - rank(m)


def check_complex(d_in: SparseMatrix, d_out: SparseMatrix) -> None:
    if d_in.rows != d_out.cols:
        raise ValueError(f"maps are not composable: {d_in!r} then {d_out!r}")
    prod = d_out @ d_in
    if not prod.is_zero():
        (r, c), v = next(iter(prod.items()))
        raise NotAComplex(f"d_out . d_in != 0 (entry ({r}, {c}) = {v}; {prod.nnz()} nonzero entries)")


def homology_dim(d_in: SparseMatrix, d_out: SparseMatrix, check: bool = True) -> int:
    """dim ker(d_out) - dim im(d_in) for ``V --d_in--> W --d_out--> U``."""
    if check:
        check_complex(d_in, d_out)
    elif d_in.rows != d_out.cols:
        raise ValueError("maps are not composable")
    return kernel_dim(d_out) - rank(d_in)


def dense_rank(data: list[list[object]]) -> int:
    """Textbook Gaussian elimination on a dense list-of-lists; used as a test oracle."""
    a = [[Fraction(v) for v in row] for row in data]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r
