"""Reduced operads in graded vector spaces.

An operad is presented by its components ``O(k)`` (``k >= 1``), the symmetric
group acting by *renaming inputs* (``sigma`` sends input ``j`` to input
``sigma(j)``, a left action), and partial compositions ``a o_i b``.

Axioms verified by :func:`check_operad_axioms` (``|b|`` is the degree):

* unit:          ``1 o_1 a = a = a o_i 1``
* nested:        ``(a o_i b) o_{i+j-1} c = a o_i (b o_j c)``
* disjoint:      ``(a o_j b) o_i c = (-1)^(|b||c|) (a o_i c) o_{j+m_c-1} b``  for ``i < j``
* equivariance:  ``(sigma.a) o_{sigma(i)} (tau.b) = (sigma o_i tau).(a o_i b)``
* group action:  ``tau.(sigma.a) = (tau sigma).a`` and ``id.a = a``
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Hashable, Iterable, Mapping

from . import gerstenhaber as gz
from .combinatorics import compose as perm_compose, identity_perm, is_perm, perms
from .graded import BasisElement, GradedMap, GradedSpace, tensor
from .linalg import SparseMatrix

Vector = dict  # {label: coeff}


def _acc(out: dict, key, v) -> None:
    nv = out.get(key, 0) + v
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


def block_perm(sigma: tuple, i: int, tau: tuple) -> tuple:
    """The permutation ``sigma o_i tau`` of ``n + m - 1`` letters: block ``i``
    of size ``m`` is permuted internally by ``tau`` and moved to where
    ``sigma`` sends ``i``."""
    n, m = len(sigma), len(tau)
    si = sigma[i - 1]

    def out(v):  # image of a letter of the n-ary side
        return v if v < si else v + m - 1

    res = []
    for x in range(1, n + m):
        if x < i:
            res.append(out(sigma[x - 1]))
        elif x < i + m:
            res.append(si + tau[x - i] - 1)
        else:
            res.append(out(sigma[x - m]))
    return tuple(res)


class Operad:
    """Base class; subclasses provide the basis-level structure maps."""

    name: str = "operad"

    def __init__(self, max_arity: int):
        if max_arity < 1:
            raise ValueError("max_arity must be at least 1")
        self.max_arity = max_arity
        self._lock = threading.Lock()
        self._spaces: dict[int, GradedSpace] = {}
        self._sigma_maps: dict[tuple, GradedMap] = {}
        self._comp_maps: dict[tuple, GradedMap] = {}

    # -- to be provided by subclasses
    unit_label: Hashable = None

    def _basis(self, k: int) -> list[BasisElement]:
        raise NotImplementedError

    def act_label(self, k: int, label, sigma: tuple) -> Vector:
        raise NotImplementedError

    def compose_labels(self, n: int, i: int, m: int, a, b) -> Vector:
        raise NotImplementedError

    # -- derived structure
    def _check_arity(self, k: int) -> None:
        if not 1 <= k <= self.max_arity:
            raise ValueError(f"{self.name}: arity {k} outside 1..{self.max_arity}")

    def component(self, k: int) -> GradedSpace:
        self._check_arity(k)
        sp = self._spaces.get(k)
        if sp is None:
            sp = GradedSpace(self._basis(k))
            with self._lock:
                self._spaces.setdefault(k, sp)
        return self._spaces[k]

    @property
    def components(self) -> dict[int, GradedSpace]:
        return {k: self.component(k) for k in range(1, self.max_arity + 1)}

    @property
    def unit(self) -> BasisElement:
        return self.component(1).basis[0]

    def degree(self, k: int, label) -> int:
        return self.component(k).degree_of(label)

    def act(self, k: int, x: Mapping, sigma: tuple) -> Vector:
        out: Vector = {}
        for lab, c in x.items():
            for r, v in self.act_label(k, lab, sigma).items():
                _acc(out, r, c * v)
        return out

    def compose(self, n: int, i: int, m: int, x: Mapping, y: Mapping) -> Vector:
        if not 1 <= i <= n:
            raise ValueError(f"slot {i} outside 1..{n}")
        self._check_arity(n + m - 1)
        out: Vector = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for r, v in self.compose_labels(n, i, m, a, b).items():
                    _acc(out, r, ca * cb * v)
        return out

    def gamma(self, n: int, x: Mapping, inputs: list[tuple[int, Mapping]]) -> Vector:
        """Full composite ``gamma(x; y_1, ..., y_n)`` from partial compositions."""
        if len(inputs) != n:
            raise ValueError("wrong number of inputs")
        cur, ar, slot = dict(x), n, 1
        for m, y in inputs:
            cur = self.compose(ar, slot, m, cur, y)
            ar += m - 1
            slot += m
        return cur

    def sigma_action(self, k: int, sigma: tuple) -> GradedMap:
        key = (k, tuple(sigma))
        mp = self._sigma_maps.get(key)
        if mp is None:
            if not is_perm(sigma, k):
                raise ValueError(f"{sigma!r} is not a permutation of {k}")
            sp = self.component(k)
            mp = GradedMap.from_images(sp, sp, {lab: self.act_label(k, lab, tuple(sigma)) for lab in sp.labels()})
            with self._lock:
                self._sigma_maps.setdefault(key, mp)
        return self._sigma_maps[key]

    def partial_comp(self, n: int, i: int, m: int) -> GradedMap:
        key = (n, i, m)
        mp = self._comp_maps.get(key)
        if mp is None:
            src = tensor([self.component(n), self.component(m)])
            tgt = self.component(n + m - 1)
            mp = GradedMap.from_images(
                src, tgt, {(a, b): self.compose_labels(n, i, m, a, b) for a, b in src.labels()})
            with self._lock:
                self._comp_maps.setdefault(key, mp)
        return self._comp_maps[key]

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, max_arity={self.max_arity})"

    def __eq__(self, other):
        if not isinstance(other, Operad):
            return NotImplemented
        return self.max_arity == other.max_arity and not table_differences(self, other, self.max_arity)

    __hash__ = object.__hash__


def table_differences(a: Operad, b: Operad, bound: int) -> list[str]:
    diffs = []
    for k in range(1, bound + 1):
        if a.component(k) != b.component(k):
            diffs.append(f"component {k}")
            continue
        for s in perms(k):
            if a.sigma_action(k, s).matrix != b.sigma_action(k, s).matrix:
                diffs.append(f"sigma {k} {s}")
    if a.unit_label != b.unit_label:
        diffs.append("unit")
    for n, m in _arity_pairs(bound):
        for i in range(1, n + 1):
            if a.partial_comp(n, i, m).matrix != b.partial_comp(n, i, m).matrix:
                diffs.append(f"partial {n} {i} {m}")
    return diffs


def _arity_pairs(bound: int):
    for n in range(1, bound + 1):
        for m in range(1, bound + 2 - n):
            yield n, m


# ------------------------------------------------------------------ built-ins

class AssOperad(Operad):
    """Homology of little intervals: basis = orders of the inputs, all degree 0.

    A label is the word listing inputs from left to right.
    """

    name = "ass"

    def __init__(self, max_arity: int):
        super().__init__(max_arity)
        self.unit_label = (1,)

    def _basis(self, k):
        return [BasisElement(w, 0) for w in perms(k)]

    def act_label(self, k, label, sigma):
        return {tuple(sigma[x - 1] for x in label): 1}

    def compose_labels(self, n, i, m, a, b):
        return {ass_substitute(a, i, b): 1}


def ass_substitute(a: tuple, i: int, b: tuple) -> tuple:
    m = len(b)
    out = []
    for x in a:
        if x == i:
            out.extend(y + i - 1 for y in b)
        else:
            out.append(x if x < i else x + m - 1)
    return tuple(out)


class GerOperad(Operad):
    """Homology of little disks: free Gerstenhaber algebra operations,
    in the comb normal form of :mod:`kunneth.gerstenhaber`."""

    name = "ger"

    def __init__(self, max_arity: int):
        super().__init__(max_arity)
        self.unit_label = ((1,),)

    def _basis(self, k):
        return [BasisElement(mono, gz.degree(mono)) for mono in gz.basis(k)]

    def act_label(self, k, label, sigma):
        return gz.relabel({label: 1}, lambda y: sigma[y - 1])

    def compose_labels(self, n, i, m, a, b):
        shifted = {gz.relabel_monotone(b, {y: y + i - 1 for y in range(1, m + 1)}): 1}
        return gz.substitute(a, i, shifted, m - 1)


def ass_operad(max_arity: int) -> AssOperad:
    return AssOperad(max_arity)


def ger_operad(max_arity: int) -> GerOperad:
    return GerOperad(max_arity)


def product_monomial(n: int) -> tuple:
    return tuple((y,) for y in range(1, n + 1))


def interchange_element(a: Mapping, b: Mapping, i: int, j: int) -> Vector:
    """Class of ``a * b`` in Ger(ij) for ``a`` in Ass(i), ``b`` in Ass(j).

    Degree-0 Ger operations form a line spanned by the product, so only the
    coefficient sums survive.
    """
    c = sum(a.values()) * sum(b.values())
    return {product_monomial(i * j): c} if c else {}


def grid_index(a: int, b: int, m: int) -> int:
    """Lexicographic identification ``[l] x [m] -> [lm]``."""
    return (a - 1) * m + b


# ---------------------------------------------------------------- table operad

class TableOperad(Operad):
    """Operad given by explicit structure tables (typically read from disk)."""

    def __init__(self, name: str, max_arity: int, spaces: Mapping[int, GradedSpace], unit,
                 sigma: Mapping[tuple, Mapping], partial: Mapping[tuple, Mapping]):
        super().__init__(max_arity)
        self.name = name
        self.unit_label = unit
        self._spaces.update(spaces)
        self._sigma_tab = {k: dict(v) for k, v in sigma.items()}   # (k, perm) -> {label: vector}
        self._partial_tab = {k: dict(v) for k, v in partial.items()}  # (n,i,m) -> {(a,b): vector}

    def _basis(self, k):
        raise LoadError(f"component {k} missing")

    def act_label(self, k, label, sigma):
        tab = self._sigma_tab.get((k, tuple(sigma)))
        if tab is None:
            if tuple(sigma) == identity_perm(k):
                return {label: 1}
            # factor through adjacent transpositions
            first, rest = _split_adjacent(tuple(sigma))
            out: Vector = {}
            for l2, c in self.act_label(k, label, first).items():
                for l3, v in self.act_label(k, l2, rest).items():
                    _acc(out, l3, c * v)
            return out
        return dict(tab.get(label, {}))

    def compose_labels(self, n, i, m, a, b):
        tab = self._partial_tab.get((n, i, m))
        if tab is None:
            raise LoadError(f"partial composition table ({n}, {i}, {m}) missing")
        return dict(tab.get((a, b), {}))


def _split_adjacent(sigma: tuple) -> tuple[tuple, tuple]:
    """Write ``sigma = rest o s`` with ``s`` an adjacent transposition."""
    n = len(sigma)
    for j in range(n - 1):
        if sigma[j] > sigma[j + 1]:
            s = list(range(1, n + 1))
            s[j], s[j + 1] = s[j + 1], s[j]
            s = tuple(s)
            rest = perm_compose(sigma, s)  # s is an involution
            return s, rest
    raise ValueError("identity has no descent")


# ------------------------------------------------------------------ axioms

@dataclass
class Violation:
    law: str
    detail: str

    def __str__(self):
        return f"{self.law}: {self.detail}"


@dataclass
class AxiomReport:
    subject: str
    violations: list[Violation] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, law: str, detail: str) -> None:
        self.violations.append(Violation(law, detail))

    def __str__(self):
        head = f"{self.subject}: {self.checked} instances, {len(self.violations)} violations"
        return "\n".join([head] + [f"  {v}" for v in self.violations[:50]])


def _group_action_checks(rep: AxiomReport, k: int, space: GradedSpace, sigma_map) -> None:
    ps = perms(k)
    mats = {s: sigma_map(k, s).matrix for s in ps}
    if mats[identity_perm(k)] != SparseMatrix.identity(len(space)):
        rep.add("group action", f"identity of S{k} does not act trivially")
    for s in ps:
        for t in ps:
            rep.checked += 1
            if mats[t] @ mats[s] != mats[perm_compose(t, s)]:
                rep.add("group action", f"arity {k}: sigma={s} then tau={t} differs from tau.sigma")


def check_operad_axioms(o: Operad, arity_bound: int | None = None) -> AxiomReport:
    bound = o.max_arity if arity_bound is None else arity_bound
    if bound > o.max_arity:
        raise ValueError("arity bound exceeds max_arity")
    rep = AxiomReport(f"operad {o.name} (arity <= {bound})")
    try:
        _check_operad(o, bound, rep)
    except (KeyError, ValueError, LoadError) as exc:
        rep.add("structure", f"{type(exc).__name__}: {exc}")
    return rep


def _check_operad(o: Operad, bound: int, rep: AxiomReport) -> None:
    one = o.component(1)
    if len(one) != 1 or one.basis[0].label != o.unit_label or one.basis[0].degree != 0:
        rep.add("unit", "arity 1 must be spanned by the degree-0 unit")
        return
    u = {o.unit_label: 1}
    for k in range(1, bound + 1):
        sp = o.component(k)
        for lab in sp.labels():
            x = {lab: 1}
            rep.checked += 1
            if o.compose(1, 1, k, u, x) != x:
                rep.add("unit", f"1 o_1 {lab!r} != {lab!r}")
            for i in range(1, k + 1):
                rep.checked += 1
                if o.compose(k, i, 1, x, u) != x:
                    rep.add("unit", f"{lab!r} o_{i} 1 != {lab!r}")
        _group_action_checks(rep, k, sp, o.sigma_action)
    deg = o.degree
    # associativity
    for n in range(1, bound + 1):
        for m in range(1, bound + 1 - n + 1):
            for r in range(1, bound + 3 - n - m):
                if n + m + r - 2 > bound:
                    continue
                A, B, C = (o.component(n).labels(), o.component(m).labels(), o.component(r).labels())
                for a, b, c in itertools.product(A, B, C):
                    xa, xb, xc = {a: 1}, {b: 1}, {c: 1}
                    for i in range(1, n + 1):
                        ab = o.compose(n, i, m, xa, xb)
                        for j in range(1, m + 1):
                            rep.checked += 1
                            lhs = o.compose(n + m - 1, i + j - 1, r, ab, xc)
                            rhs = o.compose(n, i, m + r - 1, xa, o.compose(m, j, r, xb, xc))
                            if lhs != rhs:
                                rep.add("nested associativity",
                                        f"({a!r} o_{i} {b!r}) o_{i + j - 1} {c!r}")
                    # disjoint slots: b at j, c at i < j
                    s = -1 if deg(m, b) * deg(r, c) % 2 else 1
                    for j in range(2, n + 1):
                        ab = o.compose(n, j, m, xa, xb)
                        for i in range(1, j):
                            rep.checked += 1
                            lhs = o.compose(n + m - 1, i, r, ab, xc)
                            ac = o.compose(n, i, r, xa, xc)
                            rhs = o.compose(n + r - 1, j + r - 1, m, ac, xb)
                            if lhs != {key: s * v for key, v in rhs.items()}:
                                rep.add("disjoint associativity",
                                        f"({a!r} o_{j} {b!r}) o_{i} {c!r}")
    # equivariance
    for n, m in _arity_pairs(bound):
        if n + m - 1 > bound:
            continue
        A, B = o.component(n).labels(), o.component(m).labels()
        for sigma in perms(n):
            for tau in perms(m):
                for i in range(1, n + 1):
                    rho = block_perm(sigma, i, tau)
                    for a in A:
                        sa = o.act_label(n, a, sigma)
                        for b in B:
                            rep.checked += 1
                            lhs = o.compose(n, sigma[i - 1], m, sa, o.act_label(m, b, tau))
                            rhs = o.act(n + m - 1, o.compose_labels(n, i, m, a, b), rho)
                            if lhs != rhs:
                                rep.add("equivariance",
                                        f"sigma={sigma} tau={tau} slot {i} on ({a!r}, {b!r})")


# ------------------------------------------------------------------ file format

class LoadError(ValueError):
    def __init__(self, msg: str, report: AxiomReport | None = None):
        super().__init__(msg if report is None else f"{msg}\n{report}")
        self.report = report


def encode_label(label) -> str:
    if isinstance(label, str):
        return label
    return json.dumps(_to_lists(label), separators=(",", ":"))


def decode_label(s: str):
    try:
        return _to_tuples(json.loads(s))
    except (json.JSONDecodeError, TypeError):
        return s


def _to_lists(x):
    if isinstance(x, tuple):
        return [_to_lists(y) for y in x]
    return x


def _to_tuples(x):
    if isinstance(x, list):
        return tuple(_to_tuples(y) for y in x)
    return x


def _triples(mp: GradedMap) -> list[list]:
    out = []
    for (r, c), v in sorted(mp.matrix.items(), key=lambda t: (t[0][1], t[0][0])):
        f = Fraction(v)
        out.append([encode_label(mp.target.basis[r].label), encode_label(mp.source.basis[c].label),
                    f.numerator, f.denominator])
    return out


def tables_to_json(o, comp_key: str, comp_fn, extra: dict | None = None) -> dict:
    data = {"name": o.name, "max_arity": o.max_arity}
    if extra:
        data.update(extra)
    ks = range(0 if comp_key == "partial_action" else 1, o.max_arity + 1)
    data["components"] = {str(k): [{"label": encode_label(b.label), "degree": b.degree}
                                   for b in o.component(k).basis] for k in ks}
    if comp_key == "partial_comp":
        data["unit"] = encode_label(o.unit_label)
    data["sigma_action"] = {str(k): {"".join(map(str, s)) if k < 10 else ",".join(map(str, s)):
                                     _triples(o.sigma_action(k, s)) for s in perms(k)}
                            for k in ks if k >= 1}
    data[comp_key] = [{"n": n, "i": i, "m": m, "matrix": _triples(comp_fn(n, i, m))}
                      for n, i, m in _comp_keys(o.max_arity, comp_key == "partial_action")]
    return data


def _comp_keys(bound: int, module: bool):
    for n in range(1, bound + 1):
        for m in range(1, bound + 2 - n):
            for i in range(1, n + 1):
                yield n, i, m


def dump_operad(o: Operad, path: str | Path) -> None:
    data = tables_to_json(o, "partial_comp", o.partial_comp)
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def parse_perm(key: str) -> tuple:
    return tuple(int(x) for x in (key.split(",") if "," in key else key))


def _read_triples(triples, rows: GradedSpace, cols: GradedSpace, colkey) -> dict:
    out: dict = {}
    for t in triples:
        if len(t) != 4:
            raise LoadError(f"malformed matrix triple {t!r}")
        r, c, num, den = t
        rl, cl = decode_label(r), colkey(c)
        if rl not in rows.index:
            raise LoadError(f"unknown row label {r!r}")
        if cl not in cols.index:
            raise LoadError(f"unknown column label {c!r}")
        if rows.degree_of(rl) != cols.degree_of(cl):
            raise LoadError(f"degree mismatch: {c!r} -> {r!r}")
        v = Fraction(int(num), int(den))
        v = v.numerator if v.denominator == 1 else v
        out.setdefault(cl, {})[rl] = v
    return out


def read_spaces(data: dict, first: int) -> dict[int, GradedSpace]:
    spaces = {}
    comps = data.get("components")
    if not isinstance(comps, (dict, list)):
        raise LoadError("components missing")
    items = comps.items() if isinstance(comps, dict) else enumerate(comps, first)
    for k, basis in items:
        k = int(k)
        try:
            spaces[k] = GradedSpace(BasisElement(decode_label(b["label"]), int(b["degree"])) for b in basis)
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"bad component {k}: {exc}") from exc
    return spaces


def read_sigma(data: dict, spaces: dict[int, GradedSpace]) -> dict:
    sigma = {}
    for k, tabs in (data.get("sigma_action") or {}).items():
        k = int(k)
        if k not in spaces:
            raise LoadError(f"sigma action for missing arity {k}")
        for key, triples in tabs.items():
            s = parse_perm(key)
            if not is_perm(s, k):
                raise LoadError(f"{key!r} is not a permutation of {k}")
            sigma[(k, s)] = _read_triples(triples, spaces[k], spaces[k], decode_label)
    return sigma


def load_operad(path: str | Path, check: bool = True) -> Operad:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LoadError(f"cannot parse {path}: {exc}") from exc
    return operad_from_json(data, check=check)


def operad_from_json(data: dict, check: bool = True) -> Operad:
    for key in ("name", "max_arity", "components"):
        if key not in data:
            raise LoadError(f"field {key!r} missing")
    spaces = read_spaces(data, 1)
    mx = int(data["max_arity"])
    if 1 not in spaces or "unit" not in data:
        raise LoadError("unit required: arity 1 component and unit label")
    for k in range(1, mx + 1):
        if k not in spaces:
            raise LoadError(f"component {k} missing")
    unit = decode_label(data["unit"])
    if unit not in spaces[1].index:
        raise LoadError("unit label not in arity 1")
    sigma = read_sigma(data, spaces)
    partial = {}
    for entry in data.get("partial_comp") or []:
        try:
            n, i, m = int(entry["n"]), int(entry["i"]), int(entry["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"bad partial_comp entry: {exc}") from exc
        if n not in spaces or m not in spaces or n + m - 1 not in spaces:
            raise LoadError(f"partial_comp ({n},{i},{m}) outside the loaded arities")
        src = tensor([spaces[n], spaces[m]])
        partial[(n, i, m)] = _read_triples(entry.get("matrix", []), spaces[n + m - 1], src, decode_label)
    o = TableOperad(str(data["name"]), mx, spaces, unit, sigma, partial)
    if check:
        rep = check_operad_axioms(o, mx)
        if not rep.ok:
            raise LoadError("operad axioms violated", rep)
    return o
