"""Right modules over reduced operads.

A right module ``M`` has components ``M(k)`` for ``k >= 0`` (``M(0)`` is a
point and is never reached by surjections), a renaming action of the
symmetric groups and partial actions ``x o_i a`` for ``a`` in ``O(m)``.  The
action of a decorated surjection ``f: [k'] -> [k]`` is contravariant,
``M(k) -> M(k')``, and is assembled from partial actions.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Mapping

from .combinatorics import (block_to_words, cyclic_orders, fibres, identity_perm, is_perm,
                            perms, rotate_to_one)
from .graded import BasisElement, GradedMap, GradedSpace, UNIT_SPACE, tensor
from .operads import (AssOperad, AxiomReport, LoadError, Operad, _acc, _group_action_checks,
                      _read_triples, ass_substitute, block_perm, decode_label, read_sigma,
                      read_spaces, tables_to_json)

Vector = dict


@dataclass(frozen=True)
class DecoratedSurjection:
    """Surjection ``f: [k'] -> [k]`` (value tuple) with one basis decoration
    per target; the decoration of ``j`` lives on ``f^-1(j)`` enumerated in
    increasing order."""

    f: tuple
    decorations: tuple

    @property
    def source(self) -> int:
        return len(self.f)

    @property
    def target(self) -> int:
        return len(self.decorations)

    def fibre_sizes(self) -> list[int]:
        sizes = [0] * self.target
        for v in self.f:
            sizes[v - 1] += 1
        return sizes

    @classmethod
    def from_blocks(cls, blocks) -> "DecoratedSurjection":
        """Associative decorations from ordered fibres."""
        f, words = block_to_words(blocks)
        return cls(f, words)

    @classmethod
    def identity(cls, k: int, unit) -> "DecoratedSurjection":
        return cls(identity_perm(k), (unit,) * k)


class ArityError(ValueError):
    pass


class RightModule:
    """Base class; subclasses provide basis-level structure maps."""

    name = "module"

    def __init__(self, over: Operad, max_arity: int | None = None):
        self.over = over
        self.max_arity = over.max_arity if max_arity is None else max_arity
        if self.max_arity > over.max_arity:
            raise ValueError("module truncation exceeds the operad's")
        self._lock = threading.Lock()
        self._spaces: dict[int, GradedSpace] = {}
        self._sigma_maps: dict = {}
        self._act_maps: dict = {}

    def _basis(self, k: int) -> list[BasisElement]:
        raise NotImplementedError

    def act_label(self, k: int, label, sigma: tuple) -> Vector:
        raise NotImplementedError

    def partial_label(self, n: int, i: int, m: int, x, a) -> Vector:
        raise NotImplementedError

    # -- derived
    def component(self, k: int) -> GradedSpace:
        if not 0 <= k <= self.max_arity:
            raise ArityError(f"{self.name}: arity {k} outside 0..{self.max_arity}")
        sp = self._spaces.get(k)
        if sp is None:
            sp = UNIT_SPACE if k == 0 else GradedSpace(self._basis(k))
            with self._lock:
                self._spaces.setdefault(k, sp)
        return self._spaces[k]

    @property
    def components(self) -> dict[int, GradedSpace]:
        return {k: self.component(k) for k in range(0, self.max_arity + 1)}

    def degree(self, k: int, label) -> int:
        return self.component(k).degree_of(label)

    def sigma(self, k: int, x: Mapping, sigma: tuple) -> Vector:
        out: Vector = {}
        for lab, c in x.items():
            for r, v in self.act_label(k, lab, sigma).items():
                _acc(out, r, c * v)
        return out

    def partial(self, n: int, i: int, m: int, x: Mapping, a: Mapping) -> Vector:
        if not 1 <= i <= n:
            raise ArityError(f"slot {i} outside 1..{n}")
        if n + m - 1 > self.max_arity:
            raise ArityError(f"arity {n + m - 1} beyond truncation {self.max_arity}")
        out: Vector = {}
        for lab, c in x.items():
            for b, cb in a.items():
                for r, v in self.partial_label(n, i, m, lab, b).items():
                    _acc(out, r, c * cb * v)
        return out

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

    def partial_action(self, n: int, i: int, m: int) -> GradedMap:
        key = (n, i, m)
        mp = self._act_maps.get(key)
        if mp is None:
            src = tensor([self.component(n), self.over.component(m)])
            tgt = self.component(n + m - 1)
            mp = GradedMap.from_images(src, tgt, {(x, a): self.partial_label(n, i, m, x, a)
                                                  for x, a in src.labels()})
            with self._lock:
                self._act_maps.setdefault(key, mp)
        return self._act_maps[key]

    def act(self, x: Mapping, ds: DecoratedSurjection) -> Vector:
        """Action of a decorated surjection onto ``[k]`` on ``x`` in ``M(k)``.

        Partial actions are applied fibre by fibre in increasing slot order
        (fibres sitting in consecutive blocks), then the letters are renamed
        to the actual fibre elements.
        """
        k = ds.target
        if sorted(set(ds.f)) != list(range(1, k + 1)):
            raise ArityError(f"{ds.f!r} is not a surjection onto [{k}]")
        for lab in x:
            if lab not in self.component(k).index:
                raise ArityError(f"{lab!r} is not a basis element of {self.name}({k})")
        sizes = ds.fibre_sizes()
        cur, ar, slot = dict(x), k, 1
        for j, d in enumerate(ds.decorations):
            m = sizes[j]
            if d not in self.over.component(m).index:
                raise ArityError(f"decoration {d!r} does not have arity {m}")
            cur = self.partial(ar, slot, m, cur, {d: 1})
            ar += m - 1
            slot += m
        rename = [x for fib in fibres(ds.f, k) for x in fib]
        inv = [0] * len(rename)
        for pos, x in enumerate(rename, 1):
            inv[pos - 1] = x
        return self.sigma(ds.source, cur, tuple(inv)) if ds.source else cur

    def act_blocks(self, label, blocks) -> Vector:
        """Action of an associatively decorated surjection given by ordered fibres."""
        return self.act({label: 1}, DecoratedSurjection.from_blocks(blocks))

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, over={self.over.name!r}, max_arity={self.max_arity})"

    def __eq__(self, other):
        if not isinstance(other, RightModule):
            return NotImplemented
        return self.max_arity == other.max_arity and not module_differences(self, other, self.max_arity)

    __hash__ = object.__hash__


def module_differences(a: RightModule, b: RightModule, bound: int) -> list[str]:
    diffs = []
    for k in range(0, bound + 1):
        if a.component(k) != b.component(k):
            diffs.append(f"component {k}")
            continue
        for s in (perms(k) if k else []):
            if a.sigma_action(k, s).matrix != b.sigma_action(k, s).matrix:
                diffs.append(f"sigma {k} {s}")
    for n in range(1, bound + 1):
        for m in range(1, bound + 2 - n):
            for i in range(1, n + 1):
                if a.partial_action(n, i, m).matrix != b.partial_action(n, i, m).matrix:
                    diffs.append(f"partial {n} {i} {m}")
    return diffs


# ------------------------------------------------------------------ built-ins

class OperadModule(RightModule):
    """An operad as a right module over itself."""

    def __init__(self, o: Operad, max_arity: int | None = None):
        super().__init__(o, max_arity)
        self.name = f"{o.name}-self"

    def _basis(self, k):
        return list(self.over.component(k).basis)

    def act_label(self, k, label, sigma):
        return self.over.act_label(k, label, sigma)

    def partial_label(self, n, i, m, x, a):
        return self.over.compose_labels(n, i, m, x, a)

    def act_blocks(self, label, blocks):
        if isinstance(self.over, AssOperad):
            return {tuple(y for x in label for y in blocks[x - 1]): 1}
        return super().act_blocks(label, blocks)


class CircleModule(RightModule):
    """Homology of configurations on an oriented circle over Ass.

    Labels are ``(c, d)``: ``c`` a cyclic order of ``1..k`` written from the
    point ``1``, ``d = 0`` for the point class of its component and ``d = 1``
    for the rotation class.  Every structure constant is +1.
    """

    name = "circle"

    def __init__(self, max_arity: int, over: AssOperad | None = None):
        super().__init__(over if over is not None else AssOperad(max(max_arity, 1)), max_arity)

    def _basis(self, k):
        return [BasisElement((c, d), d) for c in cyclic_orders(k) for d in (0, 1)]

    def act_label(self, k, label, sigma):
        c, d = label
        return {(rotate_to_one(tuple(sigma[x - 1] for x in c)), d): 1}

    def partial_label(self, n, i, m, x, a):
        c, d = x
        return {(rotate_to_one(ass_substitute(c, i, a)), d): 1}

    def act_blocks(self, label, blocks):
        c, d = label
        return {(rotate_to_one(tuple(y for x in c for y in blocks[x - 1])), d): 1}


def module_from_operad(o: Operad, max_arity: int | None = None) -> OperadModule:
    return OperadModule(o, max_arity)


def circle_module(max_arity: int, over: AssOperad | None = None) -> CircleModule:
    return CircleModule(max_arity, over)


# ------------------------------------------------------------------ axioms

def check_module_axioms(mod: RightModule, arity_bound: int | None = None) -> AxiomReport:
    bound = mod.max_arity if arity_bound is None else arity_bound
    if bound > mod.max_arity:
        raise ValueError("arity bound exceeds max_arity")
    rep = AxiomReport(f"module {mod.name} over {mod.over.name} (arity <= {bound})")
    try:
        _check_module(mod, bound, rep)
    except (KeyError, ValueError) as exc:
        rep.add("structure", f"{type(exc).__name__}: {exc}")
    return rep


def _check_module(mod: RightModule, bound: int, rep: AxiomReport) -> None:
    o = mod.over
    u = {o.unit_label: 1}
    for k in range(1, bound + 1):
        sp = mod.component(k)
        for lab in sp.labels():
            for i in range(1, k + 1):
                rep.checked += 1
                if mod.partial(k, i, 1, {lab: 1}, u) != {lab: 1}:
                    rep.add("unit", f"{lab!r} o_{i} 1 != {lab!r}")
        _group_action_checks(rep, k, sp, mod.sigma_action)
    for n in range(1, bound + 1):
        X = mod.component(n).labels()
        for m in range(1, bound + 2 - n):
            A = o.component(m).labels()
            for r in range(1, bound + 3 - n - m):
                B = o.component(r).labels()
                for x, a, b in itertools.product(X, A, B):
                    xx, xa, xb = {x: 1}, {a: 1}, {b: 1}
                    for i in range(1, n + 1):
                        left = mod.partial(n, i, m, xx, xa)
                        for j in range(1, m + 1):
                            rep.checked += 1
                            lhs = mod.partial(n + m - 1, i + j - 1, r, left, xb)
                            rhs = mod.partial(n, i, m + r - 1, xx, o.compose(m, j, r, xa, xb))
                            if lhs != rhs:
                                rep.add("nested associativity", f"({x!r} o_{i} {a!r}) o_{i + j - 1} {b!r}")
                    s = -1 if o.degree(m, a) * o.degree(r, b) % 2 else 1
                    for j in range(2, n + 1):
                        xa_j = mod.partial(n, j, m, xx, xa)
                        for i in range(1, j):
                            rep.checked += 1
                            lhs = mod.partial(n + m - 1, i, r, xa_j, xb)
                            rhs = mod.partial(n + r - 1, j + r - 1, m, mod.partial(n, i, r, xx, xb), xa)
                            if lhs != {key: s * v for key, v in rhs.items()}:
                                rep.add("disjoint associativity", f"({x!r} o_{j} {a!r}) o_{i} {b!r}")
            if n + m - 1 > bound:
                continue
            for sigma in perms(n):
                for tau in perms(m):
                    for i in range(1, n + 1):
                        rho = block_perm(sigma, i, tau)
                        for x in X:
                            sx = mod.act_label(n, x, sigma)
                            for a in A:
                                rep.checked += 1
                                lhs = mod.partial(n, sigma[i - 1], m, sx, o.act_label(m, a, tau))
                                rhs = mod.sigma(n + m - 1, mod.partial_label(n, i, m, x, a), rho)
                                if lhs != rhs:
                                    rep.add("equivariance", f"sigma={sigma} tau={tau} slot {i} on ({x!r}, {a!r})")


# ------------------------------------------------------------------ file format

class TableModule(RightModule):
    def __init__(self, name: str, over: Operad, max_arity: int, spaces, sigma, partial):
        super().__init__(over, max_arity)
        self.name = name
        self._spaces.update(spaces)
        self._spaces.setdefault(0, UNIT_SPACE)
        self._sigma_tab = sigma
        self._partial_tab = partial

    def _basis(self, k):
        raise LoadError(f"component {k} missing")

    def act_label(self, k, label, sigma):
        tab = self._sigma_tab.get((k, tuple(sigma)))
        if tab is None:
            if tuple(sigma) == identity_perm(k):
                return {label: 1}
            from .operads import _split_adjacent
            first, rest = _split_adjacent(tuple(sigma))
            out: Vector = {}
            for l2, c in self.act_label(k, label, first).items():
                for l3, v in self.act_label(k, l2, rest).items():
                    _acc(out, l3, c * v)
            return out
        return dict(tab.get(label, {}))

    def partial_label(self, n, i, m, x, a):
        tab = self._partial_tab.get((n, i, m))
        if tab is None:
            raise LoadError(f"partial action table ({n}, {i}, {m}) missing")
        return dict(tab.get((x, a), {}))


def dump_module(mod: RightModule, path: str | Path) -> None:
    data = tables_to_json(mod, "partial_action", mod.partial_action, {"over": mod.over.name})
    Path(path).write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def load_module(path: str | Path, over: Operad, check: bool = True) -> RightModule:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LoadError(f"cannot parse {path}: {exc}") from exc
    return module_from_json(data, over, check=check)


def module_from_json(data: dict, over: Operad, check: bool = True) -> RightModule:
    for key in ("name", "max_arity", "components", "over"):
        if key not in data:
            raise LoadError(f"field {key!r} missing")
    if data["over"] != over.name:
        raise LoadError(f"module is over {data['over']!r}, not {over.name!r}")
    mx = int(data["max_arity"])
    if mx > over.max_arity:
        raise LoadError("module truncation exceeds the operad's")
    spaces = read_spaces(data, 0)
    for k in range(1, mx + 1):
        if k not in spaces:
            raise LoadError(f"component {k} missing")
    sigma = read_sigma(data, spaces)
    partial = {}
    for entry in data.get("partial_action") or []:
        try:
            n, i, m = int(entry["n"]), int(entry["i"]), int(entry["m"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"bad partial_action entry: {exc}") from exc
        if n not in spaces or n + m - 1 not in spaces or not 1 <= m <= over.max_arity:
            raise LoadError(f"partial_action ({n},{i},{m}) outside the loaded arities")
        src = tensor([spaces[n], over.component(m)])
        partial[(n, i, m)] = _read_triples(entry.get("matrix", []), spaces[n + m - 1], src, decode_label)
    mod = TableModule(str(data["name"]), over, mx, spaces, sigma, partial)
    if check:
        rep = check_module_axioms(mod, mx)
        if not rep.ok:
            raise LoadError("module axioms violated", rep)
    return mod
