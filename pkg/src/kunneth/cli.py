"""Command line: ``kunneth e2 | check | bar-dims``.

Exit codes: 0 success, 2 validation failure, 3 truncation exceeded,
4 internal consistency failure (a boundary that does not square to zero).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

from .bar import BarEngine
from .bv import DiagEngine, TruncationError
from .cache import JsonCache
from .e2 import betti, degree_characters, e2_characters, e2_page
from .linalg import NotAComplex
from .modules import ArityError, check_module_axioms, circle_module, load_module, module_from_operad
from .operads import LoadError, ass_operad, check_operad_axioms, ger_operad, load_operad

EXIT_OK, EXIT_INVALID, EXIT_TRUNCATION, EXIT_INTERNAL = 0, 2, 3, 4
BUILTIN_FACTORS = ("r1", "s1")
ALIASES = {"left": "left_factor", "right": "right_factor"}  # config keys may use the flag names


@dataclass
class RunConfig:
    left_factor: str = "r1"
    right_factor: str = "r1"
    points: str = "2"
    max_degree: int | None = None
    characters: bool = False
    format: str = "table"
    cache_dir: str | None = None
    threads: int = 1
    mode: str = "reduced"

    def arities(self) -> list[int]:
        return parse_points(self.points)

    def validate(self) -> None:
        for side in (self.left_factor, self.right_factor):
            if side not in BUILTIN_FACTORS and not side.startswith("file:"):
                raise ValueError(f"unknown factor {side!r} (use r1, s1 or file:<path>)")
            if side.startswith("file:") and not Path(side[5:]).is_file():
                raise ValueError(f"no such file: {side[5:]}")
        if self.max_degree is not None and self.max_degree < 0:
            raise ValueError("max-degree must be non-negative")
        if self.format not in ("table", "json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.threads < 1:
            raise ValueError("threads must be positive")
        if self.mode not in ("reduced", "sequential"):
            raise ValueError(f"unknown mode {self.mode!r}")
        self.arities()


def parse_points(text) -> list[int]:
    s = str(text).strip()
    for sep in ("..", "-", ":"):
        if sep in s:
            a, b = s.split(sep, 1)
            lo, hi = int(a), int(b)
            break
    else:
        lo = hi = int(s)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad point range {text!r}")
    return list(range(lo, hi + 1))


def load_factor(name: str, arity: int):
    """Module for a factor name plus a stable identity for cache keys."""
    if name == "r1":
        return module_from_operad(ass_operad(max(arity, 1)), arity), "r1"
    if name == "s1":
        return circle_module(arity, ass_operad(max(arity, 1))), "s1"
    path = Path(name[5:])
    raw = path.read_bytes()
    meta = json.loads(raw)
    bound = int(meta.get("max_arity", arity))
    if arity > bound:
        raise TruncationError(f"{path} is truncated at arity {bound} < {arity}")
    mod = load_module(path, ass_operad(max(bound, 1)))
    return mod, "sha256:" + hashlib.sha256(raw).hexdigest()


# ---------------------------------------------------------------- e2

def compute_e2(cfg: RunConfig, k: int, cache: JsonCache | None) -> dict:
    d_max = cfg.max_degree if cfg.max_degree is not None else 2 * k
    left, lid = load_factor(cfg.left_factor, k)
    right, rid = load_factor(cfg.right_factor, k)
    key = {"cmd": "e2", "left": lid, "right": rid, "k": k, "d_max": d_max, "mode": cfg.mode,
           "characters": cfg.characters}
    if cache is not None:
        hit = cache.get(key)
        if hit is not None:
            return hit
    table = e2_page(left, right, k, d_max, mode=cfg.mode, threads=cfg.threads, factors=(cfg.left_factor, cfg.right_factor))
    bt = betti(table)
    out = {
        "factors": [cfg.left_factor, cfg.right_factor],
        "k": k,
        "e2": [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(table.entries.items())],
        "betti": [{"d": d, "dim": v} for d, v in enumerate(bt.betti)],
        "truncation": {"p_max": table.p_max, "d_max": table.d_max},
        "collapse_assumed": bt.collapse_assumed,
    }
    if cfg.characters:
        chars = degree_characters(e2_characters(left, right, k, d_max))
        out["characters"] = [{"d": d, "class": list(mu), "value": v} for (d, mu), v in chars.items()]
    if cache is not None:
        cache.put(key, out)
    return out


def render(results: list[dict], fmt: str) -> str:
    if fmt == "json":
        body = results[0] if len(results) == 1 else results
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "table", "p", "q", "d", "class", "value"])
        for r in results:
            for e in r["e2"]:
                w.writerow([r["k"], "e2", e["p"], e["q"], e["p"] + e["q"], "", e["dim"]])
            for b in r["betti"]:
                w.writerow([r["k"], "betti", "", "", b["d"], "", b["dim"]])
            for c in r.get("characters", []):
                w.writerow([r["k"], "character", "", "", c["d"], " ".join(map(str, c["class"])), c["value"]])
        return buf.getvalue()
    lines = []
    for r in results:
        lines.append(f"{r['factors'][0]} x {r['factors'][1]}, k = {r['k']}"
                     f" (d <= {r['truncation']['d_max']}, collapse assumed)")
        grid = {(e["p"], e["q"]): e["dim"] for e in r["e2"]}
        d_max = r["truncation"]["d_max"]
        lines.append(("E2    " + " ".join(f"q={q:<3d}" for q in range(d_max + 1))).rstrip())
        for p in range(d_max + 1):
            cells = [f"{grid.get((p, q), 0):<5d}" if p + q <= d_max else "     " for q in range(d_max + 1)]
            lines.append(f"p={p:<3d} " + " ".join(cells).rstrip())
        lines.append("betti " + " ".join(str(b["dim"]) for b in r["betti"]))
        if "characters" in r:
            for c in r["characters"]:
                lines.append(f"char d={c['d']} class=({','.join(map(str, c['class']))}) {c['value']}")
        lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------- check / bar-dims

def cmd_check(kind: str, target: str, arity: int) -> tuple[int, str]:
    try:
        if kind == "operad":
            if target in ("ass", "ger"):
                op = (ass_operad if target == "ass" else ger_operad)(arity)
            elif target.startswith("file:"):
                op = load_operad(target[5:], check=False)
            else:
                return EXIT_INVALID, f"unknown operad {target!r}\n"
            rep = check_operad_axioms(op, min(arity, op.max_arity))
        else:
            if target in BUILTIN_FACTORS:
                mod, _ = load_factor(target, arity)
            elif target.startswith("file:"):
                data = json.loads(Path(target[5:]).read_text(encoding="utf-8"))
                mod = load_module(target[5:], ass_operad(max(int(data.get("max_arity", 1)), 1)), check=False)
            else:
                return EXIT_INVALID, f"unknown module {target!r}\n"
            rep = check_module_axioms(mod, min(arity, mod.max_arity))
    except (LoadError, OSError, ValueError) as exc:
        return EXIT_INVALID, f"load failed: {exc}\n"
    return (EXIT_OK if rep.ok else EXIT_INVALID), str(rep) + "\n"


def cmd_bar_dims(cfg: RunConfig, max_level: int) -> str:
    rows = ["k p bar_left bar_right diag"]
    for k in cfg.arities():
        left, _ = load_factor(cfg.left_factor, k)
        right, _ = load_factor(cfg.right_factor, k)
        bl, br = BarEngine(left, k, cfg.mode), BarEngine(right, k, cfg.mode)
        dg = DiagEngine(left, right, k, cfg.mode)
        top = dg.max_level()
        for p in range(max_level + 1):
            dd = len(dg.level(p)) if top is None or p <= top else 0
            rows.append(f"{k} {p} {len(bl.level(p))} {len(br.level(p))} {dd}")
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------- entry point

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kunneth", description="E2 pages for configurations on products of 1-manifolds")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def run_flags(p):
        p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        p.add_argument("--left", dest="left_factor", help="r1, s1 or file:<module.json>")
        p.add_argument("--right", dest="right_factor", help="r1, s1 or file:<module.json>")
        p.add_argument("--points", help="k, or a range such as 1..3")
        p.add_argument("--mode", help="reduced (default) or sequential")
        p.add_argument("--threads", type=int)
        p.add_argument("--cache-dir")

    e2 = sub.add_parser("e2", help="E2 page and Betti numbers")
    run_flags(e2)
    e2.add_argument("--max-degree", type=int)
    e2.add_argument("--characters", action="store_true", default=None)
    e2.add_argument("--format", help="table, json or csv")

    ck = sub.add_parser("check", help="verify operad or module axioms")
    ck.add_argument("kind", choices=("operad", "module"))
    ck.add_argument("target", help="ass, ger, r1, s1 or file:<path>")
    ck.add_argument("--arity", type=int, default=4)

    bd = sub.add_parser("bar-dims", help="dimensions of bar and diagonal levels")
    run_flags(bd)
    bd.add_argument("--max-level", type=int, default=3)
    return ap


def build_config(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        base = {ALIASES.get(key.replace("-", "_"), key.replace("-", "_")): v for key, v in raw.items()}
        unknown = set(base) - {f.name for f in fields(RunConfig)}
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            base[f.name] = v
    cfg = RunConfig(**base)
    cfg.points = str(cfg.points)
    cfg.validate()
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        if args.cmd == "check":
            code, text = cmd_check(args.kind, args.target, args.arity)
            out.write(text)
            return code
        cfg = build_config(args)
        if args.cmd == "bar-dims":
            out.write(cmd_bar_dims(cfg, args.max_level))
            return EXIT_OK
        cache = JsonCache(cfg.cache_dir) if cfg.cache_dir else JsonCache.from_env()
        results = [compute_e2(cfg, k, cache) for k in cfg.arities()]
        out.write(render(results, cfg.format))
        return EXIT_OK
    except (TruncationError, ArityError) as exc:
        err.write(f"error: truncation exceeded: {exc}\n")
        return EXIT_TRUNCATION
    except (NotAComplex, ArithmeticError) as exc:
        err.write(f"error: internal consistency failure: {exc}\n")
        return EXIT_INTERNAL
    except LoadError as exc:
        err.write(f"error: {exc}\n")
        if exc.report is not None:
            err.write(str(exc.report) + "\n")
        return EXIT_INVALID
    except (ValueError, OSError, json.JSONDecodeError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
