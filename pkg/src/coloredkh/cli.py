"""Command-line front end.

Every subcommand reads one diagram (a JSON file, or ``corpus:NAME`` for a
built-in example), computes, and prints the result as json, csv or text.
Exit codes: 0 success, 1 parse or validation error, 2 a failed internal
consistency check, 3 refused as too large.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__, corpus
from .bicomplex import Bicomplex, cable_of, colored_jones
from .cobordism import DEGENERATE_MODES
from .diagram import DiagramError, LinkDiagram, ensure_valid, from_json, to_json, validate_diagram, writhe
from .khovanov import check_d_squared, cube, differential_matrix, homology
from .pairing import enumerate_pairings, pairing_count
from .poly import ConsistencyError, jones_from_bracket, render
from .state import kauffman_bracket, state_space, state_sum_jones

EXIT_OK, EXIT_PARSE, EXIT_CONSISTENCY, EXIT_INFEASIBLE = 0, 1, 2, 3
DEFAULT_MAX_STATES = 1 << 24
SUBCOMMANDS = (
    "validate", "cable", "bracket", "jones", "colored-jones",
    "pairings", "khovanov", "colored-khovanov", "verify",
)
NEEDS_SHAPE = {"cable", "colored-jones", "pairings", "colored-khovanov", "verify"}
CACHED = {"colored-jones", "khovanov", "colored-khovanov"}


class Infeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    input: str
    n: tuple[int, ...] | None = None
    ring: str = "Z"
    format: str = "text"
    jobs: int = 1
    cache_dir: str | None = None
    max_states: int = DEFAULT_MAX_STATES
    degenerate: str = "zero"


# ---------------------------------------------------------------- input


def read_diagram(spec: str) -> LinkDiagram:
    if spec.startswith("corpus:"):
        name = spec.split(":", 1)[1]
        if name not in corpus.NAMED:
            raise DiagramError(f"unknown corpus diagram {name!r}")
        d = corpus.get(name)
    else:
        try:
            text = Path(spec).read_text()
        except OSError as exc:
            raise DiagramError(f"cannot read {spec}: {exc}") from exc
        d = from_json(text)
    return d


def parse_shape(text: str | None) -> tuple[int, ...] | None:
    if text is None or text == "":
        return None
    try:
        vals = tuple(int(v) for v in str(text).replace(" ", "").split(","))
    except ValueError as exc:
        raise DiagramError(f"--n must be comma-separated integers, got {text!r}") from exc
    if any(v < 0 for v in vals):
        raise DiagramError("--n entries must be non-negative")
    return vals


def _resolve_shape(cfg: RunConfig, d: LinkDiagram) -> tuple[int, ...]:
    if cfg.n is None:
        raise DiagramError(f"{cfg.subcommand} needs --n")
    n = cfg.n
    if len(n) == 1 and d.n_components > 1:
        n = n * d.n_components
    if len(n) != d.n_components:
        raise DiagramError(f"--n has {len(n)} entries but the diagram has {d.n_components} components")
    return n


# ---------------------------------------------------------------- size guard


def estimated_states(d: LinkDiagram) -> int:
    """``2^c`` times the label count at the mean of the all-A and all-B circle numbers."""
    sp = state_space(d)
    if sp.n == 0:
        return 1 << sp.n_circles(0)
    mean = (sp.n_circles(0) + sp.n_circles((1 << sp.n) - 1)) / 2
    return int(2 ** (sp.n + mean))


def guard(cfg: RunConfig, diagrams) -> None:
    total = sum(estimated_states(x) for x in diagrams)
    if total > cfg.max_states:
        raise Infeasible(f"estimated {total} enhanced states exceeds --max-states {cfg.max_states}")


def _cables(d: LinkDiagram, n: tuple[int, ...]) -> list[LinkDiagram]:
    seen = {}
    for k in range(sum(v // 2 for v in n) + 1):
        for s in enumerate_pairings(n, k):
            r = s.reduced_shape()
            if any(r) and r not in seen:
                seen[r] = cable_of(d, r)
    return [seen[r] for r in sorted(seen)]


# ---------------------------------------------------------------- cache


def cache_key(d: LinkDiagram, cfg: RunConfig) -> str:
    doc = {
        "version": __version__,
        "diagram": json.loads(to_json(d)),
        "subcommand": cfg.subcommand,
        "n": list(cfg.n) if cfg.n else None,
        "ring": cfg.ring,
        "degenerate": cfg.degenerate,
    }
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def cache_get(cfg: RunConfig, key: str):
    if not cfg.cache_dir:
        return None
    path = Path(cfg.cache_dir) / f"{key}.json"
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError):
        return None
    if doc.get("version") != __version__:
        return None
    return doc.get("result")


def cache_put(cfg: RunConfig, key: str, result) -> None:
    if not cfg.cache_dir:
        return
    root = Path(cfg.cache_dir)
    root.mkdir(parents=True, exist_ok=True)
    tmp = root / f"{key}.tmp"
    tmp.write_text(json.dumps({"version": __version__, "result": result}, sort_keys=True))
    tmp.replace(root / f"{key}.json")


# ---------------------------------------------------------------- commands
# Each returns (result, ok) where result is plain JSON data.


def _poly_result(p) -> dict:
    return {"polynomial": render(p), "coefficients": [[e, c] for e, c in sorted(p.items())]}


def cmd_validate(cfg, d):
    rep = validate_diagram(d)
    result = {
        "ok": rep.ok,
        "crossings": len(d.crossings),
        "components": d.n_components,
        "errors": [{"code": c, "message": m} for c, m in rep.errors],
    }
    return result, rep.ok


def cmd_cable(cfg, d):
    n = _resolve_shape(cfg, d)
    return json.loads(to_json(cable_of(d, n))), True


def cmd_bracket(cfg, d):
    guard(cfg, [d])
    return _poly_result(kauffman_bracket(d)), True


def cmd_jones(cfg, d):
    guard(cfg, [d])
    return _poly_result(state_sum_jones(d)), True


def cmd_colored_jones(cfg, d):
    n = _resolve_shape(cfg, d)
    guard(cfg, _cables(d, n))
    return _poly_result(colored_jones(d, n)), True


def cmd_pairings(cfg, d):
    n = _resolve_shape(cfg, d)
    out = []
    for k in range(sum(v // 2 for v in n) + 1):
        ps = enumerate_pairings(n, k)
        out.append({"k": k, "count": len(ps), "pairings": [str(p) for p in ps]})
    return {"shape": list(n), "levels": out}, True


def cmd_khovanov(cfg, d):
    guard(cfg, [d])
    table = homology(d, cfg.ring)
    rows = [
        {"i": i, "j": j, "rank": r, "torsion": t}
        for (i, j), (r, t) in table.nonzero().items()
    ]
    return {"ring": cfg.ring, "groups": rows}, True


def cmd_colored_khovanov(cfg, d):
    n = _resolve_shape(cfg, d)
    guard(cfg, _cables(d, n))
    bc = Bicomplex(d, n, cfg.ring, degenerate_mode=cfg.degenerate)
    rows = [{"k": k, "i": i, "j": j, "rank": r} for (k, i, j), r in sorted(bc.homology().items())]
    return {"ring": cfg.ring, "shape": list(n), "groups": rows}, True


# ---------------------------------------------------------------- verify


def _check_cables(payload):
    doc, n, ring = payload
    d = from_json(doc)
    return sum(check_d_squared(x, ring) for x in _cables(d, tuple(n)))


def _check_reduction(payload):
    doc, n, _ = payload
    d = from_json(doc)
    for x in _cables(d, tuple(n)):
        for i, j in cube(x).gradings():
            a = differential_matrix(x, i, j, "Z").to_scipy()
            a.data %= 2
            a.eliminate_zeros()
            b = differential_matrix(x, i, j, "Z2").to_scipy()
            if (a != b).nnz:
                raise ConsistencyError(f"mod-2 reduction differs at (i,j)=({i},{j})")
    return True


def _check_jones_paths(payload):
    doc, n, _ = payload
    d = from_json(doc)
    for x in [d] + _cables(d, tuple(n)):
        a = state_sum_jones(x)
        b = jones_from_bracket(kauffman_bracket(x), writhe(x))
        if a != b:
            raise ConsistencyError("state-sum Jones differs from the bracket route")
    return True


def _check_pairing_counts(payload):
    _, n, _ = payload
    for k in range(sum(v // 2 for v in n) + 1):
        got = len(enumerate_pairings(tuple(n), k))
        if got != pairing_count(tuple(n), k):
            raise ConsistencyError(f"pairing count mismatch at k={k}")
    return True


def _check_bicomplex(payload):
    doc, n, ring, which, degenerate = payload
    bc = Bicomplex(from_json(doc), tuple(n), ring, degenerate_mode=degenerate)
    return bc.check((which,))[which]


def _check_euler(payload):
    doc, n, ring, level, degenerate = payload
    d = from_json(doc)
    bc = Bicomplex(d, tuple(n), ring, degenerate_mode=degenerate)
    want = colored_jones(d, tuple(n)) if level == "chain" else bc.euler("chain")
    if bc.euler(level) != want:
        raise ConsistencyError(f"{level}-level Euler characteristic differs from its reference")
    return True


def _run_identity(task):
    name, fn, payload = task
    t0 = time.perf_counter()
    try:
        fn(payload)
        status, detail = "pass", ""
    except ConsistencyError as exc:
        status, detail = "fail", str(exc)
    return {"identity": name, "status": status, "detail": detail,
            "seconds": round(time.perf_counter() - t0, 3)}


def cmd_verify(cfg, d):
    n = _resolve_shape(cfg, d)
    guard(cfg, _cables(d, n))
    doc = to_json(d)
    base = (doc, list(n), cfg.ring)
    tasks = [
        ("khovanov d^2 = 0 on every cable", _check_cables, base),
        ("Z differential mod 2 equals Z2 differential", _check_reduction, base),
        ("state-sum Jones equals bracket Jones", _check_jones_paths, base),
        ("pairing counts match binomial products", _check_pairing_counts, base),
    ]
    for which in ("d''^2", "d'^2", "anticommute"):
        tasks.append((f"bicomplex {which}", _check_bicomplex, base + (which, cfg.degenerate)))
    tasks.append(("chain Euler characteristic equals colored Jones", _check_euler, base + ("chain", cfg.degenerate)))
    tasks.append(("homology Euler characteristic equals chain", _check_euler, base + ("homology", cfg.degenerate)))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            report = list(pool.map(_run_identity, tasks))
    else:
        report = [_run_identity(t) for t in tasks]
    ok = all(r["status"] == "pass" for r in report)
    return {"shape": list(n), "ring": cfg.ring, "identities": report}, ok


COMMANDS = {
    "validate": cmd_validate,
    "cable": cmd_cable,
    "bracket": cmd_bracket,
    "jones": cmd_jones,
    "colored-jones": cmd_colored_jones,
    "pairings": cmd_pairings,
    "khovanov": cmd_khovanov,
    "colored-khovanov": cmd_colored_khovanov,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------- output


def _flat_rows(result) -> list[dict]:
    for key in ("groups", "identities", "errors"):
        if key in result:
            return result[key]
    if "levels" in result:
        return [{"k": lv["k"], "pairing": p} for lv in result["levels"] for p in lv["pairings"]]
    if "coefficients" in result:
        return [{"exponent": e, "coefficient": c} for e, c in result["coefficients"]]
    return [result]


def format_result(result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        rows = _flat_rows(result)
        buf = io.StringIO()
        if rows:
            fields = list(rows[0])
            w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
        return buf.getvalue()
    if "polynomial" in result:
        return result["polynomial"] + "\n"
    if "identities" in result:
        return "".join(
            f"{r['status'].upper():4}  {r['identity']}  ({r['seconds']:.2f}s)"
            + (f"\n      {r['detail']}" if r["detail"] else "") + "\n"
            for r in result["identities"]
        )
    if "groups" in result:
        lines = []
        for g in result["groups"]:
            idx = ",".join(str(g[c]) for c in ("k", "i", "j") if c in g)
            tors = "".join(f" + Z/{t}" for t in g.get("torsion", []))
            lines.append(f"({idx}): rank {g['rank']}{tors}")
        return "\n".join(lines) + ("\n" if lines else "")
    if "levels" in result:
        return "".join(f"k={lv['k']}: {lv['count']}  " + " ".join(lv["pairings"]) + "\n" for lv in result["levels"])
    if "errors" in result:
        if result["ok"]:
            return f"ok: {result['crossings']} crossings, {result['components']} components\n"
        return "".join(f"{e['code']}: {e['message']}\n" for e in result["errors"])
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- entry


def _env(name: str, default=None):
    return os.environ.get(f"COLOREDKH_{name}", default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coloredkh", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        s = sub.add_parser(name)
        s.add_argument("input", help="diagram JSON file or corpus:NAME")
        s.add_argument("--n", default=_env("N"), help="cable shape, e.g. 4 or 2,1")
        s.add_argument("--ring", type=str.lower, choices=("z2", "z"), default=_env("RING", "z").lower())
        s.add_argument("--format", choices=("json", "csv", "text"), default=_env("FORMAT", "text"))
        s.add_argument("--jobs", type=int, default=int(_env("JOBS", "1")))
        s.add_argument("--cache-dir", default=_env("CACHE_DIR"))
        s.add_argument("--max-states", type=int, default=int(_env("MAX_STATES", str(DEFAULT_MAX_STATES))))
        s.add_argument("--degenerate", choices=DEGENERATE_MODES, default=_env("DEGENERATE", "zero"))
    return p


def config_from_args(args) -> RunConfig:
    return RunConfig(
        subcommand=args.subcommand,
        input=args.input,
        n=parse_shape(args.n),
        ring="Z2" if args.ring == "z2" else "Z",
        format=args.format,
        jobs=max(1, args.jobs),
        cache_dir=args.cache_dir,
        max_states=args.max_states,
        degenerate=args.degenerate,
    )


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        d = read_diagram(cfg.input)
        if cfg.subcommand != "validate":
            d = ensure_valid(d)
            if cfg.subcommand in NEEDS_SHAPE:
                _resolve_shape(cfg, d)
        key = cache_key(d, cfg) if cfg.subcommand in CACHED else None
        result = cache_get(cfg, key) if key else None
        ok = True
        if result is None:
            result, ok = COMMANDS[cfg.subcommand](cfg, d)
            if key and ok:
                cache_put(cfg, key, result)
    except (DiagramError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_PARSE
    except Infeasible as exc:
        err.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    except ConsistencyError as exc:
        err.write(f"consistency failure: {exc}\n")
        return EXIT_CONSISTENCY
    out.write(format_result(result, cfg.format))
    if not ok:
        return EXIT_PARSE if cfg.subcommand == "validate" else EXIT_CONSISTENCY
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except DiagramError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
