"""Command line entry point: ``scatterlab check|verify|sweep|equiv --config FILE``.

Exit codes: 0 ok, 1 a property failed, 2 bad config, 3 budget exceeded,
4 outside the range of the relevant result.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from typing import Any, Dict, List, Optional

import numpy as np

from . import __version__
from .criteria import (check_spec, inequiv_lower_bound, q_lower_bound, sweep_record,
                       tuple_at, tuple_count)
from .equiv import DEFERRED, HypothesisError, are_equivalent, index_verdict
from .gf import FieldError, ctx_new
from .linalg import randbelow
from .oracle import (BudgetExceeded, UnsupportedInstance, second_weight, verify_cutting,
                     verify_evasive, verify_scattered)
from .seq import SequenceSpec, SpecError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BUDGET, EXIT_NA = 0, 1, 2, 3, 4


class ConfigError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _spec(obj: Dict[str, Any]) -> SequenceSpec:
    try:
        return SequenceSpec.from_json(obj)
    except (SpecError, FieldError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _spec_from_config(cfg: Dict[str, Any]) -> SequenceSpec:
    return _spec(cfg["spec"] if "spec" in cfg else cfg)


def _envelope(command: str, cfg, args, spec: Optional[SequenceSpec], result) -> Dict[str, Any]:
    out = {"command": command, "config": cfg, "seed": args.seed, "budget": args.budget,
           "version": __version__, "result": result}
    if spec is not None:
        out["modulus"] = list(spec.ctx.modulus)
    return out


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(cfg, args) -> int:
    spec = _spec_from_config(cfg)
    report = check_spec(spec, int(cfg.get("h_max", 8)))
    _emit(dumps(_envelope("check", cfg, args, spec, report.to_json())), args.out)
    return EXIT_OK


def _property_list(cfg) -> List[Dict[str, Any]]:
    props = cfg.get("properties", ["scattered"])
    out = []
    for p in props:
        if isinstance(p, str):
            p = {"name": p}
        if not isinstance(p, dict) or "name" not in p:
            raise ConfigError(f"bad property entry {p!r}")
        if p["name"] not in ("scattered", "evasive", "cutting", "second_weight"):
            raise ConfigError(f"unknown property {p['name']!r}")
        if p["name"] == "evasive" and not {"h", "r"} <= set(p):
            raise ConfigError("evasive needs 'h' and 'r'")
        out.append(p)
    return out


def cmd_verify(cfg, args) -> int:
    spec = _spec_from_config(cfg)
    props = _property_list(cfg)
    mode = cfg.get("mode", "exhaustive")
    if mode not in ("exhaustive", "sampled"):
        raise ConfigError(f"unknown mode {mode!r}")
    budget = args.budget if args.budget is not None else cfg.get("budget")
    kw = dict(mode=mode, budget=budget, seed=args.seed, workers=args.workers)
    verdicts = []
    for p in props:
        name = p["name"]
        if name == "scattered":
            v = verify_scattered(spec, **kw)
        elif name == "evasive":
            v = verify_evasive(spec, int(p["h"]), int(p["r"]), **kw)
        elif name == "cutting":
            v = verify_cutting(spec, **kw)
        else:
            v = second_weight(spec, **kw)
        verdicts.append(v)
    _emit(dumps(_envelope("verify", cfg, args, spec, [v.to_json() for v in verdicts])), args.out)
    return EXIT_FAIL if any(not v.passed for v in verdicts) else EXIT_OK


def cmd_equiv(cfg, args) -> int:
    if "a" not in cfg or "b" not in cfg:
        raise ConfigError("equiv config needs specs 'a' and 'b'")
    A, B = _spec(cfg["a"]), _spec(cfg["b"])
    if A.ctx != B.ctx:
        raise ConfigError("the two specs must share the field")
    strict = bool(cfg.get("strict", True))
    if strict or (A.I, A.J) != (B.I, B.J):
        idx = index_verdict(A, B)
    else:
        idx = DEFERRED
    if idx == DEFERRED:
        result = are_equivalent(A, B, strict=strict).to_json()
    else:
        result = {"verdict": idx}
    _emit(dumps(_envelope("equiv", cfg, args, A, result)), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def config_hash(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def _read_existing(path: str, digest: str) -> set:
    """Positions already recorded; trims a torn trailing line left by an interrupt."""
    done = set()
    with open(path, "rb") as fh:
        data = fh.read()
    if data and not data.endswith(b"\n"):
        cut = data.rfind(b"\n") + 1
        with open(path, "r+b") as fh:
            fh.truncate(cut)
        data = data[:cut]
    lines = data.decode().splitlines()
    if not lines:
        return done
    header = json.loads(lines[0])
    if header.get("type") != "header" or header.get("config_hash") != digest:
        raise ConfigError(f"{path} belongs to a different sweep configuration")
    for line in lines[1:]:
        rec = json.loads(line)
        done.add(rec["position"])
    return done


def _sweep_positions(ctx, m, sw, seed) -> List[int]:
    total = tuple_count(ctx, m)
    kind = sw.get("mode", "exhaustive")
    if kind == "exhaustive":
        return list(range(total))
    if kind == "random":
        rng = np.random.default_rng(seed)
        return [randbelow(rng, total) for _ in range(int(sw.get("count", 100)))]
    raise ConfigError(f"unknown sweep mode {kind!r}")


def _spot_check(spec, rate, seed, position, budget) -> Optional[Dict[str, Any]]:
    if rate <= 0:
        return None
    if np.random.default_rng([seed, position]).random() >= rate:
        return None
    try:
        v = verify_scattered(spec, budget=budget)
    except BudgetExceeded:
        return {"skipped": "budget"}
    return {"scattered_oracle": v.passed}


def summarize(path: str, sw) -> List[List[Any]]:
    counts = {"records": 0, "scattered_guaranteed": 0, "all_delta": 0, "exists_delta": 0,
              "scattered_and_all_delta": 0, "cutting_guaranteed": 0,
              "spot_checks": 0, "spot_check_not_scattered": 0, "soundness_violations": 0}
    with open(path) as fh:
        next(fh)
        for line in fh:
            r = json.loads(line)
            counts["records"] += 1
            sc = r["scattered"] == "guaranteed"
            counts["scattered_guaranteed"] += sc
            counts["all_delta"] += r["all_delta"]
            counts["exists_delta"] += r["exists_delta"]
            counts["scattered_and_all_delta"] += sc and r["all_delta"]
            counts["cutting_guaranteed"] += r["cutting"] == "guaranteed"
            spot = r.get("spot_check")
            if spot and "scattered_oracle" in spot:
                counts["spot_checks"] += 1
                bad = not spot["scattered_oracle"]
                counts["spot_check_not_scattered"] += bad
                # the criterion promised scatteredness and the oracle disagrees
                counts["soundness_violations"] += bad and sc
    ctx = ctx_new(sw["p"], sw["h"], sw["n"], sw.get("modulus", "builtin"))
    qb = q_lower_bound(ctx, sw["m"], sw["I"], sw["J"])
    ib = inequiv_lower_bound(ctx, sw["m"], sw["I"], sw["J"])
    rows = [[k, v] for k, v in counts.items()]
    rows.append(["Q_bound", qb.Q if qb.Q is not None else qb.verdict])
    rows.append(["inequivalent_classes_bound", ib.value if ib.value is not None else ib.verdict])
    return rows


def summary_path(path: str) -> str:
    stem, _ = os.path.splitext(path)
    return stem + ".summary.csv"


def cmd_sweep(cfg, args) -> int:
    sw = cfg.get("sweep")
    if not isinstance(sw, dict):
        raise ConfigError("sweep config needs a 'sweep' object")
    for key in ("p", "h", "n", "m", "I", "J"):
        if key not in sw:
            raise ConfigError(f"sweep is missing {key!r}")
    try:
        ctx = ctx_new(int(sw["p"]), int(sw["h"]), int(sw["n"]), sw.get("modulus", "builtin"))
    except (FieldError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    m, I, J = int(sw["m"]), int(sw["I"]), int(sw["J"])
    out = args.out or "sweep.jsonl"
    digest = config_hash({"sweep": sw, "seed": args.seed})
    positions = _sweep_positions(ctx, m, sw, args.seed)
    rate = float(sw.get("spot_check_rate", 0.0))

    done = _read_existing(out, digest) if os.path.exists(out) else set()
    with open(out, "a") as fh:
        if not os.path.getsize(out):
            header = {"type": "header", "config_hash": digest, "config": cfg, "seed": args.seed,
                      "version": __version__, "modulus": list(ctx.modulus)}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
        for pos, index in enumerate(positions):
            if pos in done:
                continue
            try:
                spec = SequenceSpec(ctx, m, I, J, tuple_at(ctx, m, index))
            except SpecError as exc:
                raise ConfigError(str(exc)) from exc
            rec = {"type": "record", "position": pos, "index": index, **sweep_record(spec)}
            spot = _spot_check(spec, rate, args.seed, pos, args.budget)
            if spot is not None:
                rec["spot_check"] = spot
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
            fh.flush()
    with open(summary_path(out), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "value"])
        w.writerows(summarize(out, sw))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

COMMANDS = {"check": cmd_check, "verify": cmd_verify, "sweep": cmd_sweep, "equiv": cmd_equiv}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scatterlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=None)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        return COMMANDS[args.command](cfg, args)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"scatterlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BudgetExceeded as exc:
        print(f"scatterlab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (HypothesisError, UnsupportedInstance) as exc:
        print(f"scatterlab: not applicable: {exc}", file=sys.stderr)
        return EXIT_NA


if __name__ == "__main__":
    sys.exit(main())
