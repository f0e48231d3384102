"""Command line front end.

Exit codes: 0 success, 2 bad input, 3 exact search over budget,
4 discharging audit has failures, 5 a verified instance breaks chi2 <= delta + 4.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .coloring import BudgetExceeded, Coloring, dsatur, exact_chi2, validate_coloring
from .corpus import (
    BadParameter,
    GenSpec,
    ParseError,
    dump_json,
    generate,
    parse_spec,
    read_manifest,
    read_p5g,
    write_p5g,
    write_results,
)
from .discharge import apply_rules, audit, initial_charges, rational, settle
from .graph import (
    UNBOUNDED,
    GraphError,
    RotationGraph,
    girth,
    is_connected,
    trace_faces,
    validate_planar_embedding,
)
from .structure import DeltaOverrideWarning, DeltaTooSmall, check_reducible, profile, refined_poor_cap_notes

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_AUDIT = 4
EXIT_BOUND = 5

INPUT_ERRORS = (GraphError, ParseError, BadParameter, DeltaTooSmall, OSError, ValueError)


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: Path | None = None
    gen: str | None = None
    delta: int | None = None
    exact: bool = False
    budget_ms: int | None = None
    seed: int | None = None
    out: Path | None = None
    json: bool = False

    def __post_init__(self):
        if self.delta is not None and self.delta < 1:
            raise InputError("--delta must be at least 1")


def _apply_seed(spec: GenSpec, seed: int | None) -> GenSpec:
    if seed is None:
        return spec
    params = dict(spec.params)
    if "seed" not in params:
        raise InputError(f"family {spec.family} takes no seed")
    params["seed"] = seed
    return GenSpec(spec.family, tuple(sorted(params.items())))


def load_graph(cfg: RunConfig) -> tuple[RotationGraph, str]:
    """Graph plus a stable key naming its results directory."""
    if (cfg.input is None) == (cfg.gen is None):
        raise InputError("give exactly one of --input or --gen")
    if cfg.gen is not None:
        spec = _apply_seed(parse_spec(cfg.gen), cfg.seed)
        return generate(spec), spec.digest()
    data = Path(cfg.input).read_bytes()
    return read_p5g(data.decode()), hashlib.sha256(data).hexdigest()[:12]


def _emit(cfg: RunConfig, key: str, files: dict[str, str]) -> None:
    if cfg.out is not None:
        write_results(cfg.out, key, files)


def _profile_doc(g: RotationGraph, delta: int | None):
    prof = profile(g, delta)
    report = check_reducible(g, prof=prof)
    doc = prof.to_dict()
    doc["notes"] = report.notes
    if is_connected(g):
        doc["refined_poor_cap"] = refined_poor_cap_notes(g, trace_faces(g))
    return prof, report, doc


def cmd_generate(cfg: RunConfig) -> int:
    g, key = load_graph(cfg)
    text = write_p5g(g)
    _emit(cfg, key, {"graph.p5g": text})
    sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    g, key = load_graph(cfg)
    prof, report, doc = _profile_doc(g, cfg.delta)
    violations = report.to_list()
    _emit(cfg, key, {"profile.json": dump_json(doc), "violations.json": dump_json(violations)})
    if cfg.json:
        sys.stdout.write(dump_json({"profile": doc, "violations": violations}))
    else:
        counts: dict[str, int] = {}
        for f in report:
            counts[f.rule] = counts.get(f.rule, 0) + 1
        light, heavy = len(prof.light_set()), len(prof.heavy_set())
        print(f"n={g.n} m={g.m} delta={prof.delta} light={light} heavy={heavy}")
        print("violations: " + (", ".join(f"{r}={c}" for r, c in sorted(counts.items())) or "none"))
    return EXIT_OK


def cmd_color(cfg: RunConfig) -> int:
    g, key = load_graph(cfg)
    if cfg.exact:
        budget = None if cfg.budget_ms is None else cfg.budget_ms / 1000
        try:
            k, coloring = exact_chi2(g, budget)
        except BudgetExceeded as exc:
            _emit(cfg, key, {"coloring.txt": exc.best.to_text()})
            print(f"chi2>={exc.lower} chi2<={exc.upper}")
            return EXIT_BUDGET
        summary = f"chi2={k}"
    else:
        coloring = dsatur(g)
        summary = f"chi2<={coloring.k}"
    assert validate_coloring(g, coloring).valid
    _emit(cfg, key, {"coloring.txt": coloring.to_text()})
    if cfg.json:
        sys.stdout.write(dump_json({"summary": summary, "k": coloring.k,
                                    "coloring": [coloring[v] for v in g.vertices()]}))
    else:
        print(summary)
    return EXIT_OK


def cmd_discharge(cfg: RunConfig) -> int:
    g, key = load_graph(cfg)
    if not is_connected(g):
        raise InputError("discharging needs a connected graph")
    faces = trace_faces(g)
    if not validate_planar_embedding(g, faces):
        raise InputError("rotation system is not a planar embedding")
    prof = profile(g, cfg.delta)
    initial = initial_charges(g, faces)
    ledger = apply_rules(g, faces, prof)
    final = settle(initial, ledger)
    report = audit(g, faces, prof, final, initial=initial)
    ledger_doc = ledger.to_dict()
    audit_doc = report.to_dict()
    _emit(cfg, key, {"ledger.json": dump_json(ledger_doc), "audit.json": dump_json(audit_doc)})
    if cfg.json:
        sys.stdout.write(dump_json({"ledger": ledger_doc, "audit": audit_doc}))
    else:
        ti, tf = report.total_initial, report.total_final
        print(f"entries={len(ledger)} failures={len(report.failures())}")
        print(f"total_initial={ti} total_final={tf}")
    return EXIT_OK if report.all_pass else EXIT_AUDIT


def verify_one(spec_text: str, budget_s: float | None) -> dict:
    """One verdict row for a manifest entry."""
    g = generate(spec_text)
    delta = g.max_degree
    gth = girth(g)
    planar = is_connected(g) and validate_planar_embedding(g)
    in_scope = planar and gth >= 5 and delta >= 22
    try:
        k, coloring = exact_chi2(g, budget_s)
        method = "exact"
    except BudgetExceeded as exc:
        coloring, k, method = exc.best, exc.best.k, "heuristic"
    ok = validate_coloring(g, coloring).valid
    bound = delta + 4
    if not in_scope:
        verdict = "skip"
    else:
        verdict = "pass" if ok and k <= bound else "fail"
    return {
        "spec": spec_text,
        "n": g.n,
        "delta": delta,
        "girth": None if gth == UNBOUNDED else gth,
        "method": method,
        "k": k,
        "bound": bound,
        "verdict": verdict,
    }


def _format_row(row: dict) -> str:
    gth = "inf" if row["girth"] is None else row["girth"]
    return (
        f"{row['spec']:<40} n={row['n']:<3} Δ={row['delta']:<3} girth={gth:<4} "
        f"method={row['method']:<9} k={row['k']} ≤ {row['bound']} {row['verdict']}"
    )


def _workers() -> int:
    try:
        cap = int(os.environ.get("P5G_THREADS", "0"))
    except ValueError:
        cap = 0
    cpus = os.cpu_count() or 1
    return max(1, min(cap, cpus) if cap > 0 else cpus)


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.input is None:
        raise InputError("verify needs --input <manifest>")
    specs = read_manifest(Path(cfg.input).read_text())
    if not specs:
        raise InputError("manifest is empty")
    texts = [str(_apply_seed(s, cfg.seed)) for s in specs]
    budget = 2.0 if cfg.budget_ms is None else cfg.budget_ms / 1000
    workers = min(_workers(), len(texts))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            rows = list(pool.map(verify_one, texts, [budget] * len(texts)))
    else:
        rows = [verify_one(t, budget) for t in texts]
    if cfg.out is not None:
        Path(cfg.out).mkdir(parents=True, exist_ok=True)
        (Path(cfg.out) / "verify.json").write_text(dump_json(rows))
    if cfg.json:
        sys.stdout.write(dump_json(rows))
    else:
        for row in rows:
            print(_format_row(row))
        checked = sum(r["verdict"] != "skip" for r in rows)
        failed = sum(r["verdict"] == "fail" for r in rows)
        print(f"checked={checked} skipped={len(rows) - checked} failed={failed}")
    return EXIT_BOUND if any(r["verdict"] == "fail" for r in rows) else EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "analyze": cmd_analyze,
    "color": cmd_color,
    "discharge": cmd_discharge,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="p5g", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", type=Path)
        p.add_argument("--gen")
        p.add_argument("--delta", type=int)
        p.add_argument("--exact", action="store_true")
        p.add_argument("--budget-ms", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", type=Path)
        p.add_argument("--json", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    warnings.simplefilter("ignore", DeltaOverrideWarning)
    try:
        cfg = RunConfig(**vars(args))
        return COMMANDS[cfg.command](cfg)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"p5g {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
