"""The ten acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed in the terminal summary) before
asserting, so a failing criterion still reports what it measured.
"""

import json
import os
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

from p5g.cli import main
from p5g.coloring import ExtensionFailed, exact_chi2, extend_light, validate_coloring
from p5g.corpus import SplitMix64, gen_cycle, gen_dodecahedron, gen_girth5_random, gen_spider, generate
from p5g.discharge import apply_rules, initial_charges, r7_share, settle, vertex
from p5g.graph import girth, trace_faces, validate_planar_embedding
from p5g.structure import check_reducible, poor_vertices, profile, weak_neighbors

from helpers import (
    ACCEPTANCE,
    REDUCIBLE_FIXTURES,
    brute_chi2,
    random_graph,
    random_partial_coloring,
    seeded_corpus,
)


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    assert ok, detail


def test_criterion_01_exact_cycles():
    expected = {5: 5, 6: 3, 7: 4, 9: 3}
    rows, ok = [], True
    for n, k in expected.items():
        g = gen_cycle(n)
        start = time.perf_counter()
        got, coloring = exact_chi2(g)
        elapsed = time.perf_counter() - start
        oracle = brute_chi2(g)
        good = got == oracle == k and validate_coloring(g, coloring).valid and elapsed < 1
        ok &= good
        rows.append(f"C{n}={got}/{oracle} {elapsed * 1000:.1f}ms")
    record(1, ok, "exact chi2 on cycles vs brute force: " + ", ".join(rows))


def test_criterion_02_random_oracle():
    rng = SplitMix64(2024)
    start = time.perf_counter()
    mismatches = []
    for i in range(100):
        n = 2 + rng.below(11)
        g = random_graph(n, 10 + rng.below(60), seed=rng.next_u64())
        got = exact_chi2(g)[0]
        if got != brute_chi2(g):
            mismatches.append(i)
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    record(2, ok, f"100 random graphs n<=12, mismatches={len(mismatches)}, {elapsed:.2f}s (limit 60s)")


def test_criterion_03_charge_formulas():
    spider = gen_spider(3, 2)
    c = initial_charges(spider, trace_faces(spider))
    dodeca = gen_dodecahedron()
    d = initial_charges(dodeca, trace_faces(dodeca))
    checks = {
        "deg2=-2": c[vertex(1)] == Fraction(-2),
        "deg3=-1/2": c[vertex(0)] == Fraction(-1, 2),
        "5-face=0": set(d.face_charge.values()) == {Fraction(0)},
        "dodecahedron total=-10": d.total() == Fraction(-10),
    }
    record(3, all(checks.values()), "initial charges: " + ", ".join(f"{k}:{v}" for k, v in checks.items()))


def test_criterion_04_r7_shares():
    checks = {
        20: r7_share(20)[0] == Fraction(5, 4),
        22: r7_share(22) == (Fraction(14, 11), Fraction(3, 11)),
        11: r7_share(11) == (Fraction(23, 22), Fraction(1, 22)),
        10: r7_share(10) == (Fraction(1), Fraction(0)),
    }
    record(4, all(checks.values()), "r7_share exact values at d=20,22,11,10: " + str(list(checks.values())))


def test_criterion_05_conservation():
    corpus = seeded_corpus(200) + [("dodecahedron", gen_dodecahedron())]
    start = time.perf_counter()
    broken = []
    for spec, g in corpus:
        faces = trace_faces(g)
        initial = initial_charges(g, faces)
        final = settle(initial, apply_rules(g, faces, profile(g)))
        if not initial.total() == final.total() == -10:
            broken.append(spec)
    elapsed = time.perf_counter() - start
    ok = not broken and elapsed < 10
    detail = f"{len(corpus)} corpus graphs, conservation broken on {len(broken)}, {elapsed:.2f}s (limit 10s)"
    record(5, ok, detail)


def test_criterion_06_reducible_fixtures():
    # Literal reading: each fixture yields its target finding and nothing else.
    # Four of the configurations force further findings (see test_structure for
    # the full expected lists), so this criterion is reported as measured.
    verdicts = []
    for name, build in sorted(REDUCIBLE_FIXTURES.items()):
        g, delta, _ = build()
        rules = [f.rule for f in check_reducible(g, delta)]
        extra = Counter(rules)
        extra[name] -= 1
        extra = +extra
        alone = rules.count(name) == 1 and not extra
        extras = "+".join(f"{r}x{c}" for r, c in sorted(extra.items()))
        verdicts.append(f"{name}:" + ("alone" if alone else "+" + extras))
    ok = all(v.endswith(":alone") for v in verdicts)
    record(6, ok, "six fixtures, target finding alone: " + ", ".join(verdicts))


def test_criterion_07_extension():
    rng = SplitMix64(7)
    start = time.perf_counter()
    successes = failures = skipped = 0
    seed = 0
    while successes + failures < 500:
        seed += 1
        g = gen_girth5_random(5 + rng.below(6), 3 + rng.below(26), seed)
        delta = g.max_degree if seed % 2 else max(g.max_degree, 22)
        prof = profile(g, delta)
        candidates = [v for v in g.vertices() if not prof[v].heavy]
        partial = random_partial_coloring(g, delta + 4, rng)
        if not candidates or partial is None:
            skipped += 1
            continue
        v = rng.choice(candidates)
        del partial.assignment[v]
        try:
            out = extend_light(g, partial, v, prof=prof)
        except ExtensionFailed:
            failures += 1
            continue
        if validate_coloring(g, out).valid and len(out) == g.n:
            successes += 1
        else:
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 30
    record(
        7,
        ok,
        f"extend_light on 500 instances: {successes} ok, {failures} failed "
        f"({skipped} seeds without a valid random partial coloring), {elapsed:.2f}s (limit 30s)",
    )


def _desk_manifest() -> list[str]:
    specs = [f"spider delta={d} leg=1" for d in range(22, 31)]
    specs += [f"spider delta={d} leg=2" for d in range(22, 30)]
    seed = 0
    while len(specs) < 60:
        seed += 1
        spec = f"grafted n={5 + seed % 3} delta={22 + seed % 9} seed={seed}"
        g = generate(spec)
        if g.n <= 60 and 22 <= g.max_degree <= 30:
            specs.append(spec)
    return specs


def test_criterion_08_desk_check(tmp_path, capsys):
    specs = _desk_manifest()
    graphs = [generate(s) for s in specs]
    shape_ok = all(
        g.n <= 60 and 22 <= g.max_degree <= 30 and girth(g) >= 5 and validate_planar_embedding(g)
        for g in graphs
    )
    manifest = tmp_path / "desk.txt"
    manifest.write_text("\n".join(specs) + "\n")
    start = time.perf_counter()
    code = main(["verify", "--input", str(manifest), "--json"])
    elapsed = time.perf_counter() - start
    rows = json.loads(capsys.readouterr().out)
    exact = sum(r["method"] == "exact" for r in rows)
    passed = sum(r["verdict"] == "pass" for r in rows)
    ok = shape_ok and code == 0 and passed == len(rows) >= 50 and elapsed < 300
    record(
        8,
        ok,
        f"verify over {len(rows)} planar girth>=5 graphs with 22<=Δ<=30, n<=60: exit {code}, "
        f"{passed} pass, {exact} exact, {elapsed:.2f}s (limit 300s)",
    )


def test_criterion_09_structural_invariants():
    corpus = seeded_corpus(200, first_seed=900) + [("dodecahedron", gen_dodecahedron())]
    bad = []
    for spec, g in corpus:
        for delta in (g.max_degree, max(g.max_degree, 22)):
            prof = profile(g, delta)
            if any(r.light and r.heavy or r.n2_3 > r.n_light for r in prof.vertices):
                bad.append((spec, "light/heavy"))
        for v in g.vertices():
            if any((v, m) not in weak_neighbors(g, w) for w, m in weak_neighbors(g, v)):
                bad.append((spec, "weak"))
        faces = trace_faces(g)
        if any(len(p) > faces.lengths[f] // 2 for f, p in poor_vertices(g, faces).items()):
            bad.append((spec, "poor cap"))
    record(9, not bad, f"{len(corpus)} corpus graphs, invariant breaches: {len(bad)}")


def _ledger_bytes(spec: str, out_dir, hash_seed: str) -> bytes:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    subprocess.run(
        [sys.executable, "-m", "p5g", "discharge", "--gen", spec, "--out", str(out_dir)],
        env=env,
        capture_output=True,
        check=False,
    )
    (target,) = out_dir.iterdir()
    return (target / "ledger.json").read_bytes()


def test_criterion_10_determinism(tmp_path):
    specs = ["grafted n=9 delta=25 seed=11", "subdivided-triangulation n=12 seed=3", "dodecahedron"]
    same = []
    for i, spec in enumerate(specs):
        a = _ledger_bytes(spec, tmp_path / f"{i}a", "1")
        b = _ledger_bytes(spec, tmp_path / f"{i}b", "2")
        same.append(a == b and len(a) > 0)
    detail = f"ledger.json byte-identical across two runs (different hash seeds) for {sum(same)}/{len(specs)} specs"
    record(10, all(same), detail)
