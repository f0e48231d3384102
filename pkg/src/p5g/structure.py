"""Degree statistics, light/heavy classification and forbidden-configuration detectors.

All classifications are relative to a ``delta`` parameter that defaults to the
maximum degree of the graph and may be raised (never lowered) to audit the
large-degree regime on small graphs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .graph import FaceSet, RotationGraph

__all__ = [
    "DeltaTooSmall",
    "DeltaOverrideWarning",
    "CapViolation",
    "VertexRecord",
    "StructuralProfile",
    "Finding",
    "ViolationReport",
    "RULE_IDS",
    "profile",
    "weak_neighbors",
    "poor_vertices",
    "refined_poor_cap_notes",
    "check_reducible",
]

RULE_IDS = (
    "Cor2a", "Cor2b", "Cor2c",
    "Lem1a", "Lem1b", "Lem1c",
    "Lem2a", "Lem2b", "Lem2c",
    "Lem3", "Prop2",
)


class DeltaTooSmall(ValueError):
    pass


class DeltaOverrideWarning(UserWarning):
    pass


class CapViolation(RuntimeError):
    """A face has more poor vertices than half its length.  Always a bug."""


@dataclass(frozen=True)
class VertexRecord:
    degree: int
    neighbor_degree_sum: int  # D(v)
    n2: int
    n3: int
    n2_3: int  # 2-neighbours that have a 3-neighbour
    light: bool
    n_light: int
    heavy: bool

    @property
    def kd(self) -> tuple[int, int]:
        """The ``(k, d)`` of a k(d)-vertex: degree and number of 2-neighbours."""
        return self.degree, self.n2

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "D": self.neighbor_degree_sum,
            "n2": self.n2,
            "n3": self.n3,
            "n2_3": self.n2_3,
            "light": self.light,
            "n_light": self.n_light,
            "heavy": self.heavy,
            "kd": list(self.kd),
        }


@dataclass(frozen=True)
class StructuralProfile:
    delta: int
    vertices: tuple[VertexRecord, ...]

    def __getitem__(self, v: int) -> VertexRecord:
        return self.vertices[v]

    def __len__(self) -> int:
        return len(self.vertices)

    def light_set(self) -> set[int]:
        return {v for v, r in enumerate(self.vertices) if r.light}

    def heavy_set(self) -> set[int]:
        return {v for v, r in enumerate(self.vertices) if r.heavy}

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "vertices": [dict(id=v, **r.to_dict()) for v, r in enumerate(self.vertices)],
        }


def profile(g: RotationGraph, delta: int | None = None) -> StructuralProfile:
    """Compute per-vertex degree statistics and light/heavy flags.

    Light depends only on degrees, so the order degrees, D, n_2^3, light,
    n^l, heavy needs no fixpoint iteration.
    """
    max_deg = g.max_degree
    if delta is None:
        delta = max_deg
    if delta < max_deg:
        raise DeltaTooSmall(f"delta={delta} is below the maximum degree {max_deg}")
    if delta > max_deg:
        warnings.warn(
            f"delta={delta} overrides the maximum degree {max_deg}",
            DeltaOverrideWarning,
            stacklevel=2,
        )
    deg = g.degrees
    big_d = [sum(deg[u] for u in g.rotation[v]) for v in g.vertices()]
    has_3_nbr = [any(deg[u] == 3 for u in g.rotation[v]) for v in g.vertices()]
    n2_3 = [
        sum(1 for u in g.rotation[v] if deg[u] == 2 and has_3_nbr[u])
        for v in g.vertices()
    ]
    light = [big_d[v] < delta + 4 + n2_3[v] for v in g.vertices()]
    n_light = [sum(1 for u in g.rotation[v] if light[u]) for v in g.vertices()]
    heavy = [big_d[v] >= delta + 4 + n_light[v] for v in g.vertices()]

    records = tuple(
        VertexRecord(
            degree=deg[v],
            neighbor_degree_sum=big_d[v],
            n2=sum(1 for u in g.rotation[v] if deg[u] == 2),
            n3=sum(1 for u in g.rotation[v] if deg[u] == 3),
            n2_3=n2_3[v],
            light=light[v],
            n_light=n_light[v],
            heavy=heavy[v],
        )
        for v in g.vertices()
    )
    return StructuralProfile(delta, records)


def weak_neighbors(g: RotationGraph, v: int) -> list[tuple[int, int]]:
    """``(w, m)`` for every path ``v - m - w`` whose middle ``m`` has degree 2."""
    out = []
    for m in g.rotation[v]:
        if g.degree(m) == 2:
            a, b = g.rotation[m]
            out.append((b if a == v else a, m))
    return sorted(out)


def _poor_occurrences(g: RotationGraph, faces: FaceSet, fid: int) -> list[int]:
    walk = faces.walk(fid)
    size = len(walk)
    deg = g.degrees
    hits = []
    for i, y in enumerate(walk):
        if 5 <= deg[y] <= 6 and deg[walk[i - 1]] == 2 and deg[walk[(i + 1) % size]] == 2:
            hits.append(y)
    return hits


def poor_vertices(g: RotationGraph, faces: FaceSet) -> dict[int, frozenset[int]]:
    """Map each face to its f-poor vertices.

    ``y`` is f-poor when ``x y z`` appears consecutively on the boundary walk
    of ``f`` with ``5 <= d(y) <= 6`` and ``d(x) = d(z) = 2``.
    """
    out = {}
    for fid, length in enumerate(faces.lengths):
        poor = frozenset(_poor_occurrences(g, faces, fid))
        if len(poor) > length // 2:
            raise CapViolation(
                f"face {fid} of length {length} has {len(poor)} poor vertices"
            )
        out[fid] = poor
    return out


def refined_poor_cap_notes(g: RotationGraph, faces: FaceSet) -> list[dict]:
    """Faces exceeding the sharper cap floor((l(f) - 3) / 2).

    The sharper cap applies when some f-poor vertex is weak adjacent to two
    7+-vertices that lie on ``f``.  Informational only.
    """
    notes = []
    deg = g.degrees
    for fid, length in enumerate(faces.lengths):
        on_face = set(faces.walk(fid))
        poor = set(_poor_occurrences(g, faces, fid))
        if not poor:
            continue
        triggered = [
            y for y in sorted(poor)
            if len({w for w, _ in weak_neighbors(g, y) if deg[w] >= 7 and w in on_face}) >= 2
        ]
        cap = (length - 3) // 2
        if triggered and len(poor) > cap:
            notes.append({"face": fid, "poor": len(poor), "refined_cap": cap, "trigger": triggered})
    return notes


@dataclass(frozen=True, order=True)
class Finding:
    witnesses: tuple[int, ...]
    rule: str
    message: str = field(compare=False)

    def to_dict(self) -> dict:
        return {"rule": self.rule, "witnesses": list(self.witnesses), "message": self.message}


@dataclass
class ViolationReport:
    findings: list[Finding] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.findings)

    def __iter__(self):
        return iter(self.findings)

    def rules(self) -> list[str]:
        return [f.rule for f in self.findings]

    def by_rule(self, rule: str) -> list[Finding]:
        return [f for f in self.findings if f.rule == rule]

    def touching(self, vertices: set[int]) -> list[Finding]:
        return [f for f in self.findings if vertices.intersection(f.witnesses)]

    def to_list(self) -> list[dict]:
        return [f.to_dict() for f in self.findings]


def check_reducible(
    g: RotationGraph, delta: int | None = None, prof: StructuralProfile | None = None
) -> ViolationReport:
    """Report every occurrence of a configuration that a minimal counterexample cannot contain.

    An empty report does not make ``g`` a minimal counterexample; it only means
    none of the forbidden configurations occur.  Degree-1 vertices never appear
    in a witness.  Findings are sorted by witness tuple, then rule id.
    """
    if prof is None:
        prof = profile(g, delta)
    delta = prof.delta
    deg = g.degrees
    nbrs = g.rotation
    out: list[Finding] = []

    def add(rule: str, witnesses, message: str) -> None:
        out.append(Finding(tuple(witnesses), rule, message))

    def twos(v: int) -> list[int]:
        return sorted(u for u in nbrs[v] if deg[u] == 2)

    for u, v in g.edges():
        if deg[u] == 2 and deg[v] == 2:
            add("Cor2a", (u, v), f"adjacent 2-vertices {u} and {v}")
        if prof[u].kd == (3, 1) and prof[v].kd == (3, 1):
            add("Lem1c", (u, v), f"adjacent 3(1)-vertices {u} and {v}")

    for v in g.vertices():
        rec = prof[v]
        k = rec.degree
        if k == 1:
            continue

        if rec.light:
            for u in sorted(nbrs[v]):
                if deg[u] >= 2 and not prof[u].heavy:
                    add("Prop2", (v, u), f"light vertex {v} has non-heavy neighbour {u}")

        if k == 3:
            t = twos(v)
            if len(t) >= 2:
                add("Cor2b", (v, *t), f"3-vertex {v} has {len(t)} 2-neighbours")
            if t and not rec.heavy:
                add("Lem1a", (v, *t), f"3-vertex {v} has a 2-neighbour but is not heavy")
            if rec.n2 == 0 and rec.light:
                for x in sorted(nbrs[v]):
                    if deg[x] == 3 and not any(deg[y] >= 12 for y in nbrs[x]):
                        add("Lem1b", (v, x),
                            f"light 3(0)-vertex {v} has 3-neighbour {x} without a 12+-neighbour")

        elif k == 4:
            t = twos(v)
            if len(t) == 4:
                add("Cor2c", (v, *t), f"4(4)-vertex {v}")
            if t and not rec.heavy:
                add("Lem2a", (v, *t), f"4-vertex {v} has a 2-neighbour but is not heavy")
            if len(t) == 2:
                threes = sorted(u for u in nbrs[v] if prof[u].kd == (3, 1))
                if threes:
                    for x in (*t, *threes):
                        if not prof[x].heavy:
                            add("Lem2b", (v, x),
                                f"4-vertex {v} with two 2-neighbours and a 3(1)-neighbour: {x} is not heavy")
                    if not any(deg[u] >= 20 for u in nbrs[v]):
                        add("Lem2b", (v,),
                            f"4-vertex {v} with two 2-neighbours and a 3(1)-neighbour lacks a 20+-neighbour")
            if len(t) == 3:
                for x in t:
                    if not prof[x].heavy:
                        add("Lem2c", (v, x),
                            f"4-vertex {v} with three 2-neighbours: {x} is not heavy")

        if 5 <= k <= 12 and rec.n2 == k - 1:
            (z,) = [u for u in nbrs[v] if deg[u] != 2]
            r = sum(1 for u in nbrs[v] if deg[u] == 2 and prof[u].light)
            bound = delta + 6 + r - 2 * k
            if deg[z] >= 3 and r >= 1 and deg[z] < bound:
                add("Lem3", (v, z),
                    f"{k}-vertex {v} with {r} light 2-neighbours needs a neighbour of degree "
                    f">= {bound}; its 3+-neighbour {z} has degree {deg[z]}")

    out.sort()
    notes = []
    leaves = [v for v in g.vertices() if deg[v] == 1]
    if leaves:
        notes.append(f"MinDegree: degree-1 vertices {leaves} are outside every configuration")
    return ViolationReport(out, notes)
