"""Exact charge accounting: initial charges, rules R1-R9, settlement and audit.

Every amount is a :class:`fractions.Fraction`; there are no tolerances.
Rules R1-R8 read the initial configuration only.  R9 reads each face's
balance after R8.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple

from .graph import FaceSet, RotationGraph, distances_from, is_connected, validate_planar_embedding
from .structure import (
    StructuralProfile,
    ViolationReport,
    check_reducible,
    poor_vertices,
    weak_neighbors,
)

__all__ = [
    "NotPlanarEmbedding",
    "DegreeTooSmall",
    "ProfileMismatch",
    "UnknownLedgerId",
    "ConservationBroken",
    "Node",
    "ChargeMap",
    "Transfer",
    "TransferLedger",
    "VertexAudit",
    "FaceAudit",
    "AuditReport",
    "LEDGER_HEADER",
    "initial_charges",
    "r7_share",
    "apply_rules",
    "settle",
    "audit",
    "case_of_degree",
    "rational",
]

QUARTER = Fraction(1, 4)
EIGHTH = Fraction(1, 8)
HALF = Fraction(1, 2)
ONE = Fraction(1)

LEDGER_HEADER = {
    "phases": "R1-R8 read the initial configuration; R9 reads face balances after R8",
    "r1_donors": "degree 3..9",
    "r8": "1/2 from each endpoint to each side of the edge; a bridge face is paid twice",
    "r9_zero_poor": "a positive face without f-poor vertices keeps its charge",
}


class NotPlanarEmbedding(ValueError):
    pass


class DegreeTooSmall(ValueError):
    pass


class ProfileMismatch(ValueError):
    pass


class UnknownLedgerId(KeyError):
    pass


class ConservationBroken(RuntimeError):
    pass


class Node(NamedTuple):
    kind: str  # "vertex" or "face"
    id: int

    def to_dict(self) -> dict:
        return {"kind": self.kind, "id": self.id}


def vertex(v: int) -> Node:
    return Node("vertex", v)


def face(f: int) -> Node:
    return Node("face", f)


def rational(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


@dataclass
class ChargeMap:
    vertex_charge: dict[int, Fraction]
    face_charge: dict[int, Fraction]

    def __getitem__(self, node: Node) -> Fraction:
        table = self.vertex_charge if node.kind == "vertex" else self.face_charge
        return table[node.id]

    def __contains__(self, node: Node) -> bool:
        table = self.vertex_charge if node.kind == "vertex" else self.face_charge
        return node.id in table

    def total(self) -> Fraction:
        return sum(self.vertex_charge.values(), Fraction(0)) + sum(
            self.face_charge.values(), Fraction(0)
        )

    def copy(self) -> ChargeMap:
        return ChargeMap(dict(self.vertex_charge), dict(self.face_charge))


@dataclass(frozen=True, order=True)
class Transfer:
    rule: str
    source: Node
    sink: Node
    amount: Fraction

    def __post_init__(self):
        if self.amount <= 0:
            raise ValueError(f"transfer amounts must be positive, got {self.amount}")

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "source": self.source.to_dict(),
            "sink": self.sink.to_dict(),
            "amount": rational(self.amount),
        }


def _rule_key(t: Transfer):
    return int(t.rule[1:]), t.source, t.sink, t.amount


@dataclass
class TransferLedger:
    entries: list[Transfer] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def by_rule(self, rule: str) -> list[Transfer]:
        return [t for t in self.entries if t.rule == rule]

    def to_dict(self) -> dict:
        return {
            "header": dict(LEDGER_HEADER, notes=list(self.notes)),
            "entries": [t.to_dict() for t in self.entries],
        }


def initial_charges(g: RotationGraph, faces: FaceSet) -> ChargeMap:
    """``3 d(v) / 2 - 5`` on vertices, ``l(f) - 5`` on faces; total is -10."""
    if not is_connected(g) or not validate_planar_embedding(g, faces):
        raise NotPlanarEmbedding("charges need a connected genus-0 embedding")
    charges = ChargeMap(
        {v: Fraction(3 * g.degree(v), 2) - 5 for v in g.vertices()},
        {f: Fraction(length - 5) for f, length in enumerate(faces.lengths)},
    )
    if charges.total() != -10:
        raise NotPlanarEmbedding(f"charge total is {charges.total()}, not -10")
    return charges


def r7_share(d: int) -> tuple[Fraction, Fraction]:
    """Per-neighbour share ``(3d - 10) / 2d`` of a 10+-vertex, and the part of
    it redirected past a 2-neighbour (``share - 1``, zero at ``d = 10``)."""
    if d < 10:
        raise DegreeTooSmall(f"R7 applies to degree >= 10, got {d}")
    share = Fraction(3 * d - 10, 2 * d)
    return share, max(share - 1, Fraction(0))


def apply_rules(g: RotationGraph, faces: FaceSet, prof: StructuralProfile) -> TransferLedger:
    """Emit one ledger entry per (rule, donor, recipient) instance."""
    if len(prof) != g.n or any(prof[v].degree != g.degree(v) for v in g.vertices()):
        raise ProfileMismatch("profile was computed on a different graph")
    deg = g.degrees
    nbrs = g.rotation
    entries: list[Transfer] = []
    notes: list[str] = []

    def give(rule: str, src: Node, dst: Node, amount: Fraction) -> None:
        entries.append(Transfer(rule, src, dst, amount))

    def count_at_least(v: int, d: int) -> int:
        return sum(1 for u in nbrs[v] if deg[u] >= d)

    for v in g.vertices():
        k = deg[v]
        rec = prof[v]

        # R1
        if k == 2:
            for u in nbrs[v]:
                if 3 <= deg[u] <= 9:
                    give("R1", vertex(u), vertex(v), ONE)
                elif deg[u] == 2:
                    notes.append(f"R1: 2-vertex {u} does not pay its 2-neighbour {v}")

        # R2
        if k == 3 and rec.n2 == 0 and rec.light:
            for u in nbrs[v]:
                if 3 <= deg[u] <= 8:
                    give("R2", vertex(u), vertex(v), QUARTER)

        # R3
        if rec.kd == (3, 1):
            for u in nbrs[v]:
                if 3 <= deg[u] <= 5:
                    give("R3", vertex(u), vertex(v), QUARTER)
                elif 6 <= deg[u] <= 8:
                    give("R3", vertex(u), vertex(v), HALF)

        # R4 / R5: v gives to weak neighbours that are 5(4)-vertices
        targets = sorted({w for w, _ in weak_neighbors(g, v) if prof[w].kd == (5, 4)})
        if targets and 3 <= k <= 9:
            big = count_at_least(v, 10)
            if big >= 2:
                for u in targets:
                    give("R4", vertex(v), vertex(u), QUARTER)
            elif (
                8 <= k <= 9
                or (5 <= k <= 7 and count_at_least(v, 3) >= 2)
                or (k == 4 and rec.n2 == 1)
                or (k == 4 and rec.n2 == 2 and count_at_least(v, 9) >= 2)
            ):
                for u in targets:
                    give("R5", vertex(v), vertex(u), EIGHTH)

        # R6
        if k == 9:
            for u in nbrs[v]:
                if 3 <= deg[u] <= 8:
                    give("R6", vertex(v), vertex(u), HALF)

        # R7
        if k >= 10:
            share, redirect = r7_share(k)
            for u in nbrs[v]:
                if deg[u] == 2 and k >= 11:
                    (w,) = [x for x in nbrs[u] if x != v]
                    give("R7", vertex(v), vertex(u), ONE)
                    give("R7", vertex(v), vertex(w), redirect)
                    if deg[w] == 2:
                        notes.append(f"R7: redirect from {v} through {u} lands on 2-vertex {w}")
                else:
                    give("R7", vertex(v), vertex(u), share)

    # R8
    for u, v in g.edges():
        if deg[u] >= 10 and deg[v] >= 10:
            for f in faces.faces_of_edge(u, v):
                give("R8", vertex(u), face(f), HALF)
                give("R8", vertex(v), face(f), HALF)

    # R9 on post-R8 face balances
    balance = {f: Fraction(length - 5) for f, length in enumerate(faces.lengths)}
    for t in entries:
        if t.rule == "R8":
            balance[t.sink.id] += t.amount
    poor = poor_vertices(g, faces)
    for f in sorted(balance):
        if balance[f] > 0 and poor[f]:
            part = balance[f] / len(poor[f])
            for y in sorted(poor[f]):
                give("R9", face(f), vertex(y), part)

    entries.sort(key=_rule_key)
    return TransferLedger(entries, notes)


def settle(initial: ChargeMap, ledger: Iterable[Transfer] | TransferLedger) -> ChargeMap:
    """Apply every transfer; the total must be unchanged."""
    final = initial.copy()
    for t in ledger:
        for node in (t.source, t.sink):
            if node not in final:
                raise UnknownLedgerId(node)
        table_src = final.vertex_charge if t.source.kind == "vertex" else final.face_charge
        table_dst = final.vertex_charge if t.sink.kind == "vertex" else final.face_charge
        table_src[t.source.id] -= t.amount
        table_dst[t.sink.id] += t.amount
    if final.total() != initial.total():
        raise ConservationBroken(f"{initial.total()} became {final.total()}")
    return final


def case_of_degree(k: int) -> str:
    """Degree class of the per-vertex check: k=2 is case 1, ..., k>=10 is case 9."""
    if k < 2:
        return "outside"
    return str(min(k, 10) - 1)


@dataclass(frozen=True)
class VertexAudit:
    vertex: int
    degree: int
    case: str
    final: Fraction
    passed: bool
    findings: tuple = ()

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "degree": self.degree,
            "case": self.case,
            "final": rational(self.final),
            "pass": self.passed,
            "findings": [f.to_dict() for f in self.findings],
        }


@dataclass(frozen=True)
class FaceAudit:
    face: int
    length: int
    final: Fraction
    passed: bool

    def to_dict(self) -> dict:
        return {"face": self.face, "length": self.length, "final": rational(self.final), "pass": self.passed}


@dataclass
class AuditReport:
    cases: list[VertexAudit]
    faces: list[FaceAudit]
    total_initial: Fraction
    total_final: Fraction

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.cases) and all(f.passed for f in self.faces)

    def failures(self) -> list[VertexAudit | FaceAudit]:
        return [c for c in self.cases if not c.passed] + [f for f in self.faces if not f.passed]

    def to_dict(self) -> dict:
        return {
            "cases": [c.to_dict() for c in self.cases],
            "faces": [f.to_dict() for f in self.faces],
            "total_initial": rational(self.total_initial),
            "total_final": rational(self.total_final),
        }


def audit(
    g: RotationGraph,
    faces: FaceSet,
    prof: StructuralProfile,
    final: ChargeMap,
    report: ViolationReport | None = None,
    initial: ChargeMap | None = None,
) -> AuditReport:
    """Check ``final >= 0`` everywhere.  Reports, never raises.

    Failing vertices carry the findings of ``report`` (computed from ``prof``
    when omitted) whose witnesses lie within distance 2.  Degree-0/1 vertices
    are marked ``outside`` and only pass when nonnegative.
    """
    if initial is None:
        initial = initial_charges(g, faces)
    if report is None:
        report = check_reducible(g, prof=prof)
    cases = []
    for v in g.vertices():
        charge = final.vertex_charge[v]
        passed = charge >= 0
        linked: tuple = ()
        if not passed:
            near = set(distances_from(g, v, limit=2))
            linked = tuple(report.touching(near))
        cases.append(VertexAudit(v, g.degree(v), case_of_degree(g.degree(v)), charge, passed, linked))
    face_rows = [
        FaceAudit(f, length, final.face_charge[f], final.face_charge[f] >= 0)
        for f, length in enumerate(faces.lengths)
    ]
    return AuditReport(cases, face_rows, initial.total(), final.total())
