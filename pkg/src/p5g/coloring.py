"""Distance-2 colorings: checking, heuristics, an exact solver and light-vertex extension."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .graph import RotationGraph, square
from .structure import StructuralProfile, profile

__all__ = [
    "Coloring",
    "ColoringCheck",
    "BudgetExceeded",
    "PreconditionViolated",
    "ExtensionFailed",
    "validate_coloring",
    "greedy_square",
    "dsatur",
    "square_clique",
    "exact_chi2",
    "extend_light",
]


@dataclass
class Coloring:
    """Partial map from vertex to a color in ``range(k)``."""

    assignment: dict[int, int] = field(default_factory=dict)
    k: int = 0

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def __contains__(self, v: int) -> bool:
        return v in self.assignment

    def __len__(self) -> int:
        return len(self.assignment)

    def copy(self) -> Coloring:
        return Coloring(dict(self.assignment), self.k)

    def to_text(self) -> str:
        lines = [f"k {self.k}"]
        lines += [f"{v} {c}" for v, c in sorted(self.assignment.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Coloring:
        k = None
        assignment = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            if line[0] == "k" and len(line) == 2 and k is None:
                k = int(line[1])
            elif len(line) == 2:
                assignment[int(line[0])] = int(line[1])
            else:
                raise ValueError(f"line {lineno}: cannot parse {raw!r}")
        if k is None:
            raise ValueError("missing 'k <int>' header")
        return cls(assignment, k)


class ColoringCheck(NamedTuple):
    valid: bool
    witness: tuple[int, int] | None = None


class BudgetExceeded(Exception):
    """Exact search ran out of time.  Carries the best bounds found."""

    def __init__(self, lower: int, upper: int, best: Coloring):
        super().__init__(f"time budget exhausted with {lower} <= chi2 <= {upper}")
        self.lower = lower
        self.upper = upper
        self.best = best


class PreconditionViolated(ValueError):
    pass


class ExtensionFailed(RuntimeError):
    pass


def validate_coloring(g: RotationGraph, c: Coloring) -> ColoringCheck:
    """Check the distance-2 constraint on every pair of colored vertices.

    The witness is the lexicographically first conflicting pair ``(u, v)``
    with ``u < v``; a color outside ``range(k)`` is reported as ``(v, v)``.
    """
    colors = c.assignment
    for v in sorted(colors):
        if not 0 <= colors[v] < c.k:
            return ColoringCheck(False, (v, v))
    sq = square(g)
    for u in sorted(colors):
        cu = colors[u]
        for v in sorted(sq[u]):
            if v > u and colors.get(v) == cu:
                return ColoringCheck(False, (u, v))
    return ColoringCheck(True)


def _least_free(used: set[int]) -> int:
    c = 0
    while c in used:
        c += 1
    return c


def greedy_square(g: RotationGraph, order: Sequence[int] | None = None) -> Coloring:
    """Color vertices in ``order`` with the least color unused within distance 2."""
    if order is None:
        order = range(g.n)
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    sq = square(g)
    colors: dict[int, int] = {}
    for v in order:
        colors[v] = _least_free({colors[u] for u in sq[v] if u in colors})
    return Coloring(colors, max(colors.values()) + 1)


def dsatur(g: RotationGraph) -> Coloring:
    """Saturation-degree greedy on the square.

    Ties go to the larger square degree, then the smaller vertex id.
    """
    sq = square(g)
    colors: dict[int, int] = {}
    seen: list[set[int]] = [set() for _ in range(g.n)]
    uncolored = set(range(g.n))
    while uncolored:
        v = max(uncolored, key=lambda u: (len(seen[u]), len(sq[u]), -u))
        c = _least_free(seen[v])
        colors[v] = c
        uncolored.discard(v)
        for u in sq[v]:
            seen[u].add(c)
    return Coloring(colors, max(colors.values()) + 1)


def square_clique(g: RotationGraph, sq: Sequence[frozenset[int]] | None = None) -> list[int]:
    """Greedy clique in the square, seeded by every closed neighbourhood.

    The closed neighbourhood of any vertex is a clique in the square, so the
    result has at least ``max_degree + 1`` vertices.
    """
    if sq is None:
        sq = square(g)
    best: list[int] = []
    for v in g.vertices():
        clique = [v, *g.rotation[v]]
        cand = set(sq[v])
        for u in clique[1:]:
            cand &= sq[u]
        cand -= set(clique)
        while cand:
            u = max(cand, key=lambda w: (len(sq[w] & cand), -w))
            clique.append(u)
            cand &= sq[u]
        if len(clique) > len(best):
            best = sorted(clique)
    return best


class _Search:
    """Backtracking k-colorability test on the square with DSATUR branching."""

    def __init__(self, sq, k: int, fixed: Sequence[int], deadline: float | None):
        self.sq = [sorted(s) for s in sq]
        self.n = len(sq)
        self.k = k
        self.deadline = deadline
        self.nodes = 0
        self.color = [-1] * self.n
        # blocked[v][c] = number of colored square-neighbours of v holding c
        self.blocked = [[0] * k for _ in range(self.n)]
        self.sat = [0] * self.n
        self.max_used = -1
        for c, v in enumerate(fixed):
            self._assign(v, c)

    def _assign(self, v: int, c: int) -> None:
        self.color[v] = c
        for u in self.sq[v]:
            row = self.blocked[u]
            if row[c] == 0:
                self.sat[u] += 1
            row[c] += 1

    def _unassign(self, v: int) -> None:
        c = self.color[v]
        self.color[v] = -1
        for u in self.sq[v]:
            row = self.blocked[u]
            row[c] -= 1
            if row[c] == 0:
                self.sat[u] -= 1

    def _pick(self) -> int:
        best, key = -1, None
        for v in range(self.n):
            if self.color[v] < 0:
                cand = (self.sat[v], len(self.sq[v]), -v)
                if key is None or cand > key:
                    best, key = v, cand
        return best

    def run(self) -> list[int] | None:
        self.max_used = max(self.color, default=-1)
        return self.color[:] if self._solve() else None

    def _solve(self) -> bool:
        self.nodes += 1
        if self.deadline is not None and self.nodes % 512 == 0 and time.monotonic() > self.deadline:
            raise TimeoutError
        v = self._pick()
        if v < 0:
            return True
        if self.sat[v] >= self.k:
            return False
        top = min(self.k - 1, self.max_used + 1)
        row = self.blocked[v]
        for c in range(top + 1):
            if row[c]:
                continue
            prev = self.max_used
            self.max_used = max(prev, c)
            self._assign(v, c)
            if self._solve():
                return True
            self._unassign(v)
            self.max_used = prev
        return False


def exact_chi2(g: RotationGraph, budget: float | None = None) -> tuple[int, Coloring]:
    """Exact 2-distance chromatic number with a witness coloring.

    Searches ``k = lower, lower + 1, ...`` where the lower bound is a greedy
    square clique and the upper bound comes from :func:`dsatur`.  ``budget`` is
    in seconds; on timeout :class:`BudgetExceeded` carries the bounds.
    Practical up to roughly 60 vertices on hard instances.
    """
    deadline = None if budget is None else time.monotonic() + budget
    sq = square(g)
    best = dsatur(g)
    upper = best.k
    clique = square_clique(g, sq)
    lower = len(clique)
    for k in range(lower, upper):
        if deadline is not None and time.monotonic() >= deadline:
            raise BudgetExceeded(k, upper, best)
        try:
            found = _Search(sq, k, clique, deadline).run()
        except TimeoutError:
            raise BudgetExceeded(k, upper, best) from None
        if found is not None:
            return k, Coloring(dict(enumerate(found)), k)
    return upper, best


def extend_light(
    g: RotationGraph,
    partial: Coloring,
    v: int,
    delta: int | None = None,
    prof: StructuralProfile | None = None,
) -> Coloring:
    """Color the single uncolored vertex ``v`` of a ``(delta + 4)``-coloring.

    Decolors the light neighbours S of ``v``, colors ``v``, then recolors
    S minus R and finally R, where R holds the 2-neighbours of ``v`` that have
    a 3-neighbour.  Within each phase vertices go in ascending id order and
    always take the least available color.
    """
    if prof is None:
        prof = profile(g, delta)
    delta = prof.delta
    k = delta + 4
    if partial.k != k:
        raise PreconditionViolated(f"palette has {partial.k} colors, expected delta + 4 = {k}")
    missing = sorted(set(g.vertices()) - set(partial.assignment))
    if missing != [v]:
        raise PreconditionViolated(f"expected exactly {v} uncolored, found {missing}")
    if prof[v].heavy:
        raise PreconditionViolated(f"vertex {v} is heavy")
    if not validate_coloring(g, partial).valid:
        raise PreconditionViolated("partial coloring is not a valid distance-2 coloring")

    deg = g.degrees
    light_nbrs = sorted(u for u in g.rotation[v] if prof[u].light)
    r_set = [u for u in light_nbrs if deg[u] == 2 and any(deg[w] == 3 for w in g.rotation[u])]
    rest = [u for u in light_nbrs if u not in r_set]

    sq = square(g)
    colors = dict(partial.assignment)
    for u in light_nbrs:
        del colors[u]
    for u in (v, *rest, *r_set):
        c = _least_free({colors[w] for w in sq[u] if w in colors})
        if c >= k:
            raise ExtensionFailed(f"no free color for vertex {u} while extending at {v}")
        colors[u] = c
    return Coloring(colors, k)
