"""Independent oracles and hand-built fixtures shared by the test modules.

The oracles deliberately avoid the package's own square/face/coloring code:
distances come from networkx, faces from networkx's planar embedding, and
chromatic numbers from plain backtracking.
"""

from __future__ import annotations

import networkx as nx

from p5g.corpus import SplitMix64
from p5g.graph import RotationGraph, build_graph, from_edges


def to_nx(g: RotationGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def distance_pairs(g: RotationGraph) -> set[tuple[int, int]]:
    """Pairs ``u < v`` at distance 1 or 2, via networkx BFS."""
    lengths = dict(nx.all_pairs_shortest_path_length(to_nx(g), cutoff=2))
    return {(u, v) for u in lengths for v, d in lengths[u].items() if u < v and 1 <= d <= 2}


def brute_chi2(g: RotationGraph) -> int:
    """Smallest k admitting a distance-2 coloring, by plain backtracking.

    Tries k = max degree + 1 upward; vertices are colored in id order and the
    only pruning is the conflict test plus color-permutation symmetry.
    """
    conflicts: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in distance_pairs(g):
        conflicts[v].append(u)
    k = g.max_degree + 1
    while True:
        colors = [-1] * g.n

        def place(i: int, used: int) -> bool:
            # colors are interchangeable: vertex i may open at most one new color
            if i == g.n:
                return True
            for c in range(min(k, used + 1)):
                if all(colors[u] != c for u in conflicts[i]):
                    colors[i] = c
                    if place(i + 1, max(used, c + 1)):
                        return True
            colors[i] = -1
            return False

        if place(0, 0):
            return k
        k += 1


def nx_face_lengths(g: RotationGraph) -> list[int]:
    """Face lengths from networkx's PlanarEmbedding traversal of the same rotations."""
    emb = nx.PlanarEmbedding()
    emb.set_data({v: list(g.rotation[v]) for v in g.vertices()})
    seen: set[tuple[int, int]] = set()
    lengths = []
    for u, v in emb.edges():
        if (u, v) not in seen:
            face = emb.traverse_face(u, v, mark_half_edges=seen)
            # traverse_face lists vertices; a bridge walk revisits vertices
            lengths.append(len(face))
    return sorted(lengths)


def random_graph(n: int, p_num: int, seed: int) -> RotationGraph:
    """G(n, p) with p = p_num / 100, rotations in insertion order."""
    rng = SplitMix64(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.below(100) < p_num]
    return from_edges(edges, n)


class TreeBuilder:
    """Incremental tree construction for structural fixtures."""

    def __init__(self):
        self.edges: list[tuple[int, int]] = []
        self.n = 0

    def vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def join(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def child(self, parent: int) -> int:
        v = self.vertex()
        self.join(parent, v)
        return v

    def hub(self, parent: int, degree: int) -> int:
        """Child of ``parent`` with ``degree - 1`` leaves."""
        v = self.child(parent)
        for _ in range(degree - 1):
            self.child(v)
        return v

    def build(self) -> RotationGraph:
        return from_edges(self.edges, self.n)


# -- the six reducibility fixtures ------------------------------------------------
# Each returns (graph, delta, expected findings as (rule, witnesses)).
# Prop2 (light vertex next to a non-heavy one) and Lem1a/Lem2a are logical
# consequences of several configurations; those entailed findings are listed
# explicitly alongside the target.


def fixture_cor2a():
    g = build_graph({0: [1], 1: [0, 2], 2: [1, 3], 3: [2]})
    # D(1) = D(2) = 3 < 2 + 4: both light, neither heavy
    return g, 2, [("Cor2a", (1, 2)), ("Prop2", (1, 2)), ("Prop2", (2, 1))]


def fixture_cor2b():
    t = TreeBuilder()
    v = t.vertex()
    mids = []
    for _ in range(3):
        m = t.child(v)
        t.child(m)
        mids.append(m)
    # D(v) = 6 < 3 + 4 + 3 light; every m has D = 4 < 7 light; nobody heavy
    expected = [("Cor2b", (v, *mids)), ("Lem1a", (v, *mids))]
    expected += [("Prop2", (v, m)) for m in mids] + [("Prop2", (m, v)) for m in mids]
    return t.build(), 3, expected


def fixture_cor2c():
    t = TreeBuilder()
    v = t.vertex()
    mids = []
    for _ in range(4):
        m = t.child(v)
        t.child(m)
        mids.append(m)
    # D(v) = 8, not light, not heavy (8 < 8 + 4); each m light with D = 5
    expected = [("Cor2c", (v, *mids)), ("Lem2a", (v, *mids))]
    expected += [("Prop2", (m, v)) for m in mids]
    return t.build(), 4, expected


def fixture_lem1b():
    # delta = 8, threshold 12.  v is a light 3(0)-vertex (D = 3 + 4 + 4 = 11);
    # its 3-neighbour x has two 8-neighbours, is heavy (D = 19 >= 12 + 3) and
    # has no 12+-neighbour.  The 4-neighbours a, b are heavy (D = 27).
    t = TreeBuilder()
    v = t.vertex()
    x = t.child(v)
    a = t.child(v)
    b = t.child(v)
    t.hub(x, 8)
    t.hub(x, 8)
    for w in (a, b):
        for _ in range(3):
            t.hub(w, 8)
    return t.build(), 8, [("Lem1b", (v, x))]


def fixture_lem1c():
    # delta = 5, threshold 9.  u, w are adjacent 3(1)-vertices, each heavy with
    # D = 3 + 2 + 5 = 10 >= 9 + 1.  Their 2-neighbours are light and sit
    # between heavy vertices; all other internal vertices are neither light
    # nor next to a light vertex.
    t = TreeBuilder()
    u = t.vertex()
    w = t.child(u)
    for c in (u, w):
        x = t.child(c)
        y = t.child(x)
        for _ in range(4):
            t.hub(y, 5)
        big = t.child(c)
        for _ in range(4):
            t.hub(big, 5)
    return t.build(), 5, [("Lem1c", (u, w))]


def fixture_lem3():
    # delta = 8, threshold 12.  v is a 5-vertex with four 2-neighbours of which
    # exactly one (x1, D = 5 + 6 = 11) is light; its 3+-neighbour z has degree
    # 4 < 8 + 6 + 1 - 10 = 5.  v itself cannot be heavy (D = 12 < 12 + 1).
    t = TreeBuilder()
    v = t.vertex()
    xs = [t.child(v) for _ in range(4)]
    z = t.child(v)
    y1 = t.child(xs[0])
    for _ in range(5):
        t.hub(y1, 8)
    for x in xs[1:]:
        t.hub(x, 8)
    for _ in range(3):
        t.hub(z, 8)
    return t.build(), 8, [("Lem3", (v, z)), ("Prop2", (xs[0], v))]


REDUCIBLE_FIXTURES = {
    "Cor2a": fixture_cor2a,
    "Cor2b": fixture_cor2b,
    "Cor2c": fixture_cor2c,
    "Lem1b": fixture_lem1b,
    "Lem1c": fixture_lem1c,
    "Lem3": fixture_lem3,
}


def two_vertex_between_big(big: int = 22):
    """5-cycle a-x-b-p-q where a and b carry pendant 2-paths up to degree ``big``.

    Returns ``(graph, x)``; ``x`` is the 2-vertex between the two big vertices.
    """
    t = TreeBuilder()
    a, x, b, p, q = (t.vertex() for _ in range(5))
    for s, e in ((a, x), (x, b), (b, p), (p, q), (q, a)):
        t.join(s, e)
    for c in (a, b):
        for _ in range(big - 2):
            m = t.child(c)
            t.child(m)
    return t.build(), x


def random_partial_coloring(g: RotationGraph, k: int, rng: SplitMix64):
    """Valid k-coloring by greedy over a shuffled order with random free colors.

    Returns ``None`` when some vertex runs out of colors.
    """
    from p5g.coloring import Coloring
    from p5g.graph import square

    sq = square(g)
    order = list(range(g.n))
    rng.shuffle(order)
    colors: dict[int, int] = {}
    for v in order:
        free = sorted(set(range(k)) - {colors[u] for u in sq[v] if u in colors})
        if not free:
            return None
        colors[v] = rng.choice(free)
    return Coloring(colors, k)


def seeded_corpus(count: int, first_seed: int = 0) -> list[tuple[str, RotationGraph]]:
    """``count`` small generated graphs with varied size and target degree."""
    from p5g.corpus import generate

    rng = SplitMix64(first_seed)
    out = []
    for i in range(count):
        n = 5 + rng.below(10)
        if i % 4 == 3:
            spec = f"subdivided-triangulation n={n} seed={first_seed + i}"
        else:
            spec = f"grafted n={n} delta={3 + rng.below(28)} seed={first_seed + i}"
        out.append((spec, generate(spec)))
    return out


# Acceptance results collected during the run; conftest prints them at the end.
ACCEPTANCE: dict[int, tuple[bool, str]] = {}
