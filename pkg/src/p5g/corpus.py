"""Graph generators, the ``p5g v1`` text format and result persistence.

Random families use :class:`SplitMix64` so that a ``(spec, seed)`` pair
reproduces the same graph byte for byte on any platform.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .graph import RotationGraph, build_graph

__all__ = [
    "BadParameter",
    "ParseError",
    "SplitMix64",
    "GenSpec",
    "FAMILIES",
    "gen_cycle",
    "gen_spider",
    "gen_dodecahedron",
    "gen_triangulation",
    "subdivide",
    "graft_pendant_paths",
    "gen_subdivided_triangulation",
    "gen_girth5_random",
    "generate",
    "parse_spec",
    "read_manifest",
    "read_p5g",
    "write_p5g",
    "write_results",
]

MASK64 = (1 << 64) - 1


class BadParameter(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class SplitMix64:
    """SplitMix64 (Steele, Lea, Flood).  64-bit state, 64-bit outputs."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection sampling."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


# -- deterministic families ---------------------------------------------------


def gen_cycle(n: int) -> RotationGraph:
    if n < 3:
        raise BadParameter(f"cycle needs n >= 3, got {n}")
    return build_graph([[(v + 1) % n, (v - 1) % n] for v in range(n)])


def gen_spider(center_degree: int, leg_length: int) -> RotationGraph:
    """Vertex 0 with ``center_degree`` legs, each a path of ``leg_length`` edges."""
    if center_degree < 1 or leg_length < 1:
        raise BadParameter("spider parameters must be positive")
    rot: list[list[int]] = [[]]
    labels = ["center"]
    for _ in range(center_degree):
        prev = 0
        for step in range(leg_length):
            v = len(rot)
            rot.append([prev])
            rot[prev].append(v)
            labels.append("leg" if step < leg_length - 1 else "foot")
            prev = v
    return build_graph(rot, labels)


def gen_dodecahedron() -> RotationGraph:
    """Dodecahedral graph with its planar embedding (12 pentagons).

    Outer pentagon 0-4, middle 10-cycle 5-14, inner pentagon 15-19, drawn on
    concentric circles; rotations are read off the drawing clockwise.
    """
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, 5 + 2 * i))
        edges.append((5 + 2 * i + 1, 15 + i))
        edges.append((15 + i, 15 + (i + 1) % 5))
    for j in range(10):
        edges.append((5 + j, 5 + (j + 1) % 10))
    pos = {}
    for i in range(5):
        pos[i] = (3.0, 2 * math.pi * i / 5)
        pos[15 + i] = (1.0, 2 * math.pi * (2 * i + 1) / 10)
    for j in range(10):
        pos[5 + j] = (2.0, 2 * math.pi * j / 10)
    xy = {v: (r * math.cos(t), r * math.sin(t)) for v, (r, t) in pos.items()}
    adj: dict[int, list[int]] = {v: [] for v in range(20)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)

    def angle(v: int, u: int) -> float:
        return math.atan2(xy[u][1] - xy[v][1], xy[u][0] - xy[v][0])

    rot = [sorted(adj[v], key=lambda u: -angle(v, u)) for v in range(20)]
    return build_graph(rot)


# -- random pipeline ------------------------------------------------------------


def gen_triangulation(n: int, rng: SplitMix64) -> list[list[int]]:
    """Random planar triangulation on ``n`` vertices by repeated face splits.

    Returns mutable rotation lists.  Faces are kept as dart triples ``(a, b, c)``
    meaning the boundary walk ``a -> b -> c -> a``.
    """
    if n < 3:
        raise BadParameter(f"triangulation needs n >= 3, got {n}")
    rot = [[1, 2], [2, 0], [0, 1]]
    faces = [(0, 1, 2), (0, 2, 1)]
    for x in range(3, n):
        i = rng.below(len(faces))
        a, b, c = faces[i]
        # x goes between a and c at b, between b and a at c, between c and b at a
        rot[b].insert(rot[b].index(a) + 1, x)
        rot[c].insert(rot[c].index(b) + 1, x)
        rot[a].insert(rot[a].index(c) + 1, x)
        rot.append([a, c, b])
        faces[i] = (a, b, x)
        faces.append((b, c, x))
        faces.append((c, a, x))
    return rot


def subdivide(rot: list[list[int]]) -> list[list[int]]:
    """Insert one new vertex on every edge, keeping the embedding."""
    rot = [list(r) for r in rot]
    n = len(rot)
    for u in range(n):
        for v in sorted(rot[u]):
            if u < v and v < n:
                s = len(rot)
                rot[u][rot[u].index(v)] = s
                rot[v][rot[v].index(u)] = s
                rot.append([u, v])
    return rot


def graft_pendant_paths(rot: list[list[int]], center: int, target: int, rng: SplitMix64) -> list[list[int]]:
    """Attach paths ``center - m - leaf`` at random rotation slots until
    ``center`` has degree ``target``."""
    rot = [list(r) for r in rot]
    while len(rot[center]) < target:
        m, leaf = len(rot), len(rot) + 1
        rot[center].insert(rng.below(len(rot[center]) + 1), m)
        rot.append([center, leaf])
        rot.append([m])
    return rot


def gen_subdivided_triangulation(n: int, seed: int) -> RotationGraph:
    """Random triangulation on ``n`` vertices with every edge subdivided (girth >= 6)."""
    if n < 3:
        raise BadParameter(f"need n >= 3, got {n}")
    rng = SplitMix64(seed)
    return build_graph(subdivide(gen_triangulation(n, rng)))


def gen_girth5_random(n: int, delta_target: int, seed: int) -> RotationGraph:
    """Triangulation on ``n`` vertices, subdivided, then grafted up to ``delta_target``.

    The graft center is drawn uniformly among the triangulation vertices of
    maximum degree.  Output: genus-0 embedding, girth >= 6, max degree >=
    ``delta_target``.  Vertex count is ``n + (3n - 6) + 2 * grafts``.
    """
    if n < 5:
        raise BadParameter(f"need n >= 5, got {n}")
    if delta_target < 1:
        raise BadParameter(f"delta_target must be positive, got {delta_target}")
    rng = SplitMix64(seed)
    tri = gen_triangulation(n, rng)
    top = max(len(r) for r in tri)
    center = rng.choice([v for v in range(n) if len(tri[v]) == top])
    rot = graft_pendant_paths(subdivide(tri), center, delta_target, rng)
    return build_graph(rot)


# -- specs and manifests --------------------------------------------------------

FAMILIES = ("cycle", "spider", "dodecahedron", "subdivided-triangulation", "grafted")

_KEYS = {
    "cycle": {"n"},
    "spider": {"delta", "leg"},
    "dodecahedron": set(),
    "subdivided-triangulation": {"n", "seed"},
    "grafted": {"n", "delta", "seed"},
}


@dataclass(frozen=True)
class GenSpec:
    """A generator family plus integer parameters.

    Keys: ``n`` (cycle length or triangulation size), ``delta`` (target maximum
    degree), ``leg`` (spider leg length), ``seed``.
    """

    family: str
    params: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise BadParameter(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        keys = {k for k, _ in self.params}
        required = _KEYS[self.family]
        if keys != required:
            raise BadParameter(
                f"{self.family} takes parameters {sorted(required)}, got {sorted(keys)}"
            )

    def get(self, key: str) -> int:
        return dict(self.params)[key]

    def canonical(self) -> str:
        return " ".join([self.family, *(f"{k}={v}" for k, v in sorted(self.params))])

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:12]

    def __str__(self) -> str:
        return self.canonical()


def parse_spec(text: str) -> GenSpec:
    """Parse ``family key=value ...``."""
    parts = text.split()
    if not parts:
        raise BadParameter("empty generator spec")
    params = []
    for item in parts[1:]:
        key, sep, value = item.partition("=")
        if not sep:
            raise BadParameter(f"expected key=value, got {item!r}")
        try:
            params.append((key, int(value)))
        except ValueError:
            raise BadParameter(f"parameter {key} must be an integer, got {value!r}") from None
    return GenSpec(parts[0], tuple(sorted(params)))


def generate(spec: GenSpec | str) -> RotationGraph:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    family = spec.family
    if family == "cycle":
        return gen_cycle(spec.get("n"))
    if family == "spider":
        return gen_spider(spec.get("delta"), spec.get("leg"))
    if family == "dodecahedron":
        return gen_dodecahedron()
    if family == "subdivided-triangulation":
        return gen_subdivided_triangulation(spec.get("n"), spec.get("seed"))
    return gen_girth5_random(spec.get("n"), spec.get("delta"), spec.get("seed"))


def read_manifest(text: str) -> list[GenSpec]:
    """One spec per line; ``#`` starts a comment."""
    specs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            specs.append(parse_spec(line))
        except BadParameter as exc:
            raise ParseError(str(exc), lineno) from None
    return specs


# -- p5g text format --------------------------------------------------------------


def write_p5g(g: RotationGraph) -> str:
    lines = [f"p5g {g.n} {g.m}"]
    for v in g.vertices():
        lines.append(" ".join([f"rot {v}:", *map(str, g.rotation[v])]).rstrip())
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def read_p5g(text: str) -> RotationGraph:
    """Parse ``p5g <n> <m>`` followed by one ``rot <v>: <u1> ... <uk>`` per vertex."""
    lines = _content_lines(text)
    try:
        lineno, head = next(lines)
    except StopIteration:
        raise ParseError("empty input") from None
    if len(head) != 3 or head[0] != "p5g":
        raise ParseError("expected header 'p5g <n> <m>'", lineno)
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError("header counts must be integers", lineno) from None
    if n < 1 or m < 0:
        raise ParseError("header counts out of range", lineno)

    rows: dict[int, list[int]] = {}
    for lineno, tokens in lines:
        if tokens[0] != "rot" or len(tokens) < 2 or not tokens[1].endswith(":"):
            raise ParseError("expected 'rot <v>: ...'", lineno)
        try:
            v = int(tokens[1][:-1])
            nbrs = [int(t) for t in tokens[2:]]
        except ValueError:
            raise ParseError("vertex ids must be integers", lineno) from None
        if not 0 <= v < n:
            raise ParseError(f"vertex {v} outside 0..{n - 1}", lineno)
        if v in rows:
            raise ParseError(f"vertex {v} listed twice", lineno)
        rows[v] = nbrs
    if len(rows) != n:
        missing = sorted(set(range(n)) - set(rows))
        raise ParseError(
            f"header declares {n} vertices but {len(rows)} rotation lines given; missing {missing}"
        )
    g = build_graph(rows)
    if g.m != m:
        raise ParseError(f"header declares {m} edges but rotations give {g.m}")
    return g


# -- result persistence -----------------------------------------------------------


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_results(out_dir: Path | str, key: str, files: dict[str, str]) -> Path:
    """Write ``files`` (name -> text) under ``out_dir/<key>/``."""
    target = Path(out_dir) / key
    target.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (target / name).write_text(text)
    return target
