"""Embedded graphs given by rotation systems.

A :class:`RotationGraph` stores, for every vertex, the clockwise cyclic order
of its neighbours.  That order is the whole embedding: faces are recovered by
walking darts (directed edges) with a single fixed rule, see
:func:`trace_faces`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "UNBOUNDED",
    "GraphError",
    "AsymmetricAdjacency",
    "Loop",
    "ParallelEdge",
    "DanglingVertexId",
    "Disconnected",
    "RotationGraph",
    "FaceSet",
    "build_graph",
    "trace_faces",
    "validate_planar_embedding",
    "girth",
    "square",
    "distances_from",
    "is_connected",
    "from_edges",
]

#: Girth of a forest.  Compares greater than every integer.
UNBOUNDED = math.inf

Dart = tuple[int, int]


class GraphError(ValueError):
    """Invalid rotation system.  ``vertices`` names the offenders."""

    def __init__(self, message: str, vertices: Sequence[int] = ()):
        super().__init__(message)
        self.vertices = tuple(vertices)


class AsymmetricAdjacency(GraphError):
    pass


class Loop(GraphError):
    pass


class ParallelEdge(GraphError):
    pass


class DanglingVertexId(GraphError):
    pass


class Disconnected(GraphError):
    pass


@dataclass(frozen=True)
class RotationGraph:
    """Simple graph with a clockwise rotation at every vertex.

    Construct through :func:`build_graph`, which validates the invariants.
    """

    n: int
    rotation: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(r) for r in self.rotation)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @property
    def m(self) -> int:
        return sum(self.degrees) // 2

    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in ascending order."""
        for u in range(self.n):
            for v in sorted(self.rotation[u]):
                if u < v:
                    yield u, v

    def darts(self) -> Iterator[Dart]:
        for u in range(self.n):
            for v in self.rotation[u]:
                yield u, v

    def successor(self, v: int, u: int) -> int:
        """The neighbour following ``u`` in the rotation at ``v``."""
        rot = self.rotation[v]
        return rot[(rot.index(u) + 1) % len(rot)]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.rotation[u]


def build_graph(
    rotation_spec: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
    labels: Sequence[str] | None = None,
) -> RotationGraph:
    """Validate per-vertex neighbour sequences and return a RotationGraph.

    ``rotation_spec`` is either a sequence indexed by vertex id or a mapping
    whose keys are exactly ``0..n-1``.
    """
    if isinstance(rotation_spec, Mapping):
        keys = sorted(rotation_spec)
        if keys != list(range(len(keys))):
            missing = sorted(set(range(max(keys, default=-1) + 1)) - set(keys))
            raise DanglingVertexId(
                f"vertex ids must be 0..n-1; missing {missing}", missing
            )
        rows = [rotation_spec[v] for v in keys]
    else:
        rows = list(rotation_spec)
    n = len(rows)
    if n == 0:
        raise GraphError("graph has no vertices")
    rotation = tuple(tuple(int(u) for u in row) for row in rows)

    for v, rot in enumerate(rotation):
        for u in rot:
            if u == v:
                raise Loop(f"loop at vertex {v}", (v,))
            if not 0 <= u < n:
                raise DanglingVertexId(
                    f"vertex {v} lists unknown vertex {u}", (v, u)
                )
        if len(set(rot)) != len(rot):
            dup = next(u for u in rot if rot.count(u) > 1)
            raise ParallelEdge(f"parallel edges between {v} and {dup}", (v, dup))
    for v, rot in enumerate(rotation):
        for u in rot:
            if v not in rotation[u]:
                raise AsymmetricAdjacency(
                    f"{u} is in the rotation of {v} but {v} is not in the rotation of {u}",
                    (v, u),
                )
    if labels is not None:
        if len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")
        labels = tuple(labels)
    return RotationGraph(n, rotation, labels)


@dataclass(frozen=True)
class FaceSet:
    """Boundary walks of an embedding.

    ``faces[i]`` is the cyclic sequence of darts bounding face ``i``.  A bridge
    contributes both of its darts, so ``lengths[i]`` counts edge sides.  An
    edgeless (single-vertex) graph has one empty face of length 0.
    """

    faces: tuple[tuple[Dart, ...], ...]
    dart_face: Mapping[Dart, int]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def walk(self, i: int) -> tuple[int, ...]:
        """Vertex sequence of face ``i`` (tails of its darts)."""
        return tuple(u for u, _ in self.faces[i])

    def faces_of_edge(self, u: int, v: int) -> tuple[int, int]:
        """Faces on the two sides of edge ``uv`` (equal for a bridge)."""
        return self.dart_face[(u, v)], self.dart_face[(v, u)]


def trace_faces(g: RotationGraph) -> FaceSet:
    """Trace all faces of the rotation system.

    The dart after ``(u, v)`` is ``(v, w)`` with ``w`` the rotation successor
    of ``u`` around ``v``.  Faces are numbered in order of their smallest dart
    (vertex ascending, then rotation position).
    """
    dart_face: dict[Dart, int] = {}
    faces: list[tuple[Dart, ...]] = []
    for start in g.darts():
        if start in dart_face:
            continue
        fid = len(faces)
        walk = []
        dart = start
        while dart not in dart_face:
            dart_face[dart] = fid
            walk.append(dart)
            u, v = dart
            dart = (v, g.successor(v, u))
        faces.append(tuple(walk))
    if not faces:
        faces.append(())
    return FaceSet(tuple(faces), dart_face)


def distances_from(g: RotationGraph, source: int, limit: int | None = None) -> dict[int, int]:
    """BFS distances from ``source``, optionally cut off after ``limit``."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for w in g.rotation[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def is_connected(g: RotationGraph) -> bool:
    return len(distances_from(g, 0)) == g.n


def validate_planar_embedding(g: RotationGraph, faces: FaceSet | None = None) -> bool:
    """True iff the rotation system is a genus-0 embedding (V - E + F = 2)."""
    if not is_connected(g):
        raise Disconnected("Euler characteristic test needs a connected graph")
    if faces is None:
        faces = trace_faces(g)
    return g.n - g.m + len(faces) == 2


def girth(g: RotationGraph) -> int | float:
    """Length of a shortest cycle, or :data:`UNBOUNDED` for a forest."""
    best = UNBOUNDED
    for root in g.vertices():
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in g.rotation[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def square(g: RotationGraph) -> tuple[frozenset[int], ...]:
    """Adjacency of the square: ``u ~ v`` iff ``1 <= d(u, v) <= 2``."""
    out = []
    for v in g.vertices():
        near = set(g.rotation[v])
        for u in g.rotation[v]:
            near.update(g.rotation[u])
        near.discard(v)
        out.append(frozenset(near))
    return tuple(out)


def from_edges(edges: Iterable[tuple[int, int]], n: int) -> RotationGraph:
    """Build a graph from an edge list with rotations in insertion order."""
    rot: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        rot[u].append(v)
        rot[v].append(u)
    return build_graph(rot)
