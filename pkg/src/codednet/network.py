"""Undirected social networks and their coded counterparts.

Vertices are opaque strings; internally they are interned to dense indices
and the all-pairs BFS distance matrix is computed eagerly at construction,
so every query afterwards is a read-only lookup.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .codes import LinearCode

Prob = int | float | Fraction

_UNREACHED = -1


class InfeasibleError(RuntimeError):
    """A structurally impossible request (disconnected pair, no covering)."""


def edge_key(u: str, v: str) -> tuple[str, str]:
    """Canonical unordered-edge key."""
    return (u, v) if u <= v else (v, u)


class SocialNetwork:
    """Simple undirected graph.  Immutable after construction."""

    def __init__(self, edges: Iterable[tuple[str, str]], vertices: Iterable[str] = ()):
        edge_set: set[tuple[str, str]] = set()
        vert_set: set[str] = set(str(v) for v in vertices)
        for u, v in edges:
            u, v = str(u), str(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u!r}")
            edge_set.add(edge_key(u, v))
            vert_set.add(u)
            vert_set.add(v)
        if not vert_set:
            raise ValueError("graph has no vertices")
        self._vertices = tuple(sorted(vert_set))
        self._index = {v: i for i, v in enumerate(self._vertices)}
        self._edges = frozenset(edge_set)
        n = len(self._vertices)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edge_set:
            iu, iv = self._index[u], self._index[v]
            adj[iu].append(iv)
            adj[iv].append(iu)
        self._adj = [sorted(nb) for nb in adj]
        self._dist = self._all_pairs()
        self.connected = bool(n == 1 or (self._dist >= 0).all())

    def _all_pairs(self) -> np.ndarray:
        n = len(self._vertices)
        dist = np.full((n, n), _UNREACHED, dtype=np.int64)
        for s in range(n):
            dist[s, s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                du = dist[s, u]
                for w in self._adj[u]:
                    if dist[s, w] == _UNREACHED:
                        dist[s, w] = du + 1
                        queue.append(w)
        return dist

    # -- queries

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return self._edges

    def __contains__(self, v: str) -> bool:
        return v in self._index

    def __len__(self) -> int:
        return len(self._vertices)

    def _require(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise ValueError(f"unknown vertex {v!r}") from None

    def neighbors(self, v: str) -> tuple[str, ...]:
        return tuple(self._vertices[i] for i in self._adj[self._require(v)])

    def degree(self, v: str) -> int:
        return len(self._adj[self._require(v)])

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._edges

    def distance(self, u: str, v: str) -> int | None:
        d = self._dist[self._require(u), self._require(v)]
        return None if d == _UNREACHED else int(d)

    def diameter(self) -> int:
        if not self.connected:
            raise InfeasibleError("diameter of a disconnected graph")
        return int(self._dist.max())

    def is_tree(self) -> bool:
        return self.connected and len(self._edges) == len(self._vertices) - 1

    def is_complete(self) -> bool:
        n = len(self._vertices)
        return len(self._edges) == n * (n - 1) // 2

    def induced(self, subset: Iterable[str]) -> "SocialNetwork":
        """Induced subgraph on the given vertices (kept even if isolated)."""
        keep = set(str(v) for v in subset)
        for v in keep:
            self._require(v)
        kept_edges = [e for e in self._edges if e[0] in keep and e[1] in keep]
        return SocialNetwork(kept_edges, vertices=keep)

    def __repr__(self) -> str:
        return f"SocialNetwork({len(self._vertices)} vertices, {len(self._edges)} edges)"


@dataclass(frozen=True)
class Path:
    """A simple path given by its vertex sequence."""

    vertices: tuple[str, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path has at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path repeats a vertex")

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def edges(self) -> list[tuple[str, str]]:
        return [edge_key(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    def validate(self, net: SocialNetwork) -> None:
        for v in self.vertices:
            if v not in net:
                raise ValueError(f"path vertex {v!r} not in graph")
        for a, b in zip(self.vertices, self.vertices[1:]):
            if not net.has_edge(a, b):
                raise ValueError(f"path step {a!r}-{b!r} is not an edge")

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))


def shortest_path(net: SocialNetwork, alpha: str, beta: str) -> Path:
    """Minimum-edge-count path; ties broken toward the lexicographically
    smallest vertex sequence."""
    ia, ib = net._require(alpha), net._require(beta)
    d = net._dist[ia, ib]
    if d == _UNREACHED:
        raise InfeasibleError(f"no path between {alpha!r} and {beta!r}")
    verts = [alpha]
    cur = ia
    remaining = int(d)
    while remaining > 0:
        step = min(
            (net._vertices[w] for w in net._adj[cur] if net._dist[w, ib] == remaining - 1)
        )
        verts.append(step)
        cur = net._index[step]
        remaining -= 1
    return Path(tuple(verts))


def ball(net: SocialNetwork, alpha: str, r: int) -> SocialNetwork:
    """Induced subgraph on all vertices within distance r of alpha."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    ia = net._require(alpha)
    inside = [v for i, v in enumerate(net._vertices) if 0 <= net._dist[ia, i] <= r]
    return net.induced(inside)


def ball_vertices(net: SocialNetwork, alpha: str, r: int) -> frozenset[str]:
    ia = net._require(alpha)
    return frozenset(v for i, v in enumerate(net._vertices) if 0 <= net._dist[ia, i] <= r)


class TopologyType(enum.Enum):
    TYPE_A = "A"  # tree
    TYPE_B = "B"  # connected, neither tree nor complete
    TYPE_C = "C"  # complete


def topology_type(net: SocialNetwork) -> TopologyType:
    if len(net) < 2 or not net.connected:
        raise ValueError("topology type needs a connected graph on >= 2 vertices")
    if net.is_tree():
        return TopologyType.TYPE_A
    if net.is_complete():
        return TopologyType.TYPE_C
    return TopologyType.TYPE_B


class CodedNetwork:
    """A social network whose edges carry symbol-error probabilities and
    whose messages are codewords of a fixed linear code."""

    def __init__(
        self,
        graph: SocialNetwork,
        code: LinearCode,
        edge_error_prob: Prob | Mapping[tuple[str, str], Prob],
    ):
        self.graph = graph
        self.code = code
        if isinstance(edge_error_prob, Mapping):
            probs = {edge_key(*e): _check_prob(p) for e, p in edge_error_prob.items()}
        else:
            p = _check_prob(edge_error_prob)
            probs = {e: p for e in graph.edges}
        missing = graph.edges - probs.keys()
        if missing:
            raise ValueError(f"missing error probability for edges: {sorted(missing)[:3]}")
        extra = probs.keys() - graph.edges
        if extra:
            raise ValueError(f"probability given for non-edges: {sorted(extra)[:3]}")
        self.edge_error_prob = probs
        values = set(probs.values())
        self.constant_p: Prob | None = values.pop() if len(values) == 1 else None

    def p(self, u: str, v: str) -> Prob:
        return self.edge_error_prob[edge_key(u, v)]

    def critical_value(self) -> int:
        """Maximum shortest-path length over all vertex pairs."""
        return self.graph.diameter()

    def induced(self, subset: Iterable[str]) -> "CodedNetwork":
        sub = self.graph.induced(subset)
        probs = {e: self.edge_error_prob[e] for e in sub.edges}
        if not sub.edges:
            # degenerate single-vertex networks carry no edge weights
            return CodedNetwork(sub, self.code, probs if probs else 0)
        return CodedNetwork(sub, self.code, probs)

    def __repr__(self) -> str:
        return f"CodedNetwork({self.graph!r}, {self.code!r})"


def _check_prob(p: Prob) -> Prob:
    if isinstance(p, float):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"probability {p} out of [0, 1]")
        return p
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"probability {p} out of [0, 1]")
    return p


# ---------------------------------------------------------------------------
# Edge-list files: `vertexA<TAB>vertexB[<TAB>p]`, `#` comment lines.  Fields
# may also be separated by runs of spaces when names carry no whitespace.


def parse_probability(text: str) -> Prob:
    """Parse '3/4' to an exact Fraction, '0.75' to a float."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        try:
            value = Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad probability ratio {text!r}") from None
    else:
        try:
            value = Fraction(text) if text.isdigit() else float(text)
        except ValueError:
            raise ValueError(f"bad probability {text!r}") from None
    return _check_prob(value)


def parse_edge_list(
    text: str, source: str = "<string>"
) -> tuple[SocialNetwork, dict[tuple[str, str], Prob]]:
    """Returns the graph plus whatever per-edge probabilities the file gave."""
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    probs: dict[tuple[str, str], Prob] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        fields = [f.strip() for f in fields if f.strip()]
        if len(fields) not in (2, 3):
            raise ValueError(f"{source}:{lineno}: expected 2 or 3 fields, got {len(fields)}")
        u, v = fields[0], fields[1]
        if u == v:
            raise ValueError(f"{source}:{lineno}: self-loop at {u!r}")
        key = edge_key(u, v)
        if key in seen:
            raise ValueError(f"{source}:{lineno}: duplicate edge {u!r}-{v!r}")
        seen.add(key)
        edges.append((u, v))
        if len(fields) == 3:
            try:
                probs[key] = parse_probability(fields[2])
            except ValueError as exc:
                raise ValueError(f"{source}:{lineno}: {exc}") from None
    if not edges:
        raise ValueError(f"{source}: no edges")
    return SocialNetwork(edges), probs


def load_edge_list(path) -> tuple[SocialNetwork, dict[tuple[str, str], Prob]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read(), source=str(path))


def format_edge_list(net: SocialNetwork, probs: Mapping[tuple[str, str], Prob] | None = None) -> str:
    """Render an edge list that parse_edge_list reads back identically."""
    lines = []
    for u, v in sorted(net.edges):
        if probs and (u, v) in probs:
            lines.append(f"{u}\t{v}\t{probs[(u, v)]}")
        else:
            lines.append(f"{u}\t{v}")
    return "\n".join(lines) + "\n"
