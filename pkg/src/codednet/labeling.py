"""Spanning-tree codeword labeling and label-driven routing.

Every vertex of a spanning tree gets an injective label over F_q: the root
is the zero vector, and a child copies its parent's label and writes one
extra nonzero symbol strictly to the right of the parent's last nonzero
symbol.  Zeroing a label's last nonzero symbol therefore recovers the
parent's label, which is the whole routing backbone: a walk ascends by
stripping symbols until it sits on an ancestor of the target, then descends
by restoring the target's symbols one at a time.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Sequence

from .codes import Word, is_prime
from .efficiency import EfficiencyClass, classify_network, efficient_up_to
from .network import CodedNetwork, InfeasibleError, Path, SocialNetwork

_EXHAUSTIVE_VERTEX_CAP = 8
_EXHAUSTIVE_COMBO_CAP = 100_000


class SpanningTree:
    """Rooted spanning tree with an explicit, order-preserving child list.

    The order in which children were attached is kept because label
    assignment consumes label slots in that order.  Trees built by bfs()
    attach children in ascending vertex order; trees built from an explicit
    edge list keep the list's order.
    """

    def __init__(self, root: str, edges: Iterable[tuple[str, str]] = ()):
        self.root = str(root)
        self._parent: dict[str, str | None] = {self.root: None}
        self._children: dict[str, list[str]] = {self.root: []}
        self.edge_list: list[tuple[str, str]] = []
        for parent, child in edges:
            self._attach(str(parent), str(child))
        self._diameter: int | None = None

    def _attach(self, parent: str, child: str) -> None:
        if parent not in self._parent:
            raise ValueError(f"edge ({parent!r}, {child!r}) attaches to an unplaced parent")
        if child in self._parent:
            raise ValueError(f"vertex {child!r} already has a parent")
        self._parent[child] = parent
        self._children[child] = []
        self._children[parent].append(child)
        self.edge_list.append((parent, child))
        self._diameter = None

    @classmethod
    def from_edges(cls, edges: Sequence[tuple[str, str]], root: str | None = None) -> "SpanningTree":
        """Build from ordered (parent, child) pairs; the root is inferred as
        the unique vertex that never appears as a child."""
        edges = [(str(a), str(b)) for a, b in edges]
        if root is None:
            children = {b for _, b in edges}
            candidates = {a for a, _ in edges} - children
            if len(candidates) != 1:
                raise ValueError("cannot infer a unique root; pass root explicitly")
            root = candidates.pop()
        return cls(root, edges)

    @classmethod
    def bfs(cls, net: SocialNetwork, root: str) -> "SpanningTree":
        """Breadth-first spanning tree; children attached in ascending order."""
        if root not in net:
            raise ValueError(f"unknown vertex {root!r}")
        tree = cls(root)
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in net.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    tree._attach(u, w)
                    queue.append(w)
        if len(seen) != len(net):
            raise InfeasibleError("graph is not connected; no spanning tree exists")
        return tree

    # -- queries

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self._parent)

    def __len__(self) -> int:
        return len(self._parent)

    def __contains__(self, v: str) -> bool:
        return v in self._parent

    def parent(self, v: str) -> str | None:
        return self._parent[v]

    def children(self, v: str) -> tuple[str, ...]:
        return tuple(self._children[v])

    def bfs_order(self) -> list[str]:
        order = []
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            order.append(u)
            queue.extend(self._children[u])
        return order

    def distances_from(self, v: str) -> dict[str, int]:
        if v not in self._parent:
            raise ValueError(f"unknown vertex {v!r}")
        adj: dict[str, list[str]] = {u: list(self._children[u]) for u in self._parent}
        for u, p in self._parent.items():
            if p is not None:
                adj[u].append(p)
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def diameter(self) -> int:
        if self._diameter is None:
            far = self.distances_from(self.root)
            u = max(far, key=lambda v: (far[v], v))
            ecc = self.distances_from(u)
            self._diameter = max(ecc.values())
        return self._diameter

    def path_between(self, a: str, b: str) -> Path:
        """Unique tree path, found by meeting at the lowest common ancestor."""
        up_a = self._ancestry(a)
        up_b = self._ancestry(b)
        in_a = {v: i for i, v in enumerate(up_a)}
        j = next(i for i, v in enumerate(up_b) if v in in_a)
        meet = up_b[j]
        return Path(tuple(up_a[: in_a[meet] + 1] + list(reversed(up_b[:j]))))

    def _ancestry(self, v: str) -> list[str]:
        if v not in self._parent:
            raise ValueError(f"unknown vertex {v!r}")
        chain = [v]
        while self._parent[chain[-1]] is not None:
            chain.append(self._parent[chain[-1]])
        return chain

    def to_network(self) -> SocialNetwork:
        return SocialNetwork(self.edge_list, vertices=self.vertices)

    def __repr__(self) -> str:
        return f"SpanningTree(root={self.root!r}, {len(self)} vertices)"


# ---------------------------------------------------------------------------
# Label assignment


def trim_label(label: Sequence[int]) -> Word:
    t = tuple(label)
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def parent_label(trimmed: Word) -> Word:
    # zeroing the last nonzero symbol of a trimmed label just drops it
    return trim_label(trimmed[:-1])


class Labeling:
    """An injective vertex -> F_q^N map over a spanning tree."""

    def __init__(self, tree: SpanningTree, q: int, trimmed: dict[str, Word]):
        self.tree = tree
        self.q = q
        self.length = max((len(t) for t in trimmed.values()), default=0)
        self._trimmed = trimmed
        self.labels: dict[str, Word] = {
            v: t + (0,) * (self.length - len(t)) for v, t in trimmed.items()
        }
        self._by_trimmed = {t: v for v, t in trimmed.items()}

    def label(self, v: str) -> Word:
        try:
            return self.labels[v]
        except KeyError:
            raise ValueError(f"vertex {v!r} is not labeled") from None

    def vertex_of(self, label: Sequence[int]) -> str:
        t = trim_label(label)
        try:
            return self._by_trimmed[t]
        except KeyError:
            raise ValueError(f"no vertex carries label {tuple(label)}") from None

    def image(self) -> tuple[Word, ...]:
        """All assigned labels, in tree traversal order."""
        return tuple(self.labels[v] for v in self.tree.bfs_order())


def assign_labels(tree: SpanningTree, q: int) -> Labeling:
    """Label the tree: zero vector at the root, then per child the smallest
    unused nonzero value right after the parent's last nonzero symbol, or a
    lone 1 shifted further right once those slots are exhausted."""
    if not is_prime(q):
        raise ValueError(f"field order must be prime, got {q}")
    trimmed: dict[str, Word] = {tree.root: ()}
    used: set[Word] = {()}
    for u in tree.bfs_order():
        base = trimmed[u]
        for child in tree.children(u):
            cand = None
            for v in range(1, q):
                attempt = base + (v,)
                if attempt not in used:
                    cand = attempt
                    break
            if cand is None:
                gap = 1
                while base + (0,) * gap + (1,) in used:
                    gap += 1
                cand = base + (0,) * gap + (1,)
            trimmed[child] = cand
            used.add(cand)
    return Labeling(tree, q, trimmed)


def next_hop(labeling: Labeling, current: str, target: str) -> str:
    """One routing step: strip the last nonzero symbol while off the
    target's ancestor chain, otherwise restore the target's next symbol."""
    if current == target:
        raise ValueError("already at the target")
    cur = trim_label(labeling.label(current))
    chain = [trim_label(labeling.label(target))]
    while chain[-1]:
        chain.append(parent_label(chain[-1]))
    try:
        i = chain.index(cur)
    except ValueError:
        return labeling.vertex_of(parent_label(cur))
    return labeling.vertex_of(chain[i - 1])


def route(labeling: Labeling, alpha: str, beta: str) -> Path:
    """Iterate next_hop; yields the unique tree path from alpha to beta."""
    if alpha == beta:
        labeling.label(alpha)
        return Path((alpha,))
    hops = [alpha]
    while hops[-1] != beta:
        hops.append(next_hop(labeling, hops[-1], beta))
        if len(hops) > 2 * len(labeling.tree):
            raise RuntimeError("routing failed to terminate")  # pragma: no cover
    return Path(tuple(hops))


# ---------------------------------------------------------------------------
# Super-efficiency


def tree_is_efficient(csn: CodedNetwork, tree: SpanningTree) -> bool:
    """Whether the tree, carrying the parent network's edge probabilities,
    classifies efficient."""
    if len(tree) == 1:
        return True
    if csn.constant_p is not None:
        return efficient_up_to(csn, tree.diameter())
    tree_net = tree.to_network()
    probs = {e: csn.edge_error_prob[e] for e in tree_net.edges}
    return classify_network(CodedNetwork(tree_net, csn.code, probs)) is EfficiencyClass.EFFICIENT


def _spans(edges: Sequence[tuple[str, str]], vertices: tuple[str, ...]) -> bool:
    adj: dict[str, list[str]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {vertices[0]}
    queue = deque([vertices[0]])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(vertices)


def _orient(edges: Sequence[tuple[str, str]], root: str) -> SpanningTree:
    adj: dict[str, list[str]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    tree = SpanningTree(root)
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(adj.get(u, ())):
            if w not in seen:
                seen.add(w)
                tree._attach(u, w)
                queue.append(w)
    return tree


def _all_spanning_trees(net: SocialNetwork):
    edges = sorted(net.edges)
    need = len(net) - 1
    for combo in itertools.combinations(edges, need):
        if _spans(combo, net.vertices):
            yield combo


def is_super_efficient(csn: CodedNetwork) -> tuple[bool, SpanningTree | None]:
    """Search for a spanning tree that is itself efficient.

    The network must be efficient to begin with.  Small graphs are searched
    exhaustively for the minimum-diameter efficient tree; larger ones try
    the breadth-first tree of every root in ascending diameter order, which
    is a heuristic (a non-BFS tree could succeed where all of these fail).
    """
    g = csn.graph
    if not g.connected:
        raise InfeasibleError("super-efficiency needs a connected network")
    if classify_network(csn) is not EfficiencyClass.EFFICIENT:
        return False, None
    if len(g) == 1:
        return True, SpanningTree(g.vertices[0])

    n_edges = len(g.edges)
    need = len(g) - 1
    if len(g) <= _EXHAUSTIVE_VERTEX_CAP and _ncombs(n_edges, need) <= _EXHAUSTIVE_COMBO_CAP:
        best: tuple[int, SpanningTree] | None = None
        for combo in _all_spanning_trees(g):
            tree = _orient(combo, min(g.vertices))
            diam = tree.diameter()
            if (best is None or diam < best[0]) and tree_is_efficient(csn, tree):
                best = (diam, tree)
        return (True, best[1]) if best else (False, None)

    trees = sorted(
        (SpanningTree.bfs(g, r) for r in g.vertices),
        key=lambda t: (t.diameter(), t.root),
    )
    for tree in trees:
        if tree_is_efficient(csn, tree):
            return True, tree
    return False, None


def _ncombs(n: int, k: int) -> int:
    from math import comb

    return comb(n, k) if 0 <= k <= n else 0


# ---------------------------------------------------------------------------
# Complete graphs can alternatively be labeled with the codewords of a
# simplex code; the constant pairwise label distance makes completeness
# recognizable from labels alone, and routing degenerates to the direct edge.


def complete_graph_labels(net: SocialNetwork) -> dict[str, Word]:
    from .codes import PrimeField, simplex_code

    if not net.is_complete():
        raise ValueError("simplex labeling is defined for complete graphs")
    m = 2
    while 2 ** m < len(net):
        m += 1
    code = simplex_code(m, PrimeField(2))
    words = itertools.islice(code.codewords(), len(net))
    return dict(zip(net.vertices, words))
