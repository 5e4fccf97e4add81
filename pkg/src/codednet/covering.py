"""Coverings of a network by super-efficient sub-networks.

A covering is a family of vertex subsets, each inducing a connected
sub-network, whose union is the whole vertex set.  It is reachable when the
members' intersection graph is connected (equivalent to the universal
split condition: any bipartition of the members has overlapping sides),
efficient when additionally every member is super-efficient, and perfect
when on top of that every pair of members overlaps.  Messages travel
between members through handoff vertices in the overlaps, with one
error-correction pass at each handoff and one at the receiver.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .codes import LinearCode
from .efficiency import efficient_up_to
from .labeling import Labeling, SpanningTree, assign_labels, is_super_efficient
from .network import (
    CodedNetwork,
    InfeasibleError,
    Prob,
    SocialNetwork,
    ball_vertices,
)

_EXACT_COVER_VERTEX_CAP = 24
_EXACT_COVER_BUDGET = 2_000_000


@dataclass(frozen=True)
class Covering:
    csn: CodedNetwork
    members: tuple[frozenset[str], ...]
    is_covering: bool
    is_reachable: bool
    is_efficient: bool
    is_perfect: bool
    member_trees: tuple[SpanningTree | None, ...]
    member_labelings: tuple[Labeling | None, ...]

    def members_containing(self, v: str) -> list[int]:
        return [i for i, m in enumerate(self.members) if v in m]


@dataclass(frozen=True)
class CoveringSet:
    centers: tuple[str, ...]
    radius_param: int
    density: int
    dimension: int
    dimension_exact: bool
    covering: Covering


@dataclass(frozen=True)
class TransmissionPlan:
    source: str
    target: str
    member_sequence: tuple[int, ...]
    handoffs: tuple[str, ...]
    correction_points: tuple[str, ...]

    @property
    def hop_sequence(self) -> tuple:
        """Alternating member indices and handoff vertices."""
        out: list = [self.member_sequence[0]]
        for h, m in zip(self.handoffs, self.member_sequence[1:]):
            out.extend((h, m))
        return tuple(out)

    def leg_endpoints(self) -> list[tuple[int, str, str]]:
        """(member index, from, to) for each intra-member leg."""
        points = [self.source, *self.handoffs, self.target]
        return [
            (m, points[i], points[i + 1]) for i, m in enumerate(self.member_sequence)
        ]


@dataclass(frozen=True)
class InfluenceReport:
    vertices: frozenset[str]
    size: int
    bound: int
    bound_ok: bool


def _intersection_adjacency(members: Sequence[frozenset[str]]) -> list[list[int]]:
    n = len(members)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if members[i] & members[j]:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def _components(adj: list[list[int]]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in range(len(adj)):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def intersection_graph_connected(members: Sequence[frozenset[str]]) -> bool:
    return len(_components(_intersection_adjacency(members))) <= 1


def reachable_by_subset_check(members: Sequence[frozenset[str]]) -> bool:
    """Exponential reachability oracle: every nonempty proper index subset A
    must satisfy union(A) intersect union(complement) != empty."""
    n = len(members)
    if n > 20:
        raise ValueError("subset check is exponential; refuse beyond 20 members")
    if n <= 1:
        return True
    idx = range(n)
    for size in range(1, n):
        for a in itertools.combinations(idx, size):
            left: set[str] = set().union(*(members[i] for i in a))
            rest = [i for i in idx if i not in a]
            right: set[str] = set().union(*(members[i] for i in rest))
            if not left & right:
                return False
    return True


def validate_covering(csn: CodedNetwork, members: Iterable[Iterable[str]]) -> Covering:
    """Check the covering / reachable / efficient / perfect flags and keep
    each member's witness spanning tree and labeling when efficiency holds."""
    member_sets = tuple(frozenset(str(v) for v in m) for m in members)
    if not member_sets:
        raise ValueError("a covering needs at least one member")
    g = csn.graph
    subs = []
    for i, m in enumerate(member_sets):
        if not m:
            raise ValueError(f"member {i} is empty")
        sub = csn.induced(m)
        if not sub.graph.connected:
            raise ValueError(f"member {i} induces a disconnected subgraph")
        subs.append(sub)

    is_covering = set().union(*member_sets) == set(g.vertices)
    is_reachable = intersection_graph_connected(member_sets)

    trees: list[SpanningTree | None] = []
    labelings: list[Labeling | None] = []
    all_super = True
    for sub in subs:
        ok, tree = is_super_efficient(sub)
        all_super &= ok
        trees.append(tree)
        labelings.append(assign_labels(tree, csn.code.q) if tree is not None else None)

    is_efficient = is_covering and is_reachable and all_super
    is_perfect = is_efficient and all(
        a & b for a, b in itertools.combinations(member_sets, 2)
    )
    return Covering(
        csn=csn,
        members=member_sets,
        is_covering=is_covering,
        is_reachable=is_reachable,
        is_efficient=is_efficient,
        is_perfect=is_perfect,
        member_trees=tuple(trees),
        member_labelings=tuple(labelings),
    )


# ---------------------------------------------------------------------------
# Covering sets (balls of a fixed radius around chosen centers)


def _valid_balls(csn: CodedNetwork, r: int) -> dict[str, frozenset[str]]:
    """Balls that induce super-efficient sub-networks, keyed by center."""
    g = csn.graph
    balls = {v: ball_vertices(g, v, r) for v in g.vertices}
    if csn.constant_p is not None and efficient_up_to(csn, 2 * r):
        # every ball's center-rooted tree has diameter <= 2r, so all pass
        return balls
    cache: dict[frozenset[str], bool] = {}
    valid: dict[str, frozenset[str]] = {}
    for v, b in balls.items():
        ok = cache.get(b)
        if ok is None:
            ok = is_super_efficient(csn.induced(b))[0]
            cache[b] = ok
        if ok:
            valid[v] = b
    return valid


def covering_set(csn: CodedNetwork, r: int) -> CoveringSet | None:
    """Greedy search for centers whose radius-r balls form an efficient
    covering; returns None when no such covering can be assembled."""
    if r <= 0:
        raise ValueError("radius parameter must be positive")
    g = csn.graph
    if not g.connected:
        raise InfeasibleError("covering sets need a connected network")

    valid = _valid_balls(csn, r)
    everything = set(g.vertices)
    if not valid or set().union(*valid.values()) != everything:
        return None

    uncovered = set(everything)
    centers: list[str] = []
    while uncovered:
        v = min(valid, key=lambda c: (-len(valid[c] & uncovered), c))
        if not valid[v] & uncovered:
            return None  # pragma: no cover - guarded by the union check above
        centers.append(v)
        uncovered -= valid[v]

    centers = _connect_centers(g, valid, centers)
    if centers is None:
        return None

    members = [valid[c] for c in centers]
    cov = validate_covering(csn, members)
    if not cov.is_efficient:
        return None  # pragma: no cover - the validity precheck should prevent this
    density = max(len(valid[c]) for c in centers)
    dimension, exact = _cover_dimension(g, valid, len(centers))
    return CoveringSet(
        centers=tuple(centers),
        radius_param=r,
        density=density,
        dimension=dimension,
        dimension_exact=exact,
        covering=cov,
    )


def _connect_centers(
    g: SocialNetwork, valid: dict[str, frozenset[str]], centers: list[str]
) -> list[str] | None:
    """Add centers along shortest graph paths until the members'
    intersection graph is connected."""
    centers = list(centers)
    while True:
        members = [valid[c] for c in centers]
        comps = _components(_intersection_adjacency(members))
        if len(comps) <= 1:
            return centers
        base = set().union(*(members[i] for i in comps[0]))
        others = set().union(*(members[i] for c in comps[1:] for i in c))
        path = _bridge_path(g, base, others)
        added = False
        for v in path:
            if v not in centers:
                if v not in valid:
                    return None
                centers.append(v)
                added = True
        if not added:  # pragma: no cover - a bridge always adds a new center
            return None


def _bridge_path(g: SocialNetwork, src: set[str], dst: set[str]) -> list[str]:
    parent: dict[str, str | None] = {v: None for v in sorted(src)}
    queue = deque(sorted(src))
    while queue:
        u = queue.popleft()
        if u in dst:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return list(reversed(path))
        for w in g.neighbors(u):
            if w not in parent:
                parent[w] = u
                queue.append(w)
    raise InfeasibleError("no path between covering components")  # pragma: no cover


def _cover_dimension(
    g: SocialNetwork, valid: dict[str, frozenset[str]], found: int
) -> tuple[int, bool]:
    """Minimum covering-set size by subset search on small graphs, else the
    greedy size flagged as a heuristic."""
    if len(g) > _EXACT_COVER_VERTEX_CAP:
        return found, False
    index = {v: i for i, v in enumerate(g.vertices)}
    full = (1 << len(g)) - 1
    masks = {}
    for c, b in valid.items():
        m = 0
        for v in b:
            m |= 1 << index[v]
        masks[c] = m
    candidates = sorted(valid)
    spent = 0
    for size in range(1, found):
        spent += comb(len(candidates), size)
        if spent > _EXACT_COVER_BUDGET:
            return found, False
        for combo in itertools.combinations(candidates, size):
            union = 0
            for c in combo:
                union |= masks[c]
            if union != full:
                continue
            if intersection_graph_connected([valid[c] for c in combo]):
                return size, True
    return found, True


def radius(csn: CodedNetwork) -> int:
    """Largest r for which a covering set exists; 0 when none does."""
    if not csn.graph.connected:
        raise InfeasibleError("radius needs a connected network")
    for r in range(csn.critical_value(), 0, -1):
        if covering_set(csn, r) is not None:
            return r
    return 0


# ---------------------------------------------------------------------------
# Transmission planning


def plan_transmission(covering: Covering, alpha: str, beta: str) -> TransmissionPlan:
    """Shortest member-to-member relay from alpha to beta, with handoff
    vertices picked deterministically from each consecutive overlap."""
    if not (covering.is_reachable and covering.is_efficient):
        raise ValueError("transmission plans need a reachable, efficient covering")
    sources = covering.members_containing(alpha)
    targets = set(covering.members_containing(beta))
    if not sources:
        raise ValueError(f"vertex {alpha!r} is not covered")
    if not targets:
        raise ValueError(f"vertex {beta!r} is not covered")

    shared = sorted(set(sources) & targets)
    if shared:
        seq = (shared[0],)
    else:
        adj = _intersection_adjacency(covering.members)
        parent: dict[int, int | None] = {s: None for s in sources}
        queue = deque(sources)
        end = None
        while queue:
            u = queue.popleft()
            if u in targets:
                end = u
                break
            for w in adj[u]:
                if w not in parent:
                    parent[w] = u
                    queue.append(w)
        if end is None:  # pragma: no cover - reachable coverings always connect
            raise InfeasibleError("covering members do not connect the endpoints")
        chain = [end]
        while parent[chain[-1]] is not None:
            chain.append(parent[chain[-1]])
        seq = tuple(reversed(chain))

    handoffs = tuple(
        min(covering.members[a] & covering.members[b]) for a, b in zip(seq, seq[1:])
    )
    return TransmissionPlan(
        source=alpha,
        target=beta,
        member_sequence=seq,
        handoffs=handoffs,
        correction_points=handoffs + (beta,),
    )


def influence(
    csn: CodedNetwork, covering: Covering, alpha: str, m: int
) -> InfluenceReport:
    """Vertices of alpha's member(s) within tree distance m of alpha, i.e.
    reachable without any intermediate error correction."""
    if m < 0:
        raise ValueError("influence degree must be non-negative")
    if not covering.is_efficient:
        raise ValueError("influence needs an efficient covering")
    owners = covering.members_containing(alpha)
    if not owners:
        raise ValueError(f"vertex {alpha!r} is not covered")
    reached: set[str] = set()
    for i in owners:
        tree = covering.member_trees[i]
        assert tree is not None
        dist = tree.distances_from(alpha)
        reached.update(v for v, d in dist.items() if d <= m)
    if len(owners) == 1:
        bound = len(covering.members[owners[0]])
    else:
        bound = sum(len(covering.members[i]) for i in owners)
    return InfluenceReport(
        vertices=frozenset(reached),
        size=len(reached),
        bound=bound,
        bound_ok=len(reached) <= bound,
    )


# ---------------------------------------------------------------------------
# Constructing perfect networks


def size_bounds(dimension_n: int, r: int, e: int) -> tuple[int, int]:
    """Vertex-count bracket r*n + C(n,2) <= |V| <= n*e - C(n,2) for a
    perfect network of dimension n, radius r and density e."""
    if dimension_n < 1 or r < 1 or e < r + 1:
        raise ValueError("need n >= 1, r >= 1 and e >= r + 1")
    pairs = comb(dimension_n, 2)
    return dimension_n * r + pairs, dimension_n * e - pairs


def construct_perfect(
    hub_count: int,
    k: int,
    periphery: Sequence[tuple[str, str]] = (),
    *,
    code: LinearCode,
    p: Prob,
) -> tuple[CodedNetwork, CoveringSet]:
    """Build a network whose radius-k balls around the hubs form a perfect
    covering: each hub pair is joined by a dedicated length-2k chain meeting
    at a shared midpoint, and periphery edges may hang extra vertices within
    distance k of a hub.

    The code and the constant edge probability must keep every path of
    length up to 2k efficient.
    """
    if hub_count < 2:
        raise ValueError("need at least two hubs")
    if k < 1:
        raise ValueError("k must be positive")
    hubs = [str(i) for i in range(1, hub_count + 1)]
    next_id = hub_count + 1
    pairs = list(itertools.combinations(hubs, 2))
    midpoint: dict[tuple[str, str], str] = {}
    for pair in pairs:
        midpoint[pair] = str(next_id)
        next_id += 1
    edges: list[tuple[str, str]] = []
    for a, b in pairs:
        a_side = [str(next_id + t) for t in range(k - 1)]
        next_id += k - 1
        b_side = [str(next_id + t) for t in range(k - 1)]
        next_id += k - 1
        chain = [a, *a_side, midpoint[(a, b)], *reversed(b_side), b]
        edges.extend(zip(chain, chain[1:]))

    core = set(itertools.chain.from_iterable(edges))
    placed = set(core)
    seen_edges = {tuple(sorted(e)) for e in edges}
    for u, v in periphery:
        u, v = str(u), str(v)
        if u not in placed and v not in placed:
            raise ValueError(f"periphery edge ({u!r}, {v!r}) attaches to nothing")
        key = tuple(sorted((u, v)))
        if key in seen_edges:
            raise ValueError(f"duplicate edge ({u!r}, {v!r})")
        seen_edges.add(key)
        edges.append((u, v))
        placed.update((u, v))

    net = SocialNetwork(edges)
    for v in net.vertices:
        if v in core:
            continue
        if min(net.distance(h, v) for h in hubs) > k:
            raise ValueError(f"periphery vertex {v!r} is farther than {k} from every hub")

    csn = CodedNetwork(net, code, p)
    if not efficient_up_to(csn, 2 * k):
        raise InfeasibleError(
            f"code [{code.n},{code.k},{code.min_distance}] with p={p} cannot keep "
            f"length-{2 * k} paths efficient"
        )
    members = [ball_vertices(net, h, k) for h in hubs]
    cov = validate_covering(csn, members)
    assert cov.is_perfect, "hub balls of a constructed network must be perfect"
    density = max(len(m) for m in members)
    dimension, exact = _cover_dimension(net, _valid_balls(csn, k), hub_count)
    return csn, CoveringSet(
        centers=tuple(hubs),
        radius_param=k,
        density=density,
        dimension=dimension,
        dimension_exact=exact,
        covering=cov,
    )
