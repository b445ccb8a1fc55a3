import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .config import oracle_limit_settings
from .errors import BudgetExceeded, DomainError, GuardExceeded
from .graph_core import (
    Biclique,
    BicliqueSystem,
    Edge,
    Graph,
    members,
    popcount,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleLimits:
    max_vertices_coloring: int = 32
    max_edges_partition: int = 15
    max_edges_cover_weight: int = 10
    time_budget: float = 300.0

    def __post_init__(self):
        for name in ("max_vertices_coloring", "max_edges_partition", "max_edges_cover_weight", "time_budget"):
            if getattr(self, name) <= 0:
                raise DomainError(f"oracle limit {name} must be positive")

    @classmethod
    def from_config(cls, overrides: Optional[Dict[str, float]] = None) -> "OracleLimits":
        return cls(**oracle_limit_settings(overrides))


@dataclass
class OracleResult:
    value: int
    witness: Optional[BicliqueSystem] = None
    nodes: int = 0
    elapsed: float = 0.0


@dataclass
class _Budget:
    seconds: float
    started: float = field(default_factory=time.perf_counter)
    nodes: int = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes % 1024 == 0 and time.perf_counter() - self.started > self.seconds:
            raise BudgetExceeded(
                f"time budget of {self.seconds:g}s exceeded after {self.nodes} search nodes"
            )

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.started


def _limits(limits: Optional[OracleLimits]) -> OracleLimits:
    return limits if limits is not None else OracleLimits.from_config()


def _guard_vertices(g: Graph, limits: OracleLimits) -> None:
    if g.n > limits.max_vertices_coloring:
        raise GuardExceeded(
            f"graph has {g.n} vertices, above the guard of {limits.max_vertices_coloring}"
        )


def greedy_coloring(g: Graph) -> Tuple[Dict[int, int], int]:
    """DSATUR greedy: most saturated vertex first, then highest degree, then lowest id."""
    adj = g.adjacency
    colors: Dict[int, int] = {}
    neighbor_colors = [0] * (g.n + 1)
    uncolored = set(range(1, g.n + 1))

    while uncolored:
        v = min(uncolored, key=lambda u: (-popcount(neighbor_colors[u]), -popcount(adj[u]), u))
        c = 1
        while (neighbor_colors[v] >> c) & 1:
            c += 1
        colors[v] = c
        uncolored.remove(v)
        for u in members(adj[v]):
            neighbor_colors[u] |= 1 << c

    return colors, max(colors.values(), default=0)


def _max_clique(adj: Tuple[int, ...], candidates: int, budget: _Budget) -> int:
    best = [0]

    def expand(clique: int, pool: int) -> None:
        budget.tick()
        if not pool:
            if popcount(clique) > popcount(best[0]):
                best[0] = clique
            return
        if popcount(clique) + popcount(pool) <= popcount(best[0]):
            return
        for v in members(pool):
            if popcount(clique) + popcount(pool) <= popcount(best[0]):
                return
            expand(clique | (1 << v), pool & adj[v])
            pool &= ~(1 << v)

    expand(0, candidates)
    return best[0]


def max_clique(g: Graph, limits: Optional[OracleLimits] = None) -> int:
    limits = _limits(limits)
    _guard_vertices(g, limits)
    return _max_clique(g.adjacency, g.vertices, _Budget(limits.time_budget))


def chromatic_number(g: Graph, limits: Optional[OracleLimits] = None) -> int:
    limits = _limits(limits)
    _guard_vertices(g, limits)
    if g.n == 0:
        return 0

    budget = _Budget(limits.time_budget)
    adj = g.adjacency
    clique = _max_clique(adj, g.vertices, budget)
    lower = popcount(clique)
    _, best = greedy_coloring(g)
    if lower == best:
        return best

    colors = [0] * (g.n + 1)
    neighbor_colors = [0] * (g.n + 1)

    def paint(v: int, c: int) -> List[int]:
        colors[v] = c
        touched = []
        for u in members(adj[v]):
            if not (neighbor_colors[u] >> c) & 1:
                neighbor_colors[u] |= 1 << c
                touched.append(u)
        return touched

    def unpaint(v: int, c: int, touched: List[int]) -> None:
        colors[v] = 0
        for u in touched:
            neighbor_colors[u] &= ~(1 << c)

    # the maximum clique takes colors 1..lower without loss of generality
    for c, v in enumerate(members(clique), start=1):
        paint(v, c)

    def search(used: int, remaining: int) -> None:
        nonlocal best
        budget.tick()
        if best == lower:
            return
        if remaining == 0:
            best = used
            return
        v = max(
            (u for u in range(1, g.n + 1) if not colors[u]),
            key=lambda u: (popcount(neighbor_colors[u]), popcount(adj[u]), -u),
        )
        for c in range(1, min(used + 1, best - 1) + 1):
            if (neighbor_colors[v] >> c) & 1:
                continue
            touched = paint(v, c)
            search(max(used, c), remaining - 1)
            unpaint(v, c, touched)
            if best == lower:
                return

    search(lower, g.n - lower)
    logger.debug("chromatic number %d after %d nodes", best, budget.nodes)
    return best


def maximum_independent_set(g: Graph, limits: Optional[OracleLimits] = None) -> int:
    limits = _limits(limits)
    _guard_vertices(g, limits)
    everything = g.vertices
    complement = tuple(
        (everything & ~row & ~(1 << v)) if v else 0 for v, row in enumerate(g.adjacency)
    )
    return _max_clique(complement, everything, _Budget(limits.time_budget))


def independence_number(g: Graph, limits: Optional[OracleLimits] = None) -> int:
    return popcount(maximum_independent_set(g, limits))


def maximal_bicliques(g: Graph) -> List[Biclique]:
    """
    All maximal bicliques, left side holding the minimum vertex, sorted by sides.
    A maximal biclique is a closed pair L = N(R), R = N(L); its right side lies
    in the neighbourhood of any left vertex, so closing every subset of every
    neighbourhood finds them all.
    """
    adj = g.adjacency
    everything = g.vertices

    def common(mask: int) -> int:
        result = everything
        for v in members(mask):
            result &= adj[v]
        return result

    found = set()
    for v in range(1, g.n + 1):
        neighbourhood = adj[v]
        subset = neighbourhood
        while subset:
            left = common(subset)
            right = common(left)
            if left and right:
                b = Biclique(left, right).canonical()
                found.add((b.left, b.right))
            subset = (subset - 1) & neighbourhood
    return [
        Biclique(left, right)
        for left, right in sorted(found, key=lambda p: (tuple(members(p[0])), tuple(members(p[1]))))
    ]


def _edge_index(g: Graph) -> Tuple[List[Edge], Dict[Edge, int]]:
    edges = g.sorted_edges()
    return edges, {e: i for i, e in enumerate(edges)}


def _biclique_edges(left: int, right: int, index: Dict[Edge, int]) -> int:
    mask = 0
    for u in members(left):
        for v in members(right):
            mask |= 1 << index[(u, v) if u < v else (v, u)]
    return mask


def _bicliques_through(u: int, v: int, adj: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """Every biclique (L, R) of the graph given by adj with u in L and v in R."""
    out = []
    optional_right = adj[u] & ~(1 << v)
    r_extra = optional_right
    while True:
        right = r_extra | (1 << v)
        left_pool = adj[v]
        for r in members(right):
            left_pool &= adj[r]
        optional_left = left_pool & ~(1 << u)
        l_extra = optional_left
        while True:
            out.append((l_extra | (1 << u), right))
            if not l_extra:
                break
            l_extra = (l_extra - 1) & optional_left
        if not r_extra:
            break
        r_extra = (r_extra - 1) & optional_right
    return out


def _order_candidates(candidates: List[Tuple[int, int]], key_edges) -> List[Tuple[int, int]]:
    return sorted(
        candidates,
        key=lambda p: (-key_edges(p), tuple(members(p[0])), tuple(members(p[1]))),
    )


def _witness(n: int, chosen: List[Tuple[int, int]]) -> BicliqueSystem:
    return BicliqueSystem(n, tuple(Biclique(left, right).canonical() for left, right in chosen))


def min_biclique_partition(g: Graph, limits: Optional[OracleLimits] = None) -> OracleResult:
    limits = _limits(limits)
    if len(g.edges) > limits.max_edges_partition:
        raise GuardExceeded(
            f"graph has {len(g.edges)} edges, above the partition guard of {limits.max_edges_partition}"
        )
    budget = _Budget(limits.time_budget)
    edges, index = _edge_index(g)
    full = (1 << len(edges)) - 1

    best_count = len(edges)
    best_chosen = [(1 << u, 1 << v) for u, v in edges]
    seen: Dict[int, int] = {}
    chosen: List[Tuple[int, int]] = []

    def adjacency_of(uncovered: int) -> Tuple[int, ...]:
        adj = [0] * (g.n + 1)
        for i in members(uncovered):
            a, b = edges[i]
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        return tuple(adj)

    def search(uncovered: int) -> None:
        nonlocal best_count, best_chosen
        budget.tick()
        if not uncovered:
            if len(chosen) < best_count:
                best_count = len(chosen)
                best_chosen = list(chosen)
            return
        if len(chosen) + 1 >= best_count:
            return
        if seen.get(uncovered, best_count + 1) <= len(chosen):
            return
        seen[uncovered] = len(chosen)

        first = uncovered & -uncovered
        u, v = edges[first.bit_length() - 1]
        candidates = _bicliques_through(u, v, adjacency_of(uncovered))
        masks = {p: _biclique_edges(p[0], p[1], index) for p in candidates}
        for p in _order_candidates(candidates, lambda p: popcount(masks[p])):
            chosen.append(p)
            search(uncovered & ~masks[p])
            chosen.pop()

    search(full)
    logger.info("Minimum biclique partition: %d bicliques (%d nodes)", best_count, budget.nodes)
    return OracleResult(
        value=best_count,
        witness=_witness(g.n, best_chosen),
        nodes=budget.nodes,
        elapsed=budget.elapsed,
    )


def _greedy_cover(g: Graph, index: Dict[Edge, int]) -> List[Tuple[int, int]]:
    """Maximal bicliques picked by uncovered edges per vertex; an upper bound."""
    pool = [(b.left, b.right, _biclique_edges(b.left, b.right, index)) for b in maximal_bicliques(g)]
    uncovered = (1 << len(index)) - 1
    chosen = []
    while uncovered:
        left, right, mask = max(
            pool, key=lambda t: (popcount(t[2] & uncovered) / (popcount(t[0]) + popcount(t[1])))
        )
        chosen.append((left, right))
        uncovered &= ~mask
    return chosen


def min_cover_weight(g: Graph, limits: Optional[OracleLimits] = None) -> OracleResult:
    limits = _limits(limits)
    if len(g.edges) > limits.max_edges_cover_weight:
        raise GuardExceeded(
            f"graph has {len(g.edges)} edges, above the cover-weight guard of {limits.max_edges_cover_weight}"
        )
    budget = _Budget(limits.time_budget)
    edges, index = _edge_index(g)
    full = (1 << len(edges)) - 1
    adj = g.adjacency

    best_chosen = _greedy_cover(g, index) if edges else []
    best_weight = sum(popcount(l) + popcount(r) for l, r in best_chosen)
    seen: Dict[int, int] = {}
    chosen: List[Tuple[int, int]] = []
    through: Dict[Edge, List[Tuple[int, int, int]]] = {}

    def candidates_for(edge: Edge) -> List[Tuple[int, int, int]]:
        if edge not in through:
            pairs = _bicliques_through(edge[0], edge[1], adj)
            masks = {p: _biclique_edges(p[0], p[1], index) for p in pairs}
            ordered = _order_candidates(
                pairs, lambda p: popcount(masks[p]) / (popcount(p[0]) + popcount(p[1]))
            )
            through[edge] = [(l, r, masks[(l, r)]) for l, r in ordered]
        return through[edge]

    def search(uncovered: int, weight: int) -> None:
        nonlocal best_weight, best_chosen
        budget.tick()
        if not uncovered:
            if weight < best_weight:
                best_weight = weight
                best_chosen = list(chosen)
            return
        # any further biclique has order at least 2
        if weight + 2 >= best_weight:
            return
        if seen.get(uncovered, best_weight + 1) <= weight:
            return
        seen[uncovered] = weight

        first = uncovered & -uncovered
        for left, right, mask in candidates_for(edges[first.bit_length() - 1]):
            order = popcount(left) + popcount(right)
            if weight + order >= best_weight:
                continue
            chosen.append((left, right))
            search(uncovered & ~mask, weight + order)
            chosen.pop()

    search(full, 0)
    logger.info("Minimum cover weight: %d (%d nodes)", best_weight, budget.nodes)
    return OracleResult(
        value=best_weight,
        witness=_witness(g.n, best_chosen),
        nodes=budget.nodes,
        elapsed=budget.elapsed,
    )
