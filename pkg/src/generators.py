import logging
from itertools import combinations
from typing import Iterable, List, Optional, Sequence

import numpy as np

from .config import load_config
from .errors import DomainError, GenerationCapacityError
from .graph_core import Biclique, BicliqueSystem, Graph, members, popcount, vertex_mask

logger = logging.getLogger(__name__)

_cfg = load_config()


def seeded_generator(seed: int) -> np.random.Generator:
    """PCG64 stream for a seed; seeds are taken modulo 2^64."""
    return np.random.Generator(np.random.PCG64(int(seed) % (1 << 64)))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(k: int) -> Graph:
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    return Graph(k, frozenset(combinations(range(1, k + 1), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, frozenset((v, v + 1) for v in range(1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph(n, frozenset((v, v % n + 1) for v in range(1, n + 1)))


def petersen_graph() -> Graph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(i + 5, (i + 1) % 5 + 6) for i in range(1, 6)]
    return Graph.from_edges(10, outer + spokes + inner)


def _parts(sizes: Sequence[int]) -> List[int]:
    if not sizes:
        raise DomainError("at least one part is required")
    if any(size < 1 for size in sizes):
        raise DomainError(f"part sizes must be positive, got {list(sizes)}")
    parts = []
    start = 1
    for size in sizes:
        parts.append(vertex_mask(range(start, start + size)))
        start += size
    return parts


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    parts = _parts(sizes)
    edges = set()
    for i, j in combinations(range(len(parts)), 2):
        for u in members(parts[i]):
            for v in members(parts[j]):
                edges.add((u, v))
    return Graph(sum(sizes), frozenset(edges))


def _star_system(n: int, parts: Sequence[int]) -> BicliqueSystem:
    bicliques = []
    for i, part in enumerate(parts[:-1]):
        bicliques.append(Biclique(part, _union(parts[i + 1:])))
    return BicliqueSystem(n, tuple(bicliques))


def gp_star_partition(sizes: Sequence[int]) -> BicliqueSystem:
    """Bicliques (V_i, V_{i+1} ∪ ... ∪ V_k) for consecutive parts V_1..V_k."""
    parts = _parts(sizes)
    return _star_system(sum(sizes), parts)


def coloring_partition(g: Graph, classes: Iterable[Iterable[int]]) -> BicliqueSystem:
    """
    The star construction over the color classes of g. Only a partition of E(g)
    when g is complete multipartite with exactly these classes as parts.
    """
    parts = [vertex_mask(c) for c in classes]
    parts = [p for p in parts if p]
    if sum(popcount(p) for p in parts) != g.n or vertex_mask(range(1, g.n + 1)) != _union(parts):
        raise DomainError("classes must partition the vertex set")
    adj = g.adjacency
    for i, part in enumerate(parts):
        others = _union(parts) & ~part
        for v in members(part):
            if adj[v] & part:
                raise DomainError(f"class {i + 1} is not independent")
            if adj[v] != others:
                raise DomainError(
                    "graph is not complete multipartite over the given classes; "
                    "the star construction would use non-edges"
                )
    return _star_system(g.n, parts)


def _union(parts: Sequence[int]) -> int:
    out = 0
    for p in parts:
        out |= p
    return out


def ks_code_cover(k: int) -> BicliqueSystem:
    """One biclique per bit of the binary code of v - 1, least significant bit first."""
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    bits = (k - 1).bit_length()
    bicliques = []
    for bit in range(bits):
        zeros = vertex_mask(v for v in range(1, k + 1) if not ((v - 1) >> bit) & 1)
        ones = vertex_mask(v for v in range(1, k + 1) if ((v - 1) >> bit) & 1)
        if zeros and ones:
            bicliques.append(Biclique(zeros, ones))
    return BicliqueSystem(k, tuple(bicliques))


def random_graph(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"edge probability must lie in [0, 1], got {p}")
    rng = seeded_generator(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    draws = rng.random(len(pairs))
    return Graph(n, frozenset(pair for pair, x in zip(pairs, draws) if x < p))


def random_biclique_union(
    n: int, m: int, seed: int, retry_budget: Optional[int] = None
) -> BicliqueSystem:
    """
    m pairwise edge-disjoint bicliques on 1..n, reproducible per (n, m, seed).
    Candidates are shrunk by dropping their most conflicted vertex until no used
    edge remains; an attempt fails when a side empties.
    """
    if n < 2 or m < 1:
        raise DomainError(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if retry_budget is None:
        retry_budget = int(_cfg["generators"].get("retry_budget", 1000))

    rng = seeded_generator(seed)
    used = [0] * (n + 1)
    bicliques: List[Biclique] = []
    max_side = max(1, n // 4)

    for index in range(1, m + 1):
        placed = None
        for _ in range(retry_budget):
            order = [int(v) + 1 for v in rng.permutation(n)]
            left_size = int(rng.integers(1, max_side + 1))
            right_size = int(rng.integers(1, min(max_side, n - left_size) + 1))
            left = vertex_mask(order[:left_size])
            right = vertex_mask(order[left_size:left_size + right_size])
            while left and right:
                worst, worst_conflicts = 0, 0
                for v in members(left):
                    conflicts = popcount(used[v] & right)
                    if conflicts > worst_conflicts:
                        worst, worst_conflicts = v, conflicts
                for v in members(right):
                    conflicts = popcount(used[v] & left)
                    if conflicts > worst_conflicts:
                        worst, worst_conflicts = v, conflicts
                if not worst_conflicts:
                    break
                left &= ~(1 << worst)
                right &= ~(1 << worst)
            if left and right:
                placed = Biclique(left, right).canonical()
                break
        if placed is None:
            raise GenerationCapacityError(
                f"could not place biclique {index} of {m} edge-disjointly on {n} vertices "
                f"within {retry_budget} attempts; try a larger n"
            )
        for v in members(placed.left):
            used[v] |= placed.right
        for v in members(placed.right):
            used[v] |= placed.left
        bicliques.append(placed)

    logger.debug("Generated %d edge-disjoint bicliques on %d vertices (seed %d)", m, n, seed)
    return BicliqueSystem(n, tuple(bicliques))
