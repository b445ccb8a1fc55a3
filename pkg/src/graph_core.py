from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import SizeMismatchError, StructureError

Edge = Tuple[int, int]
VertexSet = Union[int, Iterable[int]]


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


def vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def as_mask(s: VertexSet) -> int:
    if isinstance(s, int):
        return s
    return vertex_mask(s)


def members(mask: int) -> Iterator[int]:
    """Vertices of a bitset in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def universe_mask(n: int) -> int:
    return ((1 << (n + 1)) - 1) & ~1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise StructureError(f"vertex count must be nonnegative, got {self.n}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise StructureError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise StructureError(f"edge {{{u},{v}}} has an endpoint outside 1..{self.n}")
            normalized.add(normalize_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, frozenset(normalize_edge(u, v) for u, v in edges))

    @cached_property
    def adjacency(self) -> Tuple[int, ...]:
        """Neighbourhood bitsets indexed by vertex id (index 0 unused)."""
        adj = [0] * (self.n + 1)
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @property
    def vertices(self) -> int:
        return universe_mask(self.n)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edges

    def is_independent(self, s: VertexSet) -> bool:
        mask = as_mask(s)
        return all(not (self.adjacency[v] & mask) for v in members(mask))

    def induced(self, s: VertexSet) -> "Graph":
        """Same universe, only the edges with both endpoints in s."""
        mask = as_mask(s)
        return Graph(
            self.n,
            frozenset((u, v) for u, v in self.edges if (mask >> u) & 1 and (mask >> v) & 1),
        )


def induced_subgraph(g: Graph, s: VertexSet) -> Tuple[Graph, Tuple[int, ...]]:
    """
    Induced subgraph relabelled to 1..|s| in ascending order of the original ids.
    Returns the graph and the original id of every new vertex (index 0 unused).
    """
    mask = as_mask(s)
    originals = (0,) + tuple(members(mask))
    new_id = {v: i for i, v in enumerate(originals) if i}
    edges = frozenset(
        (new_id[u], new_id[v]) for u, v in g.edges if u in new_id and v in new_id
    )
    return Graph(len(originals) - 1, edges), originals


@dataclass(frozen=True)
class Biclique:
    left: int
    right: int

    def __post_init__(self):
        if not self.left or not self.right:
            raise StructureError("both sides of a biclique must be nonempty")
        if (self.left | self.right) & 1:
            raise StructureError("vertex ids start at 1")
        if self.left & self.right:
            overlap = list(members(self.left & self.right))
            raise StructureError(f"sides overlap in {overlap}")

    @classmethod
    def of(cls, left: Iterable[int], right: Iterable[int]) -> "Biclique":
        return cls(vertex_mask(left), vertex_mask(right))

    @property
    def vertices(self) -> int:
        return self.left | self.right

    @property
    def order(self) -> int:
        return popcount(self.left) + popcount(self.right)

    def left_vertices(self) -> Tuple[int, ...]:
        return tuple(members(self.left))

    def right_vertices(self) -> Tuple[int, ...]:
        return tuple(members(self.right))

    def edges(self) -> Iterator[Edge]:
        for u in members(self.left):
            for v in members(self.right):
                yield normalize_edge(u, v)

    def canonical(self) -> "Biclique":
        """Orientation with the minimum vertex on the left."""
        low = self.vertices & -self.vertices
        return self if self.left & low else Biclique(self.right, self.left)


@dataclass(frozen=True)
class BicliqueSystem:
    universe_n: int
    bicliques: Tuple[Biclique, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "bicliques", tuple(self.bicliques))
        if self.universe_n < 0:
            raise StructureError(f"universe size must be nonnegative, got {self.universe_n}")
        limit = universe_mask(self.universe_n)
        for index, b in enumerate(self.bicliques, start=1):
            if not isinstance(b, Biclique):
                raise StructureError(f"expected a Biclique, got {type(b).__name__}", index)
            if b.vertices & ~limit:
                outside = [v for v in members(b.vertices & ~limit)]
                raise StructureError(f"vertices {outside} outside 1..{self.universe_n}", index)

    @classmethod
    def from_sets(
        cls, universe_n: int, pairs: Iterable[Tuple[Iterable[int], Iterable[int]]]
    ) -> "BicliqueSystem":
        bicliques = []
        for index, (left, right) in enumerate(pairs, start=1):
            try:
                bicliques.append(Biclique.of(left, right))
            except StructureError as exc:
                raise StructureError(str(exc), index) from exc
        return cls(universe_n, tuple(bicliques))

    @property
    def m(self) -> int:
        return len(self.bicliques)

    def __len__(self) -> int:
        return len(self.bicliques)

    def __getitem__(self, index: int) -> Biclique:
        """1-based access, matching the biclique numbering in reports."""
        if not 1 <= index <= len(self.bicliques):
            raise IndexError(f"biclique index {index} outside 1..{len(self.bicliques)}")
        return self.bicliques[index - 1]

    def indexed(self) -> Iterator[Tuple[int, Biclique]]:
        return enumerate(self.bicliques, start=1)

    def as_sets(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        return [(b.left_vertices(), b.right_vertices()) for b in self.bicliques]


@dataclass(frozen=True)
class CoverStats:
    weight: int
    degrees: Dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationReport:
    check: str
    ok: bool
    duplicate_edge: Optional[Edge] = None
    duplicate_bicliques: Tuple[int, ...] = ()
    extraneous_edge: Optional[Edge] = None
    extraneous_biclique: Optional[int] = None
    uncovered_edge: Optional[Edge] = None

    def describe(self) -> str:
        if self.ok:
            return f"{self.check}: ok"
        problems = []
        if self.duplicate_edge is not None:
            first, second = self.duplicate_bicliques[:2]
            problems.append(
                f"edge {{{self.duplicate_edge[0]},{self.duplicate_edge[1]}}} "
                f"produced by bicliques {first} and {second}"
            )
        if self.extraneous_edge is not None:
            problems.append(
                f"generated edge {{{self.extraneous_edge[0]},{self.extraneous_edge[1]}}} "
                f"(biclique {self.extraneous_biclique}) is not in the graph"
            )
        if self.uncovered_edge is not None:
            problems.append(
                f"edge {{{self.uncovered_edge[0]},{self.uncovered_edge[1]}}} is not covered"
            )
        return f"{self.check}: failed, " + "; ".join(problems)

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "ok": self.ok,
            "duplicate_edge": list(self.duplicate_edge) if self.duplicate_edge else None,
            "duplicate_bicliques": list(self.duplicate_bicliques),
            "extraneous_edge": list(self.extraneous_edge) if self.extraneous_edge else None,
            "extraneous_biclique": self.extraneous_biclique,
            "uncovered_edge": list(self.uncovered_edge) if self.uncovered_edge else None,
        }


def _producers(system: BicliqueSystem) -> Dict[Edge, List[int]]:
    produced: Dict[Edge, List[int]] = defaultdict(list)
    for index, b in system.indexed():
        for edge in b.edges():
            produced[edge].append(index)
    return produced


def union_graph(system: BicliqueSystem) -> Graph:
    edges = set()
    for b in system.bicliques:
        edges.update(b.edges())
    return Graph(system.universe_n, frozenset(edges))


def validate_partition(system: BicliqueSystem) -> ValidationReport:
    produced = _producers(system)
    for edge in sorted(produced):
        sources = produced[edge]
        if len(sources) > 1:
            return ValidationReport(
                check="partition",
                ok=False,
                duplicate_edge=edge,
                duplicate_bicliques=tuple(sources[:2]),
            )
    return ValidationReport(check="partition", ok=True)


def validate_cover(system: BicliqueSystem, g: Graph) -> ValidationReport:
    if system.universe_n != g.n:
        raise SizeMismatchError(
            f"system universe has {system.universe_n} vertices but the graph has {g.n}"
        )
    produced = _producers(system)

    extraneous = next((e for e in sorted(produced) if e not in g.edges), None)
    uncovered = next((e for e in g.sorted_edges() if e not in produced), None)

    return ValidationReport(
        check="cover",
        ok=extraneous is None and uncovered is None,
        extraneous_edge=extraneous,
        extraneous_biclique=produced[extraneous][0] if extraneous is not None else None,
        uncovered_edge=uncovered,
    )


def cuts(b: Biclique, s: VertexSet) -> bool:
    mask = as_mask(s)
    return bool(mask & b.left) and bool(mask & b.right)


def restrict(system: BicliqueSystem, s: VertexSet) -> BicliqueSystem:
    mask = as_mask(s)
    kept = tuple(
        Biclique(b.left & mask, b.right & mask)
        for b in system.bicliques
        if b.left & mask and b.right & mask
    )
    return BicliqueSystem(system.universe_n, kept)


def cover_stats(system: BicliqueSystem) -> CoverStats:
    degrees = {v: 0 for v in range(1, system.universe_n + 1)}
    weight = 0
    for b in system.bicliques:
        for v in members(b.vertices):
            degrees[v] += 1
        weight += b.order
    return CoverStats(weight=weight, degrees=degrees)
