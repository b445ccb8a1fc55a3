"""Staged coloring of a graph given as an edge-disjoint union of bicliques."""
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .config import load_config
from .errors import (
    DomainError,
    IncompleteColoringError,
    InvariantViolation,
    PreconditionError,
    ValidationFailed,
)
from .graph_core import (
    BicliqueSystem,
    Edge,
    Graph,
    Side,
    cuts,
    members,
    popcount,
    universe_mask,
    validate_partition,
)

logger = logging.getLogger(__name__)

_cfg = load_config()

ColorSequence = Tuple[int, ...]
BOTTOM: ColorSequence = ()


@dataclass(frozen=True)
class RefinementGroup:
    prefix: ColorSequence
    members: int
    s_set: int
    cutting: Tuple[int, ...]


@dataclass(frozen=True)
class SideChoice:
    side: Side
    count_left: int
    count_right: int


@dataclass(frozen=True)
class StageRecord:
    stage: int
    prefix: ColorSequence
    s_size: int
    cutting_size: int
    members: int
    extended: int

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "prefix": list(self.prefix),
            "s_size": self.s_size,
            "cutting_size": self.cutting_size,
            "members": self.members,
            "extended": self.extended,
        }


@dataclass(frozen=True)
class Coloring:
    assignment: Mapping[int, ColorSequence]
    m: int = 0
    renumber: bool = True
    trace: Tuple[StageRecord, ...] = ()

    @property
    def distinct_colors(self) -> int:
        return len(set(self.assignment.values()))

    @property
    def stages(self) -> int:
        return max((r.stage for r in self.trace), default=0)

    def max_length(self) -> int:
        return max((len(seq) for seq in self.assignment.values()), default=0)


@dataclass(frozen=True)
class ProperCheck:
    ok: bool
    witness: Optional[Edge] = None


def _side_mask(system: BicliqueSystem, j: int, side: Side) -> int:
    b = system[j]
    return b.left if side is Side.LEFT else b.right


def _count_cutting(system: BicliqueSystem, cutting: Sequence[int], target: int) -> int:
    return sum(1 for l in cutting if cuts(system[l], target))


def canonical_side(j: int, group: RefinementGroup, system: BicliqueSystem) -> SideChoice:
    """
    The side of biclique j that fewer cutting bicliques cut (within S).
    Ties go to LEFT so that exactly one endpoint of every edge of j qualifies.
    """
    b = system[j]
    if not cuts(b, group.s_set):
        raise PreconditionError(f"biclique {j} does not cut the group set")
    count_left = _count_cutting(system, group.cutting, b.left & group.s_set)
    count_right = _count_cutting(system, group.cutting, b.right & group.s_set)
    side = Side.RIGHT if count_right < count_left else Side.LEFT
    return SideChoice(side, count_left, count_right)


def _cutting_list(system: BicliqueSystem, candidates: Sequence[int], s_set: int) -> Tuple[int, ...]:
    # anything cutting a subset of S also cuts S, so candidates can come from the parent
    return tuple(j for j in candidates if cuts(system[j], s_set))


def _child_group(
    system: BicliqueSystem, group: RefinementGroup, j: int, label: int, choice: SideChoice
) -> Tuple[ColorSequence, int, Tuple[int, ...]]:
    s_set = group.s_set & _side_mask(system, j, choice.side)
    return group.prefix + (label,), s_set, _cutting_list(system, group.cutting, s_set)


def _root_group(system: BicliqueSystem) -> RefinementGroup:
    everything = universe_mask(system.universe_n)
    cutting = _cutting_list(system, range(1, system.m + 1), everything)
    return RefinementGroup(BOTTOM, everything, everything, cutting)


def prefix_s_set(system: BicliqueSystem, sequence: Sequence[int], renumber: bool = True) -> int:
    """Recompute the set S of a color sequence without looking at any vertex."""
    group = _root_group(system)
    for position, label in enumerate(sequence, start=1):
        if renumber:
            if not 1 <= label <= len(group.cutting):
                raise PreconditionError(
                    f"label {label} at position {position} exceeds the {len(group.cutting)} cutting bicliques"
                )
            j = group.cutting[label - 1]
        else:
            if label not in group.cutting:
                raise PreconditionError(f"biclique {label} does not cut the set at position {position}")
            j = label
        choice = canonical_side(j, group, system)
        prefix, s_set, cutting = _child_group(system, group, j, label, choice)
        group = RefinementGroup(prefix, s_set, s_set, cutting)
    return group.s_set


def mv_color(
    system: BicliqueSystem,
    renumber: Optional[bool] = None,
    debug_checks: Optional[bool] = None,
) -> Coloring:
    mv_cfg = _cfg.get("mv_coloring", {})
    if renumber is None:
        renumber = bool(mv_cfg.get("renumber", True))
    if debug_checks is None:
        debug_checks = bool(mv_cfg.get("debug_checks", True))

    report = validate_partition(system)
    if not report.ok:
        raise ValidationFailed(report)

    m = system.m
    assignment: Dict[int, ColorSequence] = {v: BOTTOM for v in range(1, system.universe_n + 1)}
    groups: List[RefinementGroup] = [_root_group(system)]
    trace: List[StageRecord] = []
    stage = 0

    while any(group.cutting for group in groups):
        stage += 1
        children: Dict[ColorSequence, List[int]] = {}
        child_sets: Dict[ColorSequence, Tuple[int, Tuple[int, ...]]] = {}

        for group in groups:
            if not group.cutting:
                continue
            choices = {j: canonical_side(j, group, system) for j in group.cutting}
            extended = 0
            for v in members(group.members):
                for rank, j in enumerate(group.cutting, start=1):
                    if not (_side_mask(system, j, choices[j].side) >> v) & 1:
                        continue
                    label = rank if renumber else j
                    prefix, s_set, cutting = _child_group(system, group, j, label, choices[j])
                    child_sets[prefix] = (s_set, cutting)
                    children.setdefault(prefix, []).append(v)
                    assignment[v] = prefix
                    extended += 1
                    break
            trace.append(
                StageRecord(
                    stage=stage,
                    prefix=group.prefix,
                    s_size=popcount(group.s_set),
                    cutting_size=len(group.cutting),
                    members=popcount(group.members),
                    extended=extended,
                )
            )

        groups = []
        for prefix in sorted(children):
            s_set, cutting = child_sets[prefix]
            member_mask = sum(1 << v for v in children[prefix])
            groups.append(RefinementGroup(prefix, member_mask, s_set, cutting))
            if len(cutting) > m >> stage:
                raise InvariantViolation(
                    f"group {prefix} has {len(cutting)} cutting bicliques after stage {stage}, "
                    f"more than {m >> stage}"
                )
            if debug_checks and prefix_s_set(system, prefix, renumber) != s_set:
                raise InvariantViolation(f"set of group {prefix} is not determined by its prefix")

        logger.debug("stage %d: %d groups carried forward", stage, len(groups))

    coloring = Coloring(assignment=assignment, m=m, renumber=renumber, trace=tuple(trace))
    logger.info(
        "Colored %d vertices with %d colors in %d stages (m=%d)",
        system.universe_n,
        coloring.distinct_colors,
        coloring.stages,
        m,
    )
    return coloring


def verify_proper(g: Graph, c: Coloring) -> ProperCheck:
    missing = [v for v in range(1, g.n + 1) if v not in c.assignment]
    if missing:
        raise IncompleteColoringError(f"no color assigned to vertices {missing[:10]}")
    for u, v in g.sorted_edges():
        if c.assignment[u] == c.assignment[v]:
            return ProperCheck(ok=False, witness=(u, v))
    return ProperCheck(ok=True)


def color_classes(c: Coloring) -> Dict[ColorSequence, int]:
    classes: Dict[ColorSequence, int] = {}
    for v, seq in c.assignment.items():
        classes[seq] = classes.get(seq, 0) | (1 << v)
    return classes


def max_sequence_length(m: int) -> int:
    return m.bit_length() if m >= 1 else 0


def colors_bound(m: int) -> int:
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    total = 1
    product = 1
    for i in range(max_sequence_length(m)):
        product *= m >> i
        total += product
    return total


def unrenumbered_colors_bound(m: int) -> int:
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    return 1 + sum(m ** i for i in range(1, max_sequence_length(m) + 1))


def invert_bound(k: int) -> int:
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")
    # bracket then bisect; colors_bound is nondecreasing in m
    high = 1
    while colors_bound(high) < k:
        high *= 2
    low = max(1, high // 2)
    while low < high:
        mid = (low + high) // 2
        if colors_bound(mid) >= k:
            high = mid
        else:
            low = mid + 1
    return low


def theorem1_bound(k: float) -> float:
    if k < 2:
        raise DomainError(f"k must be at least 2, got {k}")
    return 2.0 ** math.sqrt(2.0 * math.log2(k))


def theorem2_main_term(m: float) -> float:
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    return m ** ((1.0 + math.log2(m)) / 2.0)
