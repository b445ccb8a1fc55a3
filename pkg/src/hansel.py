import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .config import load_config
from .errors import DomainError, GuardExceeded, InvariantViolation
from .graph_core import BicliqueSystem, Side, VertexSet, as_mask, members, popcount, universe_mask
from .generators import seeded_generator

logger = logging.getLogger(__name__)

_cfg = load_config()


@dataclass(frozen=True)
class ConditionalStep:
    index: int
    before: Fraction
    if_left_deleted: Fraction
    if_right_deleted: Fraction
    deleted: Side


@dataclass(frozen=True)
class ExtractionResult:
    survivors: int
    guarantee: Fraction
    deleted_sides: Tuple[Side, ...] = ()
    steps: Tuple[ConditionalStep, ...] = ()

    @property
    def size(self) -> int:
        return popcount(self.survivors)

    def survivor_list(self) -> List[int]:
        return list(members(self.survivors))


def _scope(system: BicliqueSystem, vertices: Optional[VertexSet]) -> int:
    everything = universe_mask(system.universe_n)
    return everything if vertices is None else as_mask(vertices) & everything


def _check_scaled_bits(system: BicliqueSystem) -> None:
    guard = int(_cfg["hansel"].get("scaled_bits_guard", 10000))
    if system.m > guard:
        raise GuardExceeded(
            f"{system.m} bicliques exceed the exact-arithmetic guard of {guard} scaled bits"
        )


def _degrees(system: BicliqueSystem) -> List[int]:
    degrees = [0] * (system.universe_n + 1)
    for b in system.bicliques:
        for v in members(b.vertices):
            degrees[v] += 1
    return degrees


def _expectation(alive: int, degrees: List[int]) -> Fraction:
    return sum((Fraction(1, 1 << degrees[v]) for v in members(alive)), Fraction(0))


def expected_survivors(system: BicliqueSystem, vertices: Optional[VertexSet] = None) -> Fraction:
    _check_scaled_bits(system)
    return _expectation(_scope(system, vertices), _degrees(system))


def jensen_bound(n: int, weight: int) -> float:
    """n * 2^(-w/n), the convexity lower bound on the expected survivor count."""
    if n <= 0:
        return 0.0
    return n * 2.0 ** (-weight / n)


def randomized_extract(
    system: BicliqueSystem, seed: int, vertices: Optional[VertexSet] = None
) -> ExtractionResult:
    alive = _scope(system, vertices)
    coins = seeded_generator(seed).integers(0, 2, size=system.m)
    sides = tuple(Side.LEFT if coin == 0 else Side.RIGHT for coin in coins)
    for b, side in zip(system.bicliques, sides):
        alive &= ~(b.left if side is Side.LEFT else b.right)
    return ExtractionResult(
        survivors=alive,
        guarantee=expected_survivors(system, vertices),
        deleted_sides=sides,
    )


def derandomized_extract(
    system: BicliqueSystem, vertices: Optional[VertexSet] = None
) -> ExtractionResult:
    _check_scaled_bits(system)
    alive = _scope(system, vertices)
    remaining = _degrees(system)
    current = _expectation(alive, remaining)
    guarantee = current
    sides: List[Side] = []
    steps: List[ConditionalStep] = []

    for index, b in system.indexed():
        # vertices of b lose one pending biclique; the deleted side dies, the other doubles
        left_mass = _expectation(alive & b.left, remaining)
        right_mass = _expectation(alive & b.right, remaining)
        if_left = current - left_mass + right_mass
        if_right = current - right_mass + left_mass
        if max(if_left, if_right) < current:
            raise InvariantViolation(f"conditional expectation dropped at biclique {index}")

        side = Side.LEFT if if_left >= if_right else Side.RIGHT
        steps.append(ConditionalStep(index, current, if_left, if_right, side))
        sides.append(side)
        alive &= ~(b.left if side is Side.LEFT else b.right)
        for v in members(b.vertices):
            remaining[v] -= 1
        current = if_left if side is Side.LEFT else if_right

    result = ExtractionResult(
        survivors=alive,
        guarantee=guarantee,
        deleted_sides=tuple(sides),
        steps=tuple(steps),
    )
    if current != result.size or result.size < math.ceil(guarantee):
        raise InvariantViolation(
            f"extracted {result.size} vertices but the guarantee was {guarantee}"
        )
    logger.debug("Derandomized extraction kept %d vertices (guarantee %s)", result.size, guarantee)
    return result


def enumerate_mean_survivors(
    system: BicliqueSystem, vertices: Optional[VertexSet] = None
) -> Fraction:
    guard = int(_cfg["hansel"].get("enumeration_guard", 20))
    if system.m > guard:
        raise GuardExceeded(f"enumerating 2^{system.m} side choices exceeds the guard m <= {guard}")

    scope = _scope(system, vertices)
    total = 0
    for choice in range(1 << system.m):
        alive = scope
        for position, b in enumerate(system.bicliques):
            alive &= ~(b.right if (choice >> position) & 1 else b.left)
        total += popcount(alive)
    return Fraction(total, 1 << system.m)


def hansel_lower_bound(n: int, alpha: int) -> float:
    if not 1 <= alpha <= n:
        raise DomainError(f"alpha must lie in 1..{n}, got {alpha}")
    return n * math.log2(n / alpha)
